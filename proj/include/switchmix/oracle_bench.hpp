#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "switchmix/base_learner.hpp"
#include "switchmix/loss.hpp"
#include "switchmix/mixture_engine.hpp"
#include "switchmix/scheme.hpp"

namespace switchmix {

struct FixedFit {
    Estimate theta = 0.0;
    double loss = 0.0;
};

// Best constant estimate in hindsight. Closed form for the square loss,
// a 1e-4 grid scan on [-1, 1] otherwise.
FixedFit best_fixed(std::span<const Observation> data, const LossFamily& family);

// Loss of the best constant found by scanning a grid of the given step.
FixedFit grid_scan_fixed(std::span<const Observation> data, const LossFamily& family,
                         double step = 1e-4);

// S contiguous segments ending at T_1 < ... < T_S = T, each with its estimate.
struct SegmentSpec {
    std::vector<Time> ends;
    std::vector<Estimate> thetas;

    [[nodiscard]] std::size_t segments() const { return ends.size(); }
    [[nodiscard]] Time horizon() const { return ends.empty() ? 0 : ends.back(); }
    [[nodiscard]] std::vector<Time> lengths() const;
    // T_{s-1} + 1 for each segment; the first is 1.
    [[nodiscard]] std::vector<Time> starts() const;

    // Throws InvalidInput unless the ends increase strictly to `horizon` and
    // there is one estimate per segment.
    void validate(Time horizon) const;

    // Segment ends given, estimates fitted per segment.
    static SegmentSpec fitted(std::span<const Observation> data, const LossFamily& family,
                              std::vector<Time> ends);
};

// Loss of the spec's estimates on the data.
double segment_loss(std::span<const Observation> data, const LossFamily& family,
                    const SegmentSpec& spec);

struct SwitchingFit {
    SegmentSpec spec;
    double loss = 0.0;
};

// Best exactly-S-segment piecewise-constant fit. Among optimal segmentations
// the lexicographically smallest vector of ends is returned.
SwitchingFit best_switching(std::span<const Observation> data, const LossFamily& family,
                            std::size_t segments);

struct OracleResult {
    double loss = 0.0;
    // Against the spec's per-segment estimates.
    double regret = 0.0;
    // Base-learner runs used in each segment.
    std::vector<std::size_t> runs_per_segment;
    // Largest regret of a single run against that run's own best constant.
    double max_run_regret = 0.0;
};

// A fresh learner per segment.
OracleResult segment_known_oracle(std::span<const Observation> data, const SegmentSpec& spec,
                                  const BaseLearner& learner);

// Inside each segment, restarts with run lengths 1, 2, 4, ..., the last one
// cut at the segment end.
OracleResult doubling_oracle(std::span<const Observation> data, const SegmentSpec& spec,
                             const BaseLearner& learner);

std::vector<Time> doubling_run_lengths(Time segment_length);

struct RegretReport {
    static constexpr std::string_view kCsvHeader =
        "scheme,weighting,T,S,mix_loss,oracle_loss,regret,path_E,W_measured,W_bound,SE";

    std::string scheme;
    std::string weighting;
    Time horizon = 0;
    std::size_t segments = 0;
    double mix_loss = 0.0;
    double oracle_loss = 0.0;
    double regret = 0.0;
    // Loss of the canonical competing path minus the oracle loss.
    double path_expert_regret = 0.0;
    double mixture_cost = 0.0;
    double mixture_cost_bound = 0.0;
    std::size_t path_segments = 0;
    double alpha = 0.5;

    // path_E + W / alpha - regret; nonnegative on every run.
    [[nodiscard]] double decomposition_slack() const {
        return path_expert_regret + mixture_cost / alpha - regret;
    }

    [[nodiscard]] std::string csv_row() const;
};

// Splits the mixture's regret against `spec` into the canonical path's expert
// regret and its mixture cost. Throws BoundViolation if the split fails by
// more than 1e-8.
RegretReport decompose_regret(const RunTrace& trace, const SegmentSpec& spec,
                              const HyperExpertScheme& scheme, const LossFamily& family,
                              const BaseLearner& prototype);

} // namespace switchmix
