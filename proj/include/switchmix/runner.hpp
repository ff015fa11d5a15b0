#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "switchmix/base_learner.hpp"
#include "switchmix/mixture_engine.hpp"
#include "switchmix/oracle_bench.hpp"
#include "switchmix/scheme.hpp"

namespace switchmix {

enum class BoundaryPlacement { Equal, Random, Geometric };

struct GeneratorSpec {
    std::size_t segments = 1;
    // Empty means draw each segment mean uniformly from [-1, 1].
    std::vector<double> means;
    // Noise is uniform on [-noise, noise].
    double noise = 0.0;
    BoundaryPlacement placement = BoundaryPlacement::Equal;

    // Throws ConfigError.
    void validate() const;
};

struct GeneratedData {
    std::vector<Observation> data;
    // T_1 < ... < T_S = T.
    std::vector<Time> ends;
    std::vector<double> means;
};

// Piecewise-constant means plus noise, clamped to [-1, 1].
GeneratedData generate(const GeneratorSpec& spec, Time horizon, std::uint64_t seed);

// Segment ends for a placement rule. Equal puts T_s = floor(sT/S); Geometric
// doubles each segment's length; Random draws S - 1 distinct cut points.
std::vector<Time> place_boundaries(BoundaryPlacement placement, std::size_t segments, Time horizon,
                                   std::uint64_t seed);

std::string to_string(BoundaryPlacement placement);
BoundaryPlacement parse_placement(const std::string& name);

struct RunConfig {
    std::string loss = "square";
    std::string scheme = "log";
    std::string weighting = "optimal";
    Time horizon = 256;
    // "ftl" or "grid".
    std::string learner = "ftl";
    std::size_t grid_size = BaseLearner::kDefaultGridSize;
    // Empty for synthetic data; otherwise a file with one observation per line.
    std::string data_file;
    GeneratorSpec generator;
    std::uint64_t seed = 1;
    std::filesystem::path out = "out";

    // Applies one key=value setting; throws ConfigError on unknown keys or
    // malformed values.
    void set(const std::string& key, const std::string& value);

    // Scheme/weighting compatibility, horizon limits, generator validity.
    void validate() const;

    static RunConfig load(const std::filesystem::path& file);
    static RunConfig parse(const std::string& text);
};

std::shared_ptr<const HyperExpertScheme> make_scheme(const std::string& scheme,
                                                     const std::string& weighting, Time horizon);
BaseLearner make_learner(const RunConfig& config);

struct RunResult {
    RunTrace trace;
    SegmentSpec spec;
    RegretReport report;
};

// Builds the data, runs the mixture and decomposes its regret. Synthetic
// data is compared against its generating segmentation; file data against
// the best segmentation with the configured number of segments.
RunResult execute(const RunConfig& config);

// execute() and write `trace.csv` and `report.csv` under config.out.
RunResult run(const RunConfig& config);

struct SweepSpec {
    std::vector<Time> horizons;
    std::vector<std::size_t> segments;
    std::vector<std::uint64_t> seeds;
    // "scheme:weighting" pairs; empty runs only the base config's pair.
    std::vector<std::string> schemes;
    unsigned workers = 0;
};

struct SweepRow {
    RegretReport report;
    std::uint64_t seed = 0;

    [[nodiscard]] double regret_per_step() const {
        return report.regret / static_cast<double>(report.horizon);
    }
};

inline constexpr std::string_view kSweepCsvHeader =
    "scheme,weighting,T,S,mix_loss,oracle_loss,regret,path_E,W_measured,W_bound,SE,seed,regret_per_T";

// One row per (scheme, T, S, seed), in that nesting order. Combinations run
// in parallel; rows are returned in order.
std::vector<SweepRow> sweep(const RunConfig& base, const SweepSpec& spec);

// sweep() and write `sweep.csv` under base.out.
std::vector<SweepRow> sweep_to_csv(const RunConfig& base, const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace switchmix
