#pragma once

#include <span>
#include <vector>

#include "switchmix/base_learner.hpp"
#include "switchmix/scheme.hpp"

namespace switchmix {

enum class LogWeighting { Naive, Better, Smarter, Optimal };

// Experts with k = 2^m <= t; there are floor(log2 t) + 1 of them.
std::vector<DyadicExpertParams> active_experts(Time t);

// Restart structure at step t: the experts whose run begins at t (z_{k,t} = 1,
// i.e. k divides t) and the largest such period g_t. The set is closed under
// halving k.
struct BoundaryContext {
    Time t = 1;
    std::vector<Time> restarting;
    Time g = 1;

    [[nodiscard]] bool restarts(Time period) const { return t % period == 0 && period <= t; }
};

BoundaryContext boundary_context(Time t);

// tau_t(from, to) for t >= 2, with t the step whose weights are being formed
// (from is in the pool at t - 1, to in the pool at t).
double transition_weight(LogWeighting kind, const DyadicExpertParams& from,
                         const DyadicExpertParams& to, const BoundaryContext& ctx);

// 1 - max row sum over the rows that redistribute mass at t. Rows that only
// carry an expert's own mass forward sum to exactly 1 and are not counted.
double log_validity_margin(LogWeighting kind, Time t);

struct DyadicSegment {
    Time start = 1;
    // Power of two; equals the period of the expert running this segment.
    Time length = 1;
    // Last step covered; start + length - 1 unless cut by the horizon.
    Time end = 1;
};

// Covers [1, T] by runs of the logarithmic experts such that no run contains
// a change. `change_times` are the steps at which a new competitor segment
// starts; the origin counts as a change, so t = 1 may be omitted.
std::vector<DyadicSegment> dyadic_split(Time horizon, std::span<const Time> change_times);

// 2 S log2(T/S) log T; S log2(T/S) log(T log2 T / (S log2(T/S)));
// S log2(T/S) log log2 T; S log2(8T/S) log 4.
double log_mixture_regret_bound(LogWeighting kind, double segments, double horizon);

// S log2(T/S) R_B(2T / (S log2(T/S))); zero when S = T.
double doubling_oracle_bound(double segments, double horizon, const RegretBoundModel& model);

class LogScheme final : public HyperExpertScheme {
public:
    explicit LogScheme(LogWeighting kind);

    [[nodiscard]] LogWeighting weighting() const { return kind_; }

    std::string_view scheme_name() const override { return "log"; }
    std::string_view weighting_name() const override;
    std::optional<Time> horizon() const override { return std::nullopt; }
    std::vector<ExpertRecord> initial_pool() const override;
    std::vector<ExpertRecord> advance(Time t, std::vector<ExpertRecord> pool) const override;
    Time run_start(const ExpertParams& expert, Time t) const override;
    bool is_member(const ExpertParams& expert, Time t) const override;
    std::vector<ExpertParams> members(Time t) const override;
    double log_prior(const ExpertParams& expert) const override;
    double log_transition(Time t, const ExpertParams& from, const ExpertParams& to) const override;
    PathSpec competing_path(std::span<const Time> segment_starts, Time horizon) const override;
    double mixture_regret_bound(double segments, double horizon) const override;
    ExpertId id_of(const ExpertParams& expert) const override;

private:
    LogWeighting kind_;
};

} // namespace switchmix
