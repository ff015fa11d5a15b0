#pragma once

#include <cstdint>
#include <vector>

#include "switchmix/scheme.hpp"

namespace switchmix {

enum class ExpWeighting { Naive, Better, Optimal };

inline constexpr Time kDefaultExpCap = 16;
// Masks are 64-bit; beyond this the pool could not be materialized anyway.
inline constexpr Time kMaxExpCap = 30;

// Reads SWITCHMIX_EXP_CAP, falling back to kDefaultExpCap.
Time exp_horizon_cap();

// All 2^{T-1} binary reset vectors with b_1 = 1, ordered by the integer
// b_2 + 2 b_3 + ... (so T = 3 gives 100, 110, 101, 111).
std::vector<BinaryExpertParams> enumerate_experts(Time horizon, Time cap = exp_horizon_cap());

// Exact C(n, k).
std::uint64_t binomial(unsigned n, unsigned k);

// tau_1(I_0, j): 2^{-T}, (1/T) C(T, S_j)^{-1}, or (2eT/S_j)^{-S_j}.
double initial_prior(ExpWeighting kind, const BinaryExpertParams& expert);
double log_initial_prior(ExpWeighting kind, const BinaryExpertParams& expert);

// Mixture-regret bounds as stated: T log 2, log T + S log(T/S), S log(T/S).
double exp_mixture_regret_bound(ExpWeighting kind, double segments, double horizon);

// The same quantities without dropping lower-order terms, i.e. after applying
// C(T, S) <= (eT/S)^S: T log 2, log T + S log(eT/S), S log(2eT/S). These upper
// bound -log tau_1 for every expert with S segments.
double exp_mixture_cost_envelope(ExpWeighting kind, double segments, double horizon);

class ExpScheme final : public HyperExpertScheme {
public:
    ExpScheme(ExpWeighting kind, Time horizon, Time cap = exp_horizon_cap());

    [[nodiscard]] ExpWeighting weighting() const { return kind_; }

    std::string_view scheme_name() const override { return "exp"; }
    std::string_view weighting_name() const override;
    std::optional<Time> horizon() const override { return horizon_; }
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
    const BinaryExpertParams& as_binary(const ExpertParams& expert) const;

    ExpWeighting kind_;
    Time horizon_;
    std::vector<BinaryExpertParams> experts_;
};

} // namespace switchmix
