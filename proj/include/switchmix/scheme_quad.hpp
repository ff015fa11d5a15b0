#pragma once

#include <vector>

#include "switchmix/scheme.hpp"

namespace switchmix {

enum class QuadWeighting { Naive, Better, Optimal };

struct QuadWeightingKind {
    QuadWeighting variant = QuadWeighting::Optimal;
    // Used by Naive only; Better and Optimal weights depend on l_j alone.
    Time horizon = 0;
};

// Experts born at t: (t, f) for f = t+1..T+1.
std::vector<IntervalExpertParams> spawn_schedule(Time horizon, Time t);

// Weight carried from a dying expert into a newborn one (born.runtime() = l)
// when t = dying.finish = born.start: 1/T, 1/l - 1/(l+1), or
// (2l)^{-1} / (1 + log l)^2. Off that pattern the result is 1 for an expert
// continuing its own run and 0 otherwise. At t = 1 pass a dying expert with
// finish = 1 (the virtual expert seeding the priors).
double transition_weight(const QuadWeightingKind& kind, const IntervalExpertParams& dying,
                         const IntervalExpertParams& born, Time t);

// Weight a newborn of runtime l receives per unit of dying mass.
double newborn_weight(const QuadWeightingKind& kind, Time runtime);

// 1 - sum over newborns at t of their weight.
double quad_validity_margin(const QuadWeightingKind& kind, Time t, Time horizon);

// S log T; S log(T/S) + S log(T/S + 1); S log(2T/S) + 2S log(log(T/S) + 1).
double quad_mixture_regret_bound(QuadWeighting kind, double segments, double horizon);

// Largest number of simultaneously active experts over a run: floor((T+1)^2 / 4).
Time quad_max_pool_size(Time horizon);

class QuadScheme final : public HyperExpertScheme {
public:
    // Enumerates finish times up to horizon + 1 for every variant.
    QuadScheme(QuadWeighting kind, Time horizon);

    [[nodiscard]] QuadWeighting weighting() const { return kind_.variant; }

    std::string_view scheme_name() const override { return "quad"; }
    std::string_view weighting_name() const override;
    std::optional<Time> horizon() const override { return kind_.horizon; }
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
    const IntervalExpertParams& as_interval(const ExpertParams& expert) const;
    void append_newborns(Time t, double log_mass, std::vector<ExpertRecord>& pool) const;

    QuadWeightingKind kind_;
};

} // namespace switchmix
