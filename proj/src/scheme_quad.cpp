#include "switchmix/scheme_quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "switchmix/loss.hpp"

namespace switchmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

std::vector<IntervalExpertParams> spawn_schedule(Time horizon, Time t) {
    if (t < 1 || t > horizon)
        throw InvalidInput("spawn time outside [1, T]");
    std::vector<IntervalExpertParams> out;
    out.reserve(static_cast<std::size_t>(horizon + 1 - t));
    for (Time f = t + 1; f <= horizon + 1; ++f)
        out.push_back({t, f});
    return out;
}

double newborn_weight(const QuadWeightingKind& kind, Time runtime) {
    if (runtime < 1)
        return 0.0;
    const double l = static_cast<double>(runtime);
    switch (kind.variant) {
    case QuadWeighting::Naive:
        if (kind.horizon < 1)
            throw InvalidInput("naive quadratic weighting needs the horizon");
        return 1.0 / static_cast<double>(kind.horizon);
    case QuadWeighting::Better:
        // 1/l - 1/(l+1), written without the cancellation.
        return 1.0 / (l * (l + 1.0));
    case QuadWeighting::Optimal: {
        // log(e l) = 1 + log l.
        const double d = 1.0 + std::log(l);
        return 1.0 / (2.0 * l * d * d);
    }
    }
    return 0.0;
}

double transition_weight(const QuadWeightingKind& kind, const IntervalExpertParams& dying,
                         const IntervalExpertParams& born, Time t) {
    if (t == dying.finish && t == born.start)
        return newborn_weight(kind, born.runtime());
    if (dying == born) {
        if (kind.variant == QuadWeighting::Optimal)
            return t != dying.finish ? 1.0 : 0.0;
        return t < dying.finish ? 1.0 : 0.0;
    }
    return 0.0;
}

double quad_validity_margin(const QuadWeightingKind& kind, Time t, Time horizon) {
    if (t < 1 || t > horizon)
        throw InvalidInput("validity margin requires 1 <= t <= T");
    const Time newborns = horizon + 1 - t;
    switch (kind.variant) {
    case QuadWeighting::Naive:
        return 1.0 - static_cast<double>(newborns) / static_cast<double>(kind.horizon);
    case QuadWeighting::Better:
        // Telescoping: sum_{l=1}^{L} 1/l - 1/(l+1) = 1 - 1/(L+1).
        return 1.0 / static_cast<double>(newborns + 1);
    case QuadWeighting::Optimal: {
        double sum = 0.0;
        for (Time l = 1; l <= newborns; ++l)
            sum += newborn_weight(kind, l);
        return 1.0 - sum;
    }
    }
    return 0.0;
}

double quad_mixture_regret_bound(QuadWeighting kind, double S, double T) {
    if (!(S >= 1.0 && S <= T))
        throw InvalidInput("bound requires 1 <= S <= T");
    const double r = T / S;
    switch (kind) {
    case QuadWeighting::Naive:
        return S * std::log(T);
    case QuadWeighting::Better:
        return S * std::log(r) + S * std::log(r + 1.0);
    case QuadWeighting::Optimal:
        return S * std::log(2.0 * r) + 2.0 * S * std::log(std::log(r) + 1.0);
    }
    return 0.0;
}

Time quad_max_pool_size(Time horizon) { return (horizon + 1) * (horizon + 1) / 4; }

QuadScheme::QuadScheme(QuadWeighting kind, Time horizon) : kind_{kind, horizon} {
    if (horizon < 1)
        throw InvalidInput("quadratic scheme needs a horizon of at least 1");
}

std::string_view QuadScheme::weighting_name() const {
    switch (kind_.variant) {
    case QuadWeighting::Naive:
        return "naive";
    case QuadWeighting::Better:
        return "better";
    case QuadWeighting::Optimal:
        return "optimal";
    }
    return "";
}

const IntervalExpertParams& QuadScheme::as_interval(const ExpertParams& expert) const {
    const auto* p = std::get_if<IntervalExpertParams>(&expert);
    if (!p)
        throw InvalidInput("expert does not belong to the quadratic scheme");
    return *p;
}

void QuadScheme::append_newborns(Time t, double log_mass, std::vector<ExpertRecord>& pool) const {
    for (const auto& e : spawn_schedule(kind_.horizon, t)) {
        pool.push_back({id_of(e), e, log_mass + std::log(newborn_weight(kind_, e.runtime()))});
    }
}

std::vector<ExpertRecord> QuadScheme::initial_pool() const {
    // The virtual expert with finish 1 holds unit mass and dies at t = 1.
    std::vector<ExpertRecord> pool;
    append_newborns(1, 0.0, pool);
    return pool;
}

std::vector<ExpertRecord> QuadScheme::advance(Time t, std::vector<ExpertRecord> pool) const {
    if (t >= kind_.horizon)
        throw RunComplete("quadratic scheme has no step after its horizon");
    const Time next = t + 1;
    // Gather the mass of experts finishing at t + 1, then scatter it to newborns.
    std::vector<double> dying;
    std::erase_if(pool, [&](const ExpertRecord& e) {
        if (std::get<IntervalExpertParams>(e.params).finish == next) {
            dying.push_back(e.log_weight);
            return true;
        }
        return false;
    });
    append_newborns(next, log_sum_exp(dying), pool);
    return pool;
}

Time QuadScheme::run_start(const ExpertParams& expert, Time) const {
    return as_interval(expert).start;
}

bool QuadScheme::is_member(const ExpertParams& expert, Time t) const {
    const auto* p = std::get_if<IntervalExpertParams>(&expert);
    return p && p->start >= 1 && p->start <= t && t < p->finish && p->finish <= kind_.horizon + 1;
}

std::vector<ExpertParams> QuadScheme::members(Time t) const {
    std::vector<ExpertParams> out;
    if (t < 1 || t > kind_.horizon)
        return out;
    for (Time s = 1; s <= t; ++s) {
        for (Time f = t + 1; f <= kind_.horizon + 1; ++f)
            out.push_back(IntervalExpertParams{s, f});
    }
    return out;
}

double QuadScheme::log_prior(const ExpertParams& expert) const {
    const auto& p = as_interval(expert);
    if (p.start != 1 || p.finish > kind_.horizon + 1)
        return kNegInf;
    return std::log(transition_weight(kind_, IntervalExpertParams{0, 1}, p, 1));
}

double QuadScheme::log_transition(Time t, const ExpertParams& from, const ExpertParams& to) const {
    if (t < 2 || t > kind_.horizon)
        return kNegInf;
    const double w = transition_weight(kind_, as_interval(from), as_interval(to), t);
    return w > 0.0 ? std::log(w) : kNegInf;
}

PathSpec QuadScheme::competing_path(std::span<const Time> segment_starts, Time horizon) const {
    if (horizon != kind_.horizon)
        throw InvalidInput("competition horizon differs from the scheme horizon");
    if (segment_starts.empty() || segment_starts.front() != 1)
        throw InvalidInput("first segment must start at t = 1");
    PathSpec path;
    path.reserve(static_cast<std::size_t>(horizon));
    for (std::size_t s = 0; s < segment_starts.size(); ++s) {
        const Time start = segment_starts[s];
        const Time finish = (s + 1 < segment_starts.size()) ? segment_starts[s + 1] : horizon + 1;
        if (finish <= start || finish > horizon + 1)
            throw InvalidInput("segment starts must increase within [1, T]");
        for (Time t = start; t < finish; ++t)
            path.push_back(IntervalExpertParams{start, finish});
    }
    return path;
}

double QuadScheme::mixture_regret_bound(double segments, double horizon) const {
    return quad_mixture_regret_bound(kind_.variant, segments, horizon);
}

ExpertId QuadScheme::id_of(const ExpertParams& expert) const {
    const auto& p = as_interval(expert);
    return ExpertId{static_cast<std::uint64_t>(p.start) *
                        static_cast<std::uint64_t>(kind_.horizon + 2) +
                    static_cast<std::uint64_t>(p.finish)};
}

} // namespace switchmix
