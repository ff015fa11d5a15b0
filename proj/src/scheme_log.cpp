#include "switchmix/scheme_log.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "switchmix/loss.hpp"

namespace switchmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_power_of_two(Time v) { return v > 0 && std::has_single_bit(static_cast<std::uint64_t>(v)); }

// log2(2t)
double log2_twice(Time t) { return 1.0 + std::log2(static_cast<double>(t)); }

Time pool_count(Time t) { return static_cast<Time>(std::bit_width(static_cast<std::uint64_t>(t))); }

// Largest power of two dividing t.
Time largest_restart(Time t) { return t & -t; }

} // namespace

std::vector<DyadicExpertParams> active_experts(Time t) {
    if (t < 1)
        throw InvalidInput("active experts are defined for t >= 1");
    std::vector<DyadicExpertParams> out;
    for (Time k = 1; k <= t; k *= 2)
        out.push_back({k});
    return out;
}

BoundaryContext boundary_context(Time t) {
    if (t < 1)
        throw InvalidInput("boundary context is defined for t >= 1");
    BoundaryContext ctx;
    ctx.t = t;
    for (Time k = 1; k <= t && t % k == 0; k *= 2)
        ctx.restarting.push_back(k);
    ctx.g = largest_restart(t);
    return ctx;
}

double transition_weight(LogWeighting kind, const DyadicExpertParams& from,
                         const DyadicExpertParams& to, const BoundaryContext& ctx) {
    const Time t = ctx.t;
    if (t < 2 || !from.active_at(t - 1) || !to.active_at(t))
        return 0.0;
    const bool same = from == to;
    const double L = log2_twice(t);
    switch (kind) {
    case LogWeighting::Naive:
        if (same)
            return static_cast<double>(t - 1) / static_cast<double>(t);
        return 1.0 / (static_cast<double>(t) * L);
    case LogWeighting::Better: {
        const double z = static_cast<double>(from.round(t));
        if (same)
            return z != 1.0 ? (z - 1.0) / z : 1.0 / L;
        return 1.0 / (z * L);
    }
    case LogWeighting::Smarter:
    case LogWeighting::Optimal:
        if (!ctx.restarts(from.period))
            return same ? 1.0 : 0.0;
        if (!ctx.restarts(to.period))
            return 0.0;
        if (kind == LogWeighting::Smarter)
            return 1.0 / L;
        return static_cast<double>(to.period) / (2.0 * static_cast<double>(ctx.g));
    }
    return 0.0;
}

double log_validity_margin(LogWeighting kind, Time t) {
    if (t < 1)
        throw InvalidInput("validity margin is defined for t >= 1");
    if (t == 1)
        return 0.0; // the prior puts unit mass on k = 1
    const double L = log2_twice(t);
    const double others = static_cast<double>(pool_count(t) - 1);
    switch (kind) {
    case LogWeighting::Naive:
        return 1.0 - static_cast<double>(t - 1) / static_cast<double>(t) -
               others / (static_cast<double>(t) * L);
    case LogWeighting::Better: {
        double worst = 0.0;
        for (Time k = 1; k <= t - 1; k *= 2) {
            const double z = static_cast<double>(DyadicExpertParams{k}.round(t));
            const double row = (z != 1.0) ? (z - 1.0) / z + others / (z * L) : (others + 1.0) / L;
            worst = std::max(worst, row);
        }
        return 1.0 - worst;
    }
    case LogWeighting::Smarter: {
        const auto restarting = static_cast<double>(boundary_context(t).restarting.size());
        return 1.0 - restarting / L;
    }
    case LogWeighting::Optimal:
        // sum over k | t of k / (2g) = (2g - 1) / (2g).
        return 1.0 / (2.0 * static_cast<double>(largest_restart(t)));
    }
    return 0.0;
}

std::vector<DyadicSegment> dyadic_split(Time horizon, std::span<const Time> change_times) {
    if (horizon < 1)
        throw InvalidInput("horizon must be at least 1");
    std::vector<Time> changes;
    for (Time c : change_times) {
        if (c < 1 || c > horizon)
            throw InvalidInput("change time " + std::to_string(c) + " outside [1, T]");
        if (c >= 2)
            changes.push_back(c);
    }
    std::sort(changes.begin(), changes.end());
    changes.erase(std::unique(changes.begin(), changes.end()), changes.end());

    // Does [a, e] contain a change c with a < c <= e?
    const auto splits_change = [&](Time a, Time e) {
        const auto it = std::upper_bound(changes.begin(), changes.end(), a);
        return it != changes.end() && *it <= e;
    };

    // Dyadic tree over [0, 2^N - 1] with 2^N > T; intervals holding 0 (the
    // dummy change) or a change are halved.
    const Time root = static_cast<Time>(std::bit_ceil(static_cast<std::uint64_t>(horizon) + 1));
    std::vector<DyadicSegment> out;
    std::vector<std::pair<Time, Time>> stack{{0, root}};
    while (!stack.empty()) {
        const auto [a, len] = stack.back();
        stack.pop_back();
        if (a > horizon)
            continue;
        const Time e = std::min(a + len - 1, horizon);
        if (a == 0 || splits_change(a, e)) {
            if (len > 1) {
                stack.emplace_back(a + len / 2, len / 2);
                stack.emplace_back(a, len / 2);
            }
            continue;
        }
        out.push_back({a, len, e});
    }
    return out;
}

double log_mixture_regret_bound(LogWeighting kind, double S, double T) {
    if (!(S >= 1.0 && S <= T) || T < 2.0)
        throw InvalidInput("bound requires 1 <= S <= T and T >= 2");
    const double l2 = std::log2(T / S);
    switch (kind) {
    case LogWeighting::Naive:
        return 2.0 * S * l2 * std::log(T);
    case LogWeighting::Better:
        if (l2 == 0.0)
            return 0.0;
        return S * l2 * std::log(T * std::log2(T) / (S * l2));
    case LogWeighting::Smarter:
        return S * l2 * std::log(std::log2(T));
    case LogWeighting::Optimal:
        return S * std::log2(8.0 * T / S) * std::log(4.0);
    }
    return 0.0;
}

double doubling_oracle_bound(double S, double T, const RegretBoundModel& model) {
    if (!(S >= 1.0 && S <= T))
        throw InvalidInput("bound requires 1 <= S <= T");
    const double runs = S * std::log2(T / S);
    if (runs == 0.0)
        return 0.0;
    return runs * regret_bound(model, 2.0 * T / runs);
}

LogScheme::LogScheme(LogWeighting kind) : kind_(kind) {}

std::string_view LogScheme::weighting_name() const {
    switch (kind_) {
    case LogWeighting::Naive:
        return "naive";
    case LogWeighting::Better:
        return "better";
    case LogWeighting::Smarter:
        return "smarter";
    case LogWeighting::Optimal:
        return "optimal";
    }
    return "";
}

std::vector<ExpertRecord> LogScheme::initial_pool() const {
    return {ExpertRecord{ExpertId{1}, DyadicExpertParams{1}, 0.0}};
}

std::vector<ExpertRecord> LogScheme::advance(Time t, std::vector<ExpertRecord> pool) const {
    const Time next = t + 1;
    const BoundaryContext ctx = boundary_context(next);
    const double L = log2_twice(next);
    const auto period = [](const ExpertRecord& e) { return std::get<DyadicExpertParams>(e.params).period; };

    if (is_power_of_two(next))
        pool.push_back({ExpertId{static_cast<std::uint64_t>(next)}, DyadicExpertParams{next}, kNegInf});
    const std::size_t n = pool.size();
    // Post-loss masses of the pool at t; the newborn, if any, has none.
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i)
        mass[i] = pool[i].log_weight;

    std::vector<double> terms;
    terms.reserve(n + 1);
    switch (kind_) {
    case LogWeighting::Naive: {
        const double self = std::log(static_cast<double>(t) / static_cast<double>(next));
        const double cross = -std::log(static_cast<double>(next) * L);
        for (std::size_t j = 0; j < n; ++j) {
            terms.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (i != j)
                    terms.push_back(mass[i] + cross);
            }
            pool[j].log_weight = log_add_exp(mass[j] + self, log_sum_exp(terms));
        }
        break;
    }
    case LogWeighting::Better: {
        std::vector<double> log_z(n);
        for (std::size_t i = 0; i < n; ++i)
            log_z[i] = std::log(static_cast<double>(DyadicExpertParams{period(pool[i])}.round(next)));
        const double log_l = std::log(L);
        for (std::size_t j = 0; j < n; ++j) {
            terms.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (i != j)
                    terms.push_back(mass[i] - log_z[i] - log_l);
            }
            const double z = std::exp(log_z[j]);
            const double self = (z != 1.0) ? std::log((z - 1.0) / z) : -log_l;
            pool[j].log_weight = log_add_exp(mass[j] + self, log_sum_exp(terms));
        }
        break;
    }
    case LogWeighting::Smarter:
    case LogWeighting::Optimal: {
        // Experts whose run ends pool their mass; restarting experts split it.
        terms.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (ctx.restarts(period(pool[i])))
                terms.push_back(mass[i]);
        }
        const double pooled = log_sum_exp(terms);
        for (std::size_t j = 0; j < n; ++j) {
            const Time k = period(pool[j]);
            if (!ctx.restarts(k))
                continue;
            const double share = (kind_ == LogWeighting::Smarter)
                                     ? -std::log(L)
                                     : std::log(static_cast<double>(k) / (2.0 * static_cast<double>(ctx.g)));
            pool[j].log_weight = pooled + share;
        }
        break;
    }
    }
    return pool;
}

Time LogScheme::run_start(const ExpertParams& expert, Time t) const {
    const auto& p = std::get<DyadicExpertParams>(expert);
    return p.run_start(t);
}

bool LogScheme::is_member(const ExpertParams& expert, Time t) const {
    const auto* p = std::get_if<DyadicExpertParams>(&expert);
    return p && is_power_of_two(p->period) && p->active_at(t);
}

std::vector<ExpertParams> LogScheme::members(Time t) const {
    std::vector<ExpertParams> out;
    for (const auto& e : active_experts(t))
        out.push_back(e);
    return out;
}

double LogScheme::log_prior(const ExpertParams& expert) const {
    return std::get<DyadicExpertParams>(expert).period == 1 ? 0.0 : kNegInf;
}

double LogScheme::log_transition(Time t, const ExpertParams& from, const ExpertParams& to) const {
    if (t < 2)
        return kNegInf;
    const double w = transition_weight(kind_, std::get<DyadicExpertParams>(from),
                                       std::get<DyadicExpertParams>(to), boundary_context(t));
    return w > 0.0 ? std::log(w) : kNegInf;
}

PathSpec LogScheme::competing_path(std::span<const Time> segment_starts, Time horizon) const {
    PathSpec path;
    path.reserve(static_cast<std::size_t>(horizon));
    for (const auto& seg : dyadic_split(horizon, segment_starts)) {
        for (Time t = seg.start; t <= seg.end; ++t)
            path.push_back(DyadicExpertParams{seg.length});
    }
    return path;
}

double LogScheme::mixture_regret_bound(double segments, double horizon) const {
    return log_mixture_regret_bound(kind_, segments, horizon);
}

ExpertId LogScheme::id_of(const ExpertParams& expert) const {
    return ExpertId{static_cast<std::uint64_t>(std::get<DyadicExpertParams>(expert).period)};
}

} // namespace switchmix
