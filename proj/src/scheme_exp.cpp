#include "switchmix/scheme_exp.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

namespace switchmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

__extension__ using Wide = unsigned __int128;

} // namespace

Time exp_horizon_cap() {
    const char* env = std::getenv("SWITCHMIX_EXP_CAP");
    if (!env || !*env)
        return kDefaultExpCap;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > kMaxExpCap)
        throw ConfigError("SWITCHMIX_EXP_CAP must be an integer in [1, " +
                          std::to_string(kMaxExpCap) + "]");
    return static_cast<Time>(v);
}

std::vector<BinaryExpertParams> enumerate_experts(Time horizon, Time cap) {
    if (horizon < 1)
        throw InvalidInput("horizon must be at least 1");
    if (horizon > cap || horizon > kMaxExpCap)
        throw HorizonTooLarge("exponential scheme horizon " + std::to_string(horizon) +
                              " exceeds cap " + std::to_string(std::min(cap, kMaxExpCap)));
    const std::uint64_t count = std::uint64_t{1} << (horizon - 1);
    std::vector<BinaryExpertParams> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back({(i << 1) | 1U, horizon});
    return out;
}

std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        // C(n - k + i, i) = C(n - k + i - 1, i - 1) (n - k + i) / i is integral.
        const Wide next = static_cast<Wide>(result) * (n - k + i) / i;
        if (next > std::numeric_limits<std::uint64_t>::max())
            throw InvalidInput("binomial coefficient overflows 64 bits");
        result = static_cast<std::uint64_t>(next);
    }
    return result;
}

int BinaryExpertParams::segments() const { return std::popcount(mask); }

std::string BinaryExpertParams::bits() const {
    std::string s;
    for (Time t = 1; t <= horizon; ++t)
        s.push_back(starts_at(t) ? '1' : '0');
    return s;
}

double log_initial_prior(ExpWeighting kind, const BinaryExpertParams& expert) {
    const double T = static_cast<double>(expert.horizon);
    const int S = expert.segments();
    switch (kind) {
    case ExpWeighting::Naive:
        return -T * std::numbers::ln2;
    case ExpWeighting::Better:
        return -std::log(T) -
               std::log(static_cast<double>(binomial(static_cast<unsigned>(expert.horizon),
                                                     static_cast<unsigned>(S))));
    case ExpWeighting::Optimal:
        return -S * std::log(2.0 * std::numbers::e * T / S);
    }
    return kNegInf;
}

double initial_prior(ExpWeighting kind, const BinaryExpertParams& expert) {
    if (kind == ExpWeighting::Naive)
        return std::ldexp(1.0, -static_cast<int>(expert.horizon));
    return std::exp(log_initial_prior(kind, expert));
}

double exp_mixture_regret_bound(ExpWeighting kind, double S, double T) {
    if (!(S >= 1.0 && S <= T))
        throw InvalidInput("bound requires 1 <= S <= T");
    switch (kind) {
    case ExpWeighting::Naive:
        return T * std::numbers::ln2;
    case ExpWeighting::Better:
        return std::log(T) + S * std::log(T / S);
    case ExpWeighting::Optimal:
        return S * std::log(T / S);
    }
    return 0.0;
}

double exp_mixture_cost_envelope(ExpWeighting kind, double S, double T) {
    if (!(S >= 1.0 && S <= T))
        throw InvalidInput("bound requires 1 <= S <= T");
    switch (kind) {
    case ExpWeighting::Naive:
        return T * std::numbers::ln2;
    case ExpWeighting::Better:
        return std::log(T) + S * std::log(std::numbers::e * T / S);
    case ExpWeighting::Optimal:
        return S * std::log(2.0 * std::numbers::e * T / S);
    }
    return 0.0;
}

ExpScheme::ExpScheme(ExpWeighting kind, Time horizon, Time cap)
    : kind_(kind), horizon_(horizon), experts_(enumerate_experts(horizon, cap)) {}

std::string_view ExpScheme::weighting_name() const {
    switch (kind_) {
    case ExpWeighting::Naive:
        return "naive";
    case ExpWeighting::Better:
        return "better";
    case ExpWeighting::Optimal:
        return "optimal";
    }
    return "";
}

const BinaryExpertParams& ExpScheme::as_binary(const ExpertParams& expert) const {
    const auto* b = std::get_if<BinaryExpertParams>(&expert);
    if (!b || b->horizon != horizon_)
        throw InvalidInput("expert does not belong to this exponential scheme");
    return *b;
}

std::vector<ExpertRecord> ExpScheme::initial_pool() const {
    std::vector<ExpertRecord> pool;
    pool.reserve(experts_.size());
    for (const auto& e : experts_)
        pool.push_back({ExpertId{e.mask}, e, log_initial_prior(kind_, e)});
    return pool;
}

std::vector<ExpertRecord> ExpScheme::advance(Time t, std::vector<ExpertRecord> pool) const {
    if (t >= horizon_)
        throw RunComplete("exponential scheme has no step after its horizon");
    // tau_t(i, i) = 1 for t >= 2: the post-loss mass carries over unchanged.
    return pool;
}

Time ExpScheme::run_start(const ExpertParams& expert, Time t) const {
    const auto& b = as_binary(expert);
    const std::uint64_t upto = (t >= 64) ? b.mask : (b.mask & ((std::uint64_t{1} << t) - 1));
    return static_cast<Time>(std::bit_width(upto));
}

bool ExpScheme::is_member(const ExpertParams& expert, Time t) const {
    const auto* b = std::get_if<BinaryExpertParams>(&expert);
    return b && b->horizon == horizon_ && (b->mask & 1U) && t >= 1 && t <= horizon_ &&
           (b->mask >> horizon_) == 0;
}

std::vector<ExpertParams> ExpScheme::members(Time t) const {
    if (t < 1 || t > horizon_)
        return {};
    return {experts_.begin(), experts_.end()};
}

double ExpScheme::log_prior(const ExpertParams& expert) const {
    return log_initial_prior(kind_, as_binary(expert));
}

double ExpScheme::log_transition(Time t, const ExpertParams& from, const ExpertParams& to) const {
    if (t < 2 || t > horizon_)
        return kNegInf;
    return as_binary(from) == as_binary(to) ? 0.0 : kNegInf;
}

PathSpec ExpScheme::competing_path(std::span<const Time> segment_starts, Time horizon) const {
    if (horizon != horizon_)
        throw InvalidInput("competition horizon differs from the scheme horizon");
    std::uint64_t mask = 0;
    for (Time s : segment_starts) {
        if (s < 1 || s > horizon_)
            throw InvalidInput("segment start outside [1, T]");
        mask |= std::uint64_t{1} << (s - 1);
    }
    if (!(mask & 1U))
        throw InvalidInput("first segment must start at t = 1");
    return PathSpec(static_cast<std::size_t>(horizon_), BinaryExpertParams{mask, horizon_});
}

double ExpScheme::mixture_regret_bound(double segments, double horizon) const {
    return exp_mixture_regret_bound(kind_, segments, horizon);
}

ExpertId ExpScheme::id_of(const ExpertParams& expert) const {
    return ExpertId{as_binary(expert).mask};
}

} // namespace switchmix
