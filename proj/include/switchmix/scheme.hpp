#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "switchmix/types.hpp"

namespace switchmix {

// Exponential scheme: b_t = 1 iff a base-learner run starts at t. Bit t-1 of
// `mask` holds b_t; b_1 is always set.
struct BinaryExpertParams {
    std::uint64_t mask = 1;
    Time horizon = 1;

    [[nodiscard]] bool starts_at(Time t) const { return (mask >> (t - 1)) & 1U; }
    [[nodiscard]] int segments() const;
    [[nodiscard]] std::string bits() const;
    friend bool operator==(const BinaryExpertParams&, const BinaryExpertParams&) = default;
};

// Quadratic scheme: one run of the base learner over [start, finish).
struct IntervalExpertParams {
    Time start = 1;
    Time finish = 2;

    [[nodiscard]] Time runtime() const { return finish - start; }
    friend bool operator==(const IntervalExpertParams&, const IntervalExpertParams&) = default;
};

// Logarithmic scheme: runs of length `period` over [c k, (c + 1) k - 1], c >= 1.
struct DyadicExpertParams {
    Time period = 1;

    // z_t = ((t - k) mod k) + 1 for t >= k.
    [[nodiscard]] Time round(Time t) const { return ((t - period) % period) + 1; }
    [[nodiscard]] bool active_at(Time t) const { return t >= period; }
    [[nodiscard]] Time run_start(Time t) const { return (t / period) * period; }
    friend bool operator==(const DyadicExpertParams&, const DyadicExpertParams&) = default;
};

using ExpertParams = std::variant<BinaryExpertParams, IntervalExpertParams, DyadicExpertParams>;

std::string describe(const ExpertParams& params);

struct ExpertRecord {
    ExpertId id;
    ExpertParams params;
    // Natural log of the unnormalized weight tilde-P.
    double log_weight = 0.0;
};

// An expert index sequence I_1..I_T.
using PathSpec = std::vector<ExpertParams>;

// A hyper-expert scheme paired with a weighting. Transition weights tau_t(i, j)
// move mass from the pool at t-1 to the pool at t; tau_1 is the prior.
//
// The weights are exposed twice: sparsely through `advance`, which the engine
// uses, and densely through `log_transition`, which path costs and reference
// checks use.
class HyperExpertScheme {
public:
    virtual ~HyperExpertScheme() = default;

    [[nodiscard]] virtual std::string_view scheme_name() const = 0;
    [[nodiscard]] virtual std::string_view weighting_name() const = 0;

    // Last step the scheme can run, if it has one.
    [[nodiscard]] virtual std::optional<Time> horizon() const = 0;

    // The pool at t = 1 carrying log tau_1(I_0, .).
    [[nodiscard]] virtual std::vector<ExpertRecord> initial_pool() const = 0;

    // Given the pool at t whose log-weights already include the loss factor
    // e^{-alpha l_t}, builds the pool at t + 1.
    [[nodiscard]] virtual std::vector<ExpertRecord> advance(Time t,
                                                            std::vector<ExpertRecord> pool) const = 0;

    // Start of the base-learner run the expert is in at t.
    [[nodiscard]] virtual Time run_start(const ExpertParams& expert, Time t) const = 0;

    [[nodiscard]] virtual bool is_member(const ExpertParams& expert, Time t) const = 0;
    [[nodiscard]] virtual std::vector<ExpertParams> members(Time t) const = 0;

    [[nodiscard]] virtual double log_prior(const ExpertParams& expert) const = 0;
    // log tau_t(from, to) for t >= 2; -inf where the weight is zero.
    [[nodiscard]] virtual double log_transition(Time t, const ExpertParams& from,
                                                const ExpertParams& to) const = 0;

    // Path whose runs restart exactly where a competitor with the given
    // segment starts needs them (segment_starts[0] == 1).
    [[nodiscard]] virtual PathSpec competing_path(std::span<const Time> segment_starts,
                                                  Time horizon) const = 0;

    // Bound on the mixture regret W for S segments over T steps.
    [[nodiscard]] virtual double mixture_regret_bound(double segments, double horizon) const = 0;

    [[nodiscard]] virtual ExpertId id_of(const ExpertParams& expert) const = 0;
};

} // namespace switchmix
