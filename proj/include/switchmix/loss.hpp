#pragma once

#include <functional>
#include <span>
#include <vector>

#include "switchmix/types.hpp"

namespace switchmix {

// log(sum(exp(v))). Returns -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> values);

// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

enum class LossKind { Square, ExpConcaveMean };

// An alpha-mixable loss together with its mixing rule. The square loss on
// [-1, 1] is mixable with alpha = 1/2 under the two-point substitution rule;
// a lambda-exp-concave loss is lambda-mixable with the weighted mean as rule.
class LossFamily {
public:
    using LossFn = std::function<double(Estimate, Observation)>;

    static LossFamily square();
    static LossFamily exp_concave_mean(double lambda, LossFn loss);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] LossKind kind() const { return kind_; }
    [[nodiscard]] bool in_domain(double value) const;

private:
    LossFamily(LossKind kind, double alpha, LossFn loss);

    friend double evaluate_loss(const LossFamily&, Estimate, Observation);

    LossKind kind_;
    double alpha_;
    LossFn loss_;
};

// Estimates with natural-log weights. The weights may be a sub-probability
// (log-sum-exp <= 0); the mixing rule renormalizes them.
struct WeightedEstimates {
    std::vector<Estimate> estimates;
    std::vector<double> log_weights;

    // Throws InvalidInput on length mismatch, emptiness, NaN weights,
    // total mass above one, or no positive mass.
    void validate() const;
};

double evaluate_loss(const LossFamily& family, Estimate estimate, Observation obs);

Estimate mix_estimates(const LossFamily& family, const WeightedEstimates& w);

// Unchecked path used by the engine; spans must have equal nonzero length.
Estimate mix_estimates(const LossFamily& family,
                       std::span<const Estimate> estimates,
                       std::span<const double> log_weights);

// exp(-alpha l(theta_hat, x)) - sum_i P_i exp(-alpha l(theta_i, x)), with P
// the normalized weights. Nonnegative whenever theta_hat is the mixed estimate.
double mixability_deficit(const LossFamily& family, const WeightedEstimates& w,
                          Estimate theta_hat, Observation obs);

} // namespace switchmix
