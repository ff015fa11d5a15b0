#include "switchmix/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace switchmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_in_domain(const LossFamily& family, double value, const char* what) {
    if (!family.in_domain(value)) {
        throw InvalidInput(std::string(what) + " " + std::to_string(value) +
                           " is outside the loss domain");
    }
}

} // namespace

double log_sum_exp(std::span<const double> values) {
    if (values.empty())
        return kNegInf;
    const double max_value = *std::max_element(values.begin(), values.end());
    if (max_value == kNegInf)
        return kNegInf;
    if (std::isinf(max_value))
        return max_value;
    double sum = 0.0;
    for (double v : values)
        sum += std::exp(v - max_value);
    return max_value + std::log(sum);
}

double log_add_exp(double a, double b) {
    if (a < b)
        std::swap(a, b);
    if (b == kNegInf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

LossFamily::LossFamily(LossKind kind, double alpha, LossFn loss)
    : kind_(kind), alpha_(alpha), loss_(std::move(loss)) {}

LossFamily LossFamily::square() {
    return LossFamily(LossKind::Square, 0.5, nullptr);
}

LossFamily LossFamily::exp_concave_mean(double lambda, LossFn loss) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInput("exp-concavity constant must be positive and finite");
    if (!loss)
        throw InvalidInput("exp-concave family requires a loss callback");
    return LossFamily(LossKind::ExpConcaveMean, lambda, std::move(loss));
}

bool LossFamily::in_domain(double value) const {
    if (kind_ == LossKind::Square)
        return value >= -1.0 && value <= 1.0;
    return std::isfinite(value);
}

double evaluate_loss(const LossFamily& family, Estimate estimate, Observation obs) {
    require_in_domain(family, estimate, "estimate");
    require_in_domain(family, obs, "observation");
    if (family.kind_ == LossKind::Square) {
        const double d = estimate - obs;
        return d * d;
    }
    const double value = family.loss_(estimate, obs);
    if (!(value >= 0.0))
        throw InvalidInput("loss callback returned a negative or NaN value");
    return value;
}

void WeightedEstimates::validate() const {
    if (estimates.empty())
        throw InvalidInput("mixing requires at least one estimate");
    if (estimates.size() != log_weights.size())
        throw InvalidInput("estimates and log-weights differ in length");
    for (double lw : log_weights) {
        if (std::isnan(lw))
            throw InvalidInput("log-weight is NaN");
    }
    const double total = log_sum_exp(log_weights);
    if (total == kNegInf)
        throw InvalidInput("weights carry no mass");
    if (total > 1e-12)
        throw InvalidInput("weights exceed a probability distribution");
}

Estimate mix_estimates(const LossFamily& family, const WeightedEstimates& w) {
    w.validate();
    for (double e : w.estimates)
        require_in_domain(family, e, "estimate");
    return mix_estimates(family, w.estimates, w.log_weights);
}

Estimate mix_estimates(const LossFamily& family,
                       std::span<const Estimate> estimates,
                       std::span<const double> log_weights) {
    const std::size_t n = estimates.size();
    const double log_total = log_sum_exp(log_weights);
    std::vector<double> terms(n);

    if (family.kind() == LossKind::ExpConcaveMean) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mean += std::exp(log_weights[i] - log_total) * estimates[i];
        return mean;
    }

    // theta = 1/2 [log sum P e^{-(theta_i - 1)^2 / 2} - log sum P e^{-(theta_i + 1)^2 / 2}];
    // the q = 0 term of the three-point sum vanishes.
    for (std::size_t i = 0; i < n; ++i) {
        const double d = estimates[i] - 1.0;
        terms[i] = (log_weights[i] - log_total) - 0.5 * d * d;
    }
    const double upper = log_sum_exp(terms);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = estimates[i] + 1.0;
        terms[i] = (log_weights[i] - log_total) - 0.5 * d * d;
    }
    const double lower = log_sum_exp(terms);
    return std::clamp(0.5 * (upper - lower), -1.0, 1.0);
}

double mixability_deficit(const LossFamily& family, const WeightedEstimates& w,
                          Estimate theta_hat, Observation obs) {
    w.validate();
    const double alpha = family.alpha();
    const double log_total = log_sum_exp(w.log_weights);
    double mixed = 0.0;
    for (std::size_t i = 0; i < w.estimates.size(); ++i) {
        mixed += std::exp(w.log_weights[i] - log_total -
                          alpha * evaluate_loss(family, w.estimates[i], obs));
    }
    return std::exp(-alpha * evaluate_loss(family, theta_hat, obs)) - mixed;
}

} // namespace switchmix
