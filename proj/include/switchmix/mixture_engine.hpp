#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "switchmix/base_learner.hpp"
#include "switchmix/loss.hpp"
#include "switchmix/scheme.hpp"
#include "switchmix/types.hpp"

namespace switchmix {

struct StepRecord {
    Time t = 0;
    Estimate theta_hat = 0.0;
    Observation x = 0.0;
    double loss = 0.0;
    std::size_t pool_size = 0;
    // log sum_i tilde-P_{i,t} e^{-alpha l_t(theta_{i,t})}.
    double log_total_weight = 0.0;
};

// Decimal with 17 significant digits, as used in every CSV output.
std::string format_real(double v);

class RunTrace {
public:
    static constexpr std::string_view kCsvHeader = "t,theta_hat,x,loss,pool_size,log_total_weight";

    void append(const StepRecord& record);

    [[nodiscard]] std::span<const StepRecord> steps() const { return steps_; }
    [[nodiscard]] std::size_t size() const { return steps_.size(); }
    [[nodiscard]] double cumulative_loss() const { return cumulative_loss_; }
    [[nodiscard]] std::vector<Observation> observations() const;

    void write_csv(std::ostream& out) const;

private:
    std::vector<StepRecord> steps_;
    double cumulative_loss_ = 0.0;
};

// Runs the aggregation over a scheme's hyper-experts. Base-learner runs are
// shared between experts: the state of any run depends only on its start time
// and the data since, so one learner per live start serves every expert that
// is inside a run with that start.
class MixtureEngine {
public:
    MixtureEngine(LossFamily family, std::shared_ptr<const HyperExpertScheme> scheme,
                  BaseLearner prototype);

    // Predicts theta_hat_t, observes x_t, updates runs and weights.
    StepRecord step(Observation obs);
    const RunTrace& run(std::span<const Observation> data);

    [[nodiscard]] Time next_time() const { return t_; }
    [[nodiscard]] const RunTrace& trace() const { return trace_; }
    [[nodiscard]] std::span<const ExpertRecord> pool() const { return pool_; }
    [[nodiscard]] double log_pool_mass() const;
    [[nodiscard]] const HyperExpertScheme& scheme() const { return *scheme_; }
    [[nodiscard]] const LossFamily& family() const { return family_; }

    // The current prediction of an expert in the pool.
    [[nodiscard]] Estimate expert_estimate(const ExpertParams& expert) const;

    // Highest-weight expert; ties go to the lower id.
    [[nodiscard]] const ExpertRecord& leading_expert() const;

    // -(1/alpha) log sum_i tilde-P_{i,T} e^{-alpha l_T}: upper bound on the
    // cumulative mixture loss after the last step.
    [[nodiscard]] double telescoped_loss_bound() const;

    [[nodiscard]] std::size_t live_runs() const { return runs_.size(); }

private:
    void sync_runs();

    LossFamily family_;
    std::shared_ptr<const HyperExpertScheme> scheme_;
    BaseLearner prototype_;
    std::vector<ExpertRecord> pool_;
    std::map<Time, BaseLearner> runs_;
    RunTrace trace_;
    Time t_ = 1;
};

// W(path) = -sum_t log tau_t(I_{t-1}, I_t) with tau_1 the prior of I_1.
// Throws InfeasiblePath when a factor is zero or an expert is absent.
double path_mixture_cost(const PathSpec& path, const HyperExpertScheme& scheme);

// Losses the path's experts incur on `data`, recomputed by replaying fresh
// base-learner runs from each run start.
double path_loss(const PathSpec& path, const HyperExpertScheme& scheme,
                 std::span<const Observation> data, const LossFamily& family,
                 const BaseLearner& prototype);

// [path loss + W / alpha] - mixture loss; nonnegative up to rounding.
double path_bound_slack(const RunTrace& trace, const PathSpec& path,
                            const HyperExpertScheme& scheme, const LossFamily& family,
                            const BaseLearner& prototype);

// 1 + number of t >= 2 with I_t != I_{t-1}.
std::size_t path_switch_count(const PathSpec& path);

// Base-learner runs along the path: a new run begins wherever the expert
// changes or the expert itself restarts.
std::size_t path_run_count(const PathSpec& path, const HyperExpertScheme& scheme);

} // namespace switchmix
