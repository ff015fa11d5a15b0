#include "switchmix/mixture_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace switchmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void write_real(std::ostream& out, double v) { out << format_real(v); }

} // namespace

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void RunTrace::append(const StepRecord& record) {
    steps_.push_back(record);
    cumulative_loss_ += record.loss;
}

std::vector<Observation> RunTrace::observations() const {
    std::vector<Observation> xs;
    xs.reserve(steps_.size());
    for (const auto& s : steps_)
        xs.push_back(s.x);
    return xs;
}

void RunTrace::write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const auto& s : steps_) {
        out << s.t << ',';
        write_real(out, s.theta_hat);
        out << ',';
        write_real(out, s.x);
        out << ',';
        write_real(out, s.loss);
        out << ',' << s.pool_size << ',';
        write_real(out, s.log_total_weight);
        out << '\n';
    }
}

MixtureEngine::MixtureEngine(LossFamily family, std::shared_ptr<const HyperExpertScheme> scheme,
                             BaseLearner prototype)
    : family_(std::move(family)), scheme_(std::move(scheme)), prototype_(std::move(prototype)) {
    if (!scheme_)
        throw InvalidInput("engine requires a scheme");
    prototype_.reset();
    pool_ = scheme_->initial_pool();
    if (pool_.empty())
        throw InvalidInput("scheme produced an empty initial pool");
    sync_runs();
}

void MixtureEngine::sync_runs() {
    std::set<Time> needed;
    for (const auto& e : pool_)
        needed.insert(scheme_->run_start(e.params, t_));
    for (auto it = runs_.begin(); it != runs_.end();) {
        it = needed.contains(it->first) ? std::next(it) : runs_.erase(it);
    }
    for (Time start : needed) {
        if (runs_.contains(start))
            continue;
        if (start != t_)
            throw Error("expert run started at " + std::to_string(start) +
                        " has no learner at t = " + std::to_string(t_));
        runs_.emplace(start, prototype_);
    }
}

Estimate MixtureEngine::expert_estimate(const ExpertParams& expert) const {
    return runs_.at(scheme_->run_start(expert, t_)).predict();
}

StepRecord MixtureEngine::step(Observation obs) {
    if (const auto h = scheme_->horizon(); h && t_ > *h)
        throw RunComplete("scheme horizon " + std::to_string(*h) + " already reached");
    if (!family_.in_domain(obs))
        throw InvalidInput("observation " + std::to_string(obs) + " is outside the loss domain");

    // Runs are few; index them once and resolve each expert by its start.
    std::vector<Time> run_starts;
    std::vector<Estimate> run_estimates;
    run_starts.reserve(runs_.size());
    run_estimates.reserve(runs_.size());
    for (const auto& [start, learner] : runs_) {
        run_starts.push_back(start);
        run_estimates.push_back(learner.predict());
    }
    const auto run_index = [&](const ExpertParams& p) {
        const Time start = scheme_->run_start(p, t_);
        const auto it = std::lower_bound(run_starts.begin(), run_starts.end(), start);
        return static_cast<std::size_t>(it - run_starts.begin());
    };

    const std::size_t n = pool_.size();
    std::vector<std::size_t> expert_run(n);
    std::vector<Estimate> estimates(n);
    std::vector<double> log_weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        expert_run[i] = run_index(pool_[i].params);
        estimates[i] = run_estimates[expert_run[i]];
        log_weights[i] = pool_[i].log_weight;
    }

    StepRecord rec;
    rec.t = t_;
    rec.x = obs;
    rec.pool_size = n;
    rec.theta_hat = mix_estimates(family_, estimates, log_weights);
    rec.loss = evaluate_loss(family_, rec.theta_hat, obs);

    std::vector<double> run_losses;
    run_losses.reserve(run_estimates.size());
    for (Estimate est : run_estimates)
        run_losses.push_back(evaluate_loss(family_, est, obs));
    const double alpha = family_.alpha();
    for (std::size_t i = 0; i < n; ++i) {
        pool_[i].log_weight -= alpha * run_losses[expert_run[i]];
        log_weights[i] = pool_[i].log_weight;
    }
    rec.log_total_weight = log_sum_exp(log_weights);

    for (auto& [start, learner] : runs_)
        learner.update(obs);

    trace_.append(rec);

    const auto h = scheme_->horizon();
    if (!h || t_ < *h) {
        pool_ = scheme_->advance(t_, std::move(pool_));
        ++t_;
        sync_runs();
    } else {
        ++t_;
    }
    return rec;
}

const RunTrace& MixtureEngine::run(std::span<const Observation> data) {
    for (Observation x : data)
        step(x);
    return trace_;
}

double MixtureEngine::log_pool_mass() const {
    std::vector<double> lw;
    lw.reserve(pool_.size());
    for (const auto& e : pool_)
        lw.push_back(e.log_weight);
    return log_sum_exp(lw);
}

const ExpertRecord& MixtureEngine::leading_expert() const {
    const ExpertRecord* best = &pool_.front();
    for (const auto& e : pool_) {
        if (e.log_weight > best->log_weight ||
            (e.log_weight == best->log_weight && e.id < best->id))
            best = &e;
    }
    return *best;
}

double MixtureEngine::telescoped_loss_bound() const {
    if (trace_.size() == 0)
        return 0.0;
    return -trace_.steps().back().log_total_weight / family_.alpha();
}

double path_mixture_cost(const PathSpec& path, const HyperExpertScheme& scheme) {
    if (path.empty())
        throw InvalidInput("empty path");
    double cost = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Time t = static_cast<Time>(k) + 1;
        if (!scheme.is_member(path[k], t))
            throw InfeasiblePath(describe(path[k]) + " is not in the pool at t = " +
                                 std::to_string(t));
        const double lt = (t == 1) ? scheme.log_prior(path[0])
                                   : scheme.log_transition(t, path[k - 1], path[k]);
        if (lt == kNegInf)
            throw InfeasiblePath("zero transition weight into " + describe(path[k]) +
                                 " at t = " + std::to_string(t));
        cost -= lt;
    }
    return cost;
}

double path_loss(const PathSpec& path, const HyperExpertScheme& scheme,
                 std::span<const Observation> data, const LossFamily& family,
                 const BaseLearner& prototype) {
    if (path.size() != data.size())
        throw InvalidInput("path and data lengths differ");
    std::map<Time, BaseLearner> runs;
    double total = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Time t = static_cast<Time>(k) + 1;
        const Time start = scheme.run_start(path[k], t);
        if (start < 1 || start > t)
            throw InfeasiblePath("run start out of range for " + describe(path[k]));
        auto it = runs.find(start);
        if (it == runs.end()) {
            BaseLearner fresh = prototype;
            fresh.reset();
            for (Time u = start; u < t; ++u)
                fresh.update(data[static_cast<std::size_t>(u - 1)]);
            it = runs.emplace(start, std::move(fresh)).first;
        }
        total += evaluate_loss(family, it->second.predict(), data[k]);
        // Keep every cached run current through t.
        for (auto& [s, learner] : runs)
            learner.update(data[k]);
    }
    return total;
}

double path_bound_slack(const RunTrace& trace, const PathSpec& path,
                            const HyperExpertScheme& scheme, const LossFamily& family,
                            const BaseLearner& prototype) {
    if (path.size() != trace.size())
        throw InvalidInput("path and trace lengths differ");
    const double w = path_mixture_cost(path, scheme);
    const auto data = trace.observations();
    const double expert_loss = path_loss(path, scheme, data, family, prototype);
    return expert_loss + w / family.alpha() - trace.cumulative_loss();
}

std::size_t path_switch_count(const PathSpec& path) {
    if (path.empty())
        return 0;
    std::size_t count = 1;
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (!(path[k] == path[k - 1]))
            ++count;
    }
    return count;
}

std::size_t path_run_count(const PathSpec& path, const HyperExpertScheme& scheme) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Time t = static_cast<Time>(k) + 1;
        if (k == 0 || !(path[k] == path[k - 1]) || scheme.run_start(path[k], t) == t)
            ++count;
    }
    return count;
}

} // namespace switchmix
