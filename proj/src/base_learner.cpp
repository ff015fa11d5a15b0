#include "switchmix/base_learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "switchmix/loss.hpp"

namespace switchmix {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_observation(Observation obs) {
    if (!(obs >= -1.0 && obs <= 1.0))
        throw InvalidInput("observation " + std::to_string(obs) + " is outside [-1, 1]");
}

} // namespace

BaseLearner BaseLearner::follow_the_leader() { return BaseLearner(LeaderState{}); }

BaseLearner BaseLearner::grid_aggregation(std::size_t grid_size) {
    if (grid_size < 2)
        throw InvalidInput("grid aggregation needs at least two grid points");
    GridState s;
    s.points.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
        s.points[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    s.log_weights.assign(grid_size, -std::log(static_cast<double>(grid_size)));
    return BaseLearner(std::move(s));
}

void BaseLearner::reset() {
    std::visit(Overloaded{
                   [](LeaderState& s) { s = LeaderState{}; },
                   [](GridState& s) {
                       std::fill(s.log_weights.begin(), s.log_weights.end(),
                                 -std::log(static_cast<double>(s.points.size())));
                   },
               },
               state_);
}

Estimate BaseLearner::predict() const {
    return std::visit(Overloaded{
                          [](const LeaderState& s) -> Estimate {
                              if (s.count == 0)
                                  return 0.0;
                              return std::clamp(s.sum / static_cast<double>(s.count), -1.0, 1.0);
                          },
                          [](const GridState& s) -> Estimate {
                              return mix_estimates(LossFamily::square(), s.points, s.log_weights);
                          },
                      },
                      state_);
}

void BaseLearner::update(Observation obs) {
    require_observation(obs);
    std::visit(Overloaded{
                   [obs](LeaderState& s) {
                       ++s.count;
                       s.sum += obs;
                   },
                   [obs](GridState& s) {
                       // alpha = 1/2 for the square loss.
                       for (std::size_t i = 0; i < s.points.size(); ++i) {
                           const double d = s.points[i] - obs;
                           s.log_weights[i] -= 0.5 * d * d;
                       }
                   },
               },
               state_);
}

BaseLearner::Kind BaseLearner::kind() const {
    return std::holds_alternative<LeaderState>(state_) ? Kind::FollowTheLeader
                                                       : Kind::GridAggregation;
}

std::string_view BaseLearner::name() const {
    return kind() == Kind::FollowTheLeader ? "ftl" : "grid";
}

std::size_t BaseLearner::count() const {
    const auto* s = std::get_if<LeaderState>(&state_);
    return s ? s->count : 0;
}

double BaseLearner::sum() const {
    const auto* s = std::get_if<LeaderState>(&state_);
    return s ? s->sum : 0.0;
}

std::span<const double> BaseLearner::grid_points() const {
    const auto* s = std::get_if<GridState>(&state_);
    return s ? std::span<const double>(s->points) : std::span<const double>();
}

std::span<const double> BaseLearner::log_weights() const {
    const auto* s = std::get_if<GridState>(&state_);
    return s ? std::span<const double>(s->log_weights) : std::span<const double>();
}

RegretBoundModel calibrated_leader_model() { return RegretBoundModel::logarithmic(4.0, 4.0); }

double regret_bound(const RegretBoundModel& model, double t) {
    if (!(t >= 1.0))
        throw InvalidInput("regret bound is defined for t >= 1");
    return model.log_coefficient * std::log(t + 1.0) + model.constant;
}

} // namespace switchmix
