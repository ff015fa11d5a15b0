#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "switchmix/types.hpp"

namespace switchmix {

// An online learner for the square loss that competes with the best fixed
// estimate. Values are independent; copying a learner forks its state.
class BaseLearner {
public:
    enum class Kind { FollowTheLeader, GridAggregation };

    static constexpr std::size_t kDefaultGridSize = 65;

    // Running mean of the observations, clamped to [-1, 1]; predicts 0 cold.
    static BaseLearner follow_the_leader();

    // Exponentially weighted aggregation over a uniform grid on [-1, 1],
    // combined with the square-loss mixing rule.
    static BaseLearner grid_aggregation(std::size_t grid_size = kDefaultGridSize);

    void reset();
    [[nodiscard]] Estimate predict() const;
    void update(Observation obs);

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] std::string_view name() const;

    // FollowTheLeader statistics.
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] double sum() const;

    // GridAggregation state.
    [[nodiscard]] std::span<const double> grid_points() const;
    [[nodiscard]] std::span<const double> log_weights() const;

private:
    struct LeaderState {
        std::size_t count = 0;
        double sum = 0.0;
    };
    struct GridState {
        std::vector<double> points;
        std::vector<double> log_weights;
    };

    explicit BaseLearner(LeaderState s) : state_(std::move(s)) {}
    explicit BaseLearner(GridState s) : state_(std::move(s)) {}

    std::variant<LeaderState, GridState> state_;
};

// A concave, nondecreasing regret envelope R_B(t) = c log(t + 1) + d.
struct RegretBoundModel {
    double log_coefficient = 0.0;
    double constant = 0.0;

    static RegretBoundModel logarithmic(double c, double d = 0.0) { return {c, d}; }
    static RegretBoundModel constant_bound(double d) { return {0.0, d}; }
};

// Envelope for follow-the-leader on [-1, 1] data: 4 (1 + log(t + 1)).
RegretBoundModel calibrated_leader_model();

// R_B(t) for t >= 1; the argument may be fractional since bound formulas
// evaluate R_B at averaged segment lengths. Throws InvalidInput for t < 1.
double regret_bound(const RegretBoundModel& model, double t);

} // namespace switchmix
