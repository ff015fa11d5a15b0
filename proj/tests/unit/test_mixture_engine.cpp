#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "gen.hpp"
#include "switchmix/mixture_engine.hpp"
#include "switchmix/scheme_exp.hpp"
#include "switchmix/scheme_log.hpp"
#include "switchmix/scheme_quad.hpp"

using namespace switchmix;

namespace {

// A single expert with unit prior that never restarts.
class SingleScheme final : public HyperExpertScheme {
public:
    std::string_view scheme_name() const override { return "single"; }
    std::string_view weighting_name() const override { return "unit"; }
    std::optional<Time> horizon() const override { return std::nullopt; }
    std::vector<ExpertRecord> initial_pool() const override {
        return {ExpertRecord{ExpertId{1}, DyadicExpertParams{1}, 0.0}};
    }
    std::vector<ExpertRecord> advance(Time, std::vector<ExpertRecord> pool) const override { return pool; }
    Time run_start(const ExpertParams&, Time) const override { return 1; }
    bool is_member(const ExpertParams& e, Time) const override {
        return std::get<DyadicExpertParams>(e).period == 1;
    }
    std::vector<ExpertParams> members(Time) const override { return {DyadicExpertParams{1}}; }
    double log_prior(const ExpertParams&) const override { return 0.0; }
    double log_transition(Time, const ExpertParams&, const ExpertParams&) const override { return 0.0; }
    PathSpec competing_path(std::span<const Time>, Time horizon) const override {
        return PathSpec(static_cast<std::size_t>(horizon), DyadicExpertParams{1});
    }
    double mixture_regret_bound(double, double) const override { return 0.0; }
    ExpertId id_of(const ExpertParams&) const override { return ExpertId{1}; }
};

struct DenseStep {
    double theta_hat;
    double log_total_weight;
};

// Reference: materializes tau over members(t) at every step and replays each
// expert's run from scratch.
std::vector<DenseStep> dense_reference(const HyperExpertScheme& scheme, const std::vector<double>& data) {
    const auto sq = LossFamily::square();
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<DenseStep> out;
    std::vector<ExpertParams> members = scheme.members(1);
    std::vector<double> lw;
    for (const auto& m : members)
        lw.push_back(scheme.log_prior(m));
    for (std::size_t k = 0; k < data.size(); ++k) {
        const Time t = static_cast<Time>(k) + 1;
        std::vector<Estimate> est;
        std::vector<Estimate> live_est;
        std::vector<double> live_lw;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto learner = BaseLearner::follow_the_leader();
            for (Time u = scheme.run_start(members[i], t); u < t; ++u)
                learner.update(data[static_cast<std::size_t>(u - 1)]);
            est.push_back(learner.predict());
            if (lw[i] > ninf) {
                live_est.push_back(est.back());
                live_lw.push_back(lw[i]);
            }
        }
        const double theta = mix_estimates(sq, live_est, live_lw);
        for (std::size_t i = 0; i < members.size(); ++i)
            lw[i] -= 0.5 * evaluate_loss(sq, est[i], data[k]);
        out.push_back({theta, log_sum_exp(lw)});
        if (k + 1 == data.size())
            break;
        const auto next = scheme.members(t + 1);
        std::vector<double> nlw(next.size(), ninf);
        for (std::size_t j = 0; j < next.size(); ++j) {
            std::vector<double> terms;
            for (std::size_t i = 0; i < members.size(); ++i)
                terms.push_back(lw[i] + scheme.log_transition(t + 1, members[i], next[j]));
            nlw[j] = log_sum_exp(terms);
        }
        members = next;
        lw = nlw;
    }
    return out;
}

void expect_matches_dense(std::shared_ptr<const HyperExpertScheme> scheme, const std::vector<double>& data) {
    MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
    const auto& trace = engine.run(data);
    const auto ref = dense_reference(*scheme, data);
    ASSERT_EQ(trace.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
        EXPECT_NEAR(trace.steps()[k].theta_hat, ref[k].theta_hat, 1e-11)
            << scheme->scheme_name() << "." << scheme->weighting_name() << " t=" << k + 1;
        EXPECT_NEAR(trace.steps()[k].log_total_weight, ref[k].log_total_weight, 1e-10)
            << scheme->scheme_name() << "." << scheme->weighting_name() << " t=" << k + 1;
    }
}

} // namespace

TEST(MixtureEngine, SingleExpertFollowsBaseLearner) {
    auto scheme = std::make_shared<SingleScheme>();
    testgen::Gen g(1);
    const auto data = g.observations(40);
    MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
    auto base = BaseLearner::follow_the_leader();
    double base_loss = 0.0;
    for (double x : data) {
        const double p = base.predict();
        const auto rec = engine.step(x);
        EXPECT_NEAR(rec.theta_hat, p, 1e-12);
        base_loss += (p - x) * (p - x);
        base.update(x);
    }
    EXPECT_NEAR(engine.trace().cumulative_loss(), base_loss, 1e-10);
    const PathSpec path(data.size(), DyadicExpertParams{1});
    EXPECT_NEAR(path_bound_slack(engine.trace(), path, *scheme, LossFamily::square(),
                                     BaseLearner::follow_the_leader()),
                0.0, 1e-12);
}

TEST(MixtureEngine, ExpThreeStepHandOracle) {
    // Expert losses for x = [1, 1, -1] by hand: 100 -> 5, 110 -> 6, 101 -> 2, 111 -> 3.
    auto scheme = std::make_shared<ExpScheme>(ExpWeighting::Naive, 3);
    const std::vector<double> data{1.0, 1.0, -1.0};
    MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
    const auto& trace = engine.run(data);
    const auto ftl = BaseLearner::follow_the_leader();
    const auto experts = enumerate_experts(3);
    const double expected[] = {5.0, 6.0, 2.0, 3.0};
    double best_bound = 1e300;
    for (std::size_t i = 0; i < experts.size(); ++i) {
        const PathSpec path(3, experts[i]);
        EXPECT_NEAR(path_loss(path, *scheme, data, LossFamily::square(), ftl), expected[i], 1e-12);
        EXPECT_NEAR(path_mixture_cost(path, *scheme), 3.0 * std::log(2.0), 1e-12);
        best_bound = std::min(best_bound, expected[i] + 2.0 * 3.0 * std::log(2.0));
    }
    EXPECT_LE(trace.cumulative_loss(), best_bound);
    // Frozen from an independent 30-digit replay of the same mixture.
    EXPECT_NEAR(trace.cumulative_loss(), 3.2985046014373157, 1e-12);
}

TEST(MixtureEngine, SparseAdvanceMatchesDenseReference) {
    testgen::Gen g(2024);
    for (auto w : {ExpWeighting::Naive, ExpWeighting::Better, ExpWeighting::Optimal})
        expect_matches_dense(std::make_shared<ExpScheme>(w, 6), g.piecewise(6, 2, 0.3));
    for (auto w : {QuadWeighting::Naive, QuadWeighting::Better, QuadWeighting::Optimal})
        expect_matches_dense(std::make_shared<QuadScheme>(w, 14), g.piecewise(14, 3, 0.3));
    for (auto w : {LogWeighting::Naive, LogWeighting::Better, LogWeighting::Smarter, LogWeighting::Optimal})
        expect_matches_dense(std::make_shared<LogScheme>(w), g.piecewise(70, 3, 0.3));
}

TEST(MixtureEngine, TotalWeightNeverIncreasesAndTelescopes) {
    testgen::Gen g(8);
    const std::vector<std::shared_ptr<const HyperExpertScheme>> schemes = {
        std::make_shared<ExpScheme>(ExpWeighting::Optimal, 10),
        std::make_shared<QuadScheme>(QuadWeighting::Better, 60),
        std::make_shared<LogScheme>(LogWeighting::Naive),
        std::make_shared<LogScheme>(LogWeighting::Optimal),
    };
    for (const auto& scheme : schemes) {
        const Time T = scheme->horizon().value_or(200);
        const auto data = g.piecewise(static_cast<std::size_t>(T), 4, 0.2);
        MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
        double before = engine.log_pool_mass();
        for (double x : data) {
            const auto rec = engine.step(x);
            EXPECT_LE(rec.log_total_weight, before + 1e-9);
            EXPECT_LE(engine.log_pool_mass(), rec.log_total_weight + 1e-9);
            before = engine.log_pool_mass();
        }
        EXPECT_LE(engine.trace().cumulative_loss(), engine.telescoped_loss_bound() + 1e-9);
    }
}

TEST(MixtureEngine, PoolSizesFollowTheSchemes) {
    testgen::Gen g(4);
    {
        auto scheme = std::make_shared<ExpScheme>(ExpWeighting::Naive, 5);
        MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
        for (double x : g.observations(5))
            EXPECT_EQ(engine.step(x).pool_size, 16U);
    }
    {
        auto scheme = std::make_shared<LogScheme>(LogWeighting::Smarter);
        MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
        Time t = 1;
        for (double x : g.observations(300)) {
            const auto expected = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(t)))) + 1;
            EXPECT_EQ(engine.step(x).pool_size, expected);
            EXPECT_LE(static_cast<double>(expected), std::log2(2.0 * static_cast<double>(t)));
            ++t;
        }
    }
}

TEST(MixtureEngine, HorizonIsEnforced) {
    auto scheme = std::make_shared<QuadScheme>(QuadWeighting::Optimal, 3);
    MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
    for (double x : {0.1, 0.2, 0.3})
        engine.step(x);
    EXPECT_THROW(engine.step(0.4), RunComplete);
    EXPECT_THROW(MixtureEngine(LossFamily::square(), nullptr, BaseLearner::follow_the_leader()), InvalidInput);
}

TEST(MixtureEngine, Deterministic) {
    testgen::Gen g(12);
    const auto data = g.piecewise(128, 3, 0.2);
    std::string csv[2];
    for (auto& out : csv) {
        MixtureEngine engine(LossFamily::square(), std::make_shared<LogScheme>(LogWeighting::Better),
                             BaseLearner::follow_the_leader());
        engine.run(data);
        std::ostringstream os;
        engine.trace().write_csv(os);
        out = os.str();
    }
    EXPECT_EQ(csv[0], csv[1]);
    EXPECT_EQ(csv[0].substr(0, RunTrace::kCsvHeader.size()), RunTrace::kCsvHeader);
}

TEST(MixtureEngine, LeadingExpertTiesGoToLowerId) {
    auto scheme = std::make_shared<ExpScheme>(ExpWeighting::Naive, 4);
    MixtureEngine engine(LossFamily::square(), scheme, BaseLearner::follow_the_leader());
    EXPECT_EQ(engine.leading_expert().id.value, 1U);
}

TEST(PathCost, ExpNaiveSingleExpert) {
    const ExpScheme scheme(ExpWeighting::Naive, 4);
    const PathSpec path(4, BinaryExpertParams{0b0101, 4});
    EXPECT_NEAR(path_mixture_cost(path, scheme), 4.0 * std::log(2.0), 1e-12);
}

TEST(PathCost, QuadBetterFullInterval) {
    for (Time T : {1, 5, 64, 500}) {
        const QuadScheme scheme(QuadWeighting::Better, T);
        const std::vector<Time> starts{1};
        const auto path = scheme.competing_path(starts, T);
        EXPECT_NEAR(path_mixture_cost(path, scheme),
                    std::log(static_cast<double>(T)) + std::log(static_cast<double>(T + 1)), 1e-12);
    }
}

TEST(PathCost, ZeroTransitionIsInfeasible) {
    const ExpScheme scheme(ExpWeighting::Better, 3);
    const PathSpec path{BinaryExpertParams{0b001, 3}, BinaryExpertParams{0b011, 3}, BinaryExpertParams{0b011, 3}};
    EXPECT_THROW((void)path_mixture_cost(path, scheme), InfeasiblePath);
    const LogScheme log(LogWeighting::Optimal);
    const PathSpec early{DyadicExpertParams{2}};
    EXPECT_THROW((void)path_mixture_cost(early, log), InfeasiblePath);
}

TEST(PathBound, RandomFeasibleQuadPaths) {
    const auto sq = LossFamily::square();
    const auto ftl = BaseLearner::follow_the_leader();
    constexpr Time T = 32;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        testgen::Gen g(seed);
        auto scheme = std::make_shared<QuadScheme>(QuadWeighting::Optimal, T);
        const auto data = g.piecewise(T, 3, 0.3);
        MixtureEngine engine(sq, scheme, ftl);
        engine.run(data);
        const auto starts = g.starts(static_cast<std::size_t>(g.between(1, 6)), T);
        const auto path = scheme->competing_path(starts, T);
        EXPECT_GE(path_bound_slack(engine.trace(), path, *scheme, sq, ftl), -1e-8);
    }
}

TEST(PathBound, BestExpPathAtEight) {
    const auto sq = LossFamily::square();
    const auto ftl = BaseLearner::follow_the_leader();
    testgen::Gen g(88);
    const auto data = g.piecewise(8, 2, 0.2);
    auto scheme = std::make_shared<ExpScheme>(ExpWeighting::Optimal, 8);
    MixtureEngine engine(sq, scheme, ftl);
    engine.run(data);
    double best = 1e300;
    for (const auto& e : enumerate_experts(8)) {
        const double slack = path_bound_slack(engine.trace(), PathSpec(8, e), *scheme, sq, ftl);
        EXPECT_GE(slack, -1e-8);
        best = std::min(best, slack);
    }
    EXPECT_GE(best, -1e-8);
}

TEST(PathCounts, SwitchesAndRuns) {
    const LogScheme scheme(LogWeighting::Optimal);
    const std::vector<Time> starts{1};
    const auto path = scheme.competing_path(starts, 8);
    EXPECT_EQ(path_switch_count(path), 4U);
    EXPECT_EQ(path_run_count(path, scheme), 4U);
    const ExpScheme exp(ExpWeighting::Naive, 6);
    const std::vector<Time> exp_starts{1, 3, 5};
    const auto exp_path = exp.competing_path(exp_starts, 6);
    EXPECT_EQ(path_switch_count(exp_path), 1U);
    EXPECT_EQ(path_run_count(exp_path, exp), 3U);
}
