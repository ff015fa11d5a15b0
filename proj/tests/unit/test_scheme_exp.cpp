#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "switchmix/scheme_exp.hpp"

using namespace switchmix;

namespace {

class CapEnv {
public:
    explicit CapEnv(const char* value) {
        if (value)
            ::setenv("SWITCHMIX_EXP_CAP", value, 1);
        else
            ::unsetenv("SWITCHMIX_EXP_CAP");
    }
    ~CapEnv() { ::unsetenv("SWITCHMIX_EXP_CAP"); }
};

} // namespace

TEST(ExpEnumerate, OrderForThreeSteps) {
    const auto experts = enumerate_experts(3);
    ASSERT_EQ(experts.size(), 4U);
    EXPECT_EQ(experts[0].bits(), "100");
    EXPECT_EQ(experts[1].bits(), "110");
    EXPECT_EQ(experts[2].bits(), "101");
    EXPECT_EQ(experts[3].bits(), "111");
    for (const auto& e : experts)
        EXPECT_TRUE(e.starts_at(1));
}

TEST(ExpEnumerate, SizesAndSegments) {
    for (Time T = 1; T <= 12; ++T) {
        const auto experts = enumerate_experts(T);
        EXPECT_EQ(experts.size(), std::size_t{1} << (T - 1));
        std::vector<std::uint64_t> by_segments(static_cast<std::size_t>(T) + 1, 0);
        for (const auto& e : experts)
            ++by_segments[static_cast<std::size_t>(e.segments())];
        for (Time S = 1; S <= T; ++S)
            EXPECT_EQ(by_segments[static_cast<std::size_t>(S)],
                      binomial(static_cast<unsigned>(T - 1), static_cast<unsigned>(S - 1)));
    }
}

TEST(ExpBinomial, KnownValues) {
    EXPECT_EQ(binomial(4, 2), 6U);
    EXPECT_EQ(binomial(30, 15), 155117520U);
    EXPECT_EQ(binomial(62, 31), 465428353255261088ULL);
    EXPECT_EQ(binomial(5, 7), 0U);
    EXPECT_THROW((void)binomial(100, 50), InvalidInput);
}

TEST(ExpPrior, Examples) {
    const BinaryExpertParams one_segment{0b0001, 4};
    EXPECT_DOUBLE_EQ(initial_prior(ExpWeighting::Naive, one_segment), 1.0 / 16.0);
    const BinaryExpertParams two_segment{0b0101, 3};
    EXPECT_DOUBLE_EQ(initial_prior(ExpWeighting::Better, two_segment), 1.0 / 9.0);
    const BinaryExpertParams t8{0b1, 8};
    EXPECT_NEAR(initial_prior(ExpWeighting::Optimal, t8), 1.0 / (16.0 * std::numbers::e), 1e-15);
}

TEST(ExpPrior, NaiveAndBetterSumToAtMostOne) {
    for (Time T = 1; T <= 14; ++T) {
        double naive = 0.0;
        double better = 0.0;
        double optimal = 0.0;
        for (const auto& e : enumerate_experts(T)) {
            naive += initial_prior(ExpWeighting::Naive, e);
            better += initial_prior(ExpWeighting::Better, e);
            optimal += initial_prior(ExpWeighting::Optimal, e);
        }
        EXPECT_DOUBLE_EQ(naive, 0.5);
        EXPECT_LE(better, 1.0 + 1e-12);
        EXPECT_LE(optimal, 1.0 + 1e-12);
    }
}

TEST(ExpPrior, LogMatchesLinear) {
    for (auto kind : {ExpWeighting::Naive, ExpWeighting::Better, ExpWeighting::Optimal}) {
        for (const auto& e : enumerate_experts(9))
            EXPECT_NEAR(std::exp(log_initial_prior(kind, e)), initial_prior(kind, e), 1e-15);
    }
}

TEST(ExpBound, StatedForms) {
    EXPECT_NEAR(exp_mixture_regret_bound(ExpWeighting::Naive, 1.0, 16.0), 16.0 * std::log(2.0), 1e-12);
    EXPECT_NEAR(exp_mixture_regret_bound(ExpWeighting::Better, 2.0, 16.0),
                std::log(16.0) + 2.0 * std::log(8.0), 1e-12);
    EXPECT_NEAR(exp_mixture_regret_bound(ExpWeighting::Optimal, 4.0, 16.0), 4.0 * std::log(4.0), 1e-12);
}

TEST(ExpBound, EnvelopeCoversEveryPrior) {
    for (Time T = 2; T <= 12; ++T) {
        for (const auto& e : enumerate_experts(T)) {
            const double S = e.segments();
            for (auto kind : {ExpWeighting::Naive, ExpWeighting::Better, ExpWeighting::Optimal}) {
                EXPECT_LE(-log_initial_prior(kind, e),
                          exp_mixture_cost_envelope(kind, S, static_cast<double>(T)) + 1e-12);
            }
        }
    }
}

TEST(ExpScheme, PoolIsFixedAndTransitionsAreIdentity) {
    const ExpScheme scheme(ExpWeighting::Better, 5);
    const auto pool = scheme.initial_pool();
    EXPECT_EQ(pool.size(), 16U);
    const ExpertParams a = BinaryExpertParams{0b00101, 5};
    const ExpertParams b = BinaryExpertParams{0b00111, 5};
    EXPECT_EQ(scheme.log_transition(3, a, a), 0.0);
    EXPECT_EQ(scheme.log_transition(3, a, b), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(scheme.run_start(a, 2), 1);
    EXPECT_EQ(scheme.run_start(a, 3), 3);
    EXPECT_EQ(scheme.run_start(a, 5), 3);
    EXPECT_TRUE(scheme.is_member(a, 4));
    EXPECT_FALSE(scheme.is_member(BinaryExpertParams{0b0010, 5}, 1));
}

TEST(ExpScheme, CompetingPathRestartsAtSegmentStarts) {
    const ExpScheme scheme(ExpWeighting::Optimal, 6);
    const std::vector<Time> starts{1, 4};
    const auto path = scheme.competing_path(starts, 6);
    ASSERT_EQ(path.size(), 6U);
    const auto& e = std::get<BinaryExpertParams>(path.front());
    EXPECT_EQ(e.bits(), "100100");
}

TEST(ExpCap, DefaultRejectsTwenty) {
    const CapEnv env(nullptr);
    EXPECT_EQ(exp_horizon_cap(), kDefaultExpCap);
    EXPECT_THROW(ExpScheme(ExpWeighting::Naive, 20), HorizonTooLarge);
    EXPECT_NO_THROW(ExpScheme(ExpWeighting::Naive, 16));
}

TEST(ExpCap, EnvironmentOverrides) {
    {
        const CapEnv env("4");
        EXPECT_EQ(exp_horizon_cap(), 4);
        EXPECT_THROW(ExpScheme(ExpWeighting::Naive, 5), HorizonTooLarge);
    }
    {
        const CapEnv env("31");
        EXPECT_THROW((void)exp_horizon_cap(), ConfigError);
    }
    {
        const CapEnv env("x");
        EXPECT_THROW((void)exp_horizon_cap(), ConfigError);
    }
}
