#include <gtest/gtest.h>

#include <cmath>

#include "cyclefactor/experiments.hpp"

using namespace cyclefactor;

TEST(TailBound, Examples) {
    EXPECT_EQ(tail_bound(17, 0.0), 2.0);
    EXPECT_NEAR(tail_bound(50, 10.0), 2.0 * std::exp(-4.0), 1e-15);
    EXPECT_NEAR(tail_bound(50, 10.0), 0.03663, 1e-5);
    EXPECT_NEAR(tail_bound(1000, 100.0), 2.0 * std::exp(-20.0), 1e-20);
    EXPECT_THROW(tail_bound(0, 1.0), std::invalid_argument);
    EXPECT_THROW(tail_bound(5, -1.0), std::invalid_argument);
}

TEST(TailBound, Monotone) {
    for (std::size_t n : {10u, 100u, 1000u})
        for (double t = 0.0; t < 50.0; t += 0.5) {
            EXPECT_GT(tail_bound(n, t), tail_bound(n, t + 0.5));
            if (t > 0) {
                EXPECT_LT(tail_bound(n, t), tail_bound(n + 1, t));
            }
        }
}

TEST(Hypergeometric, DegenerateMarkedSets) {
    HypergeometricSampler all(30, 12, 30, 1), none(30, 12, 0, 1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(all(), 12u);
        EXPECT_EQ(none(), 0u);
    }
    EXPECT_EQ(sample_hypergeometric(10, 4, 10, 3), 4u);
}

TEST(Hypergeometric, MeanConverges) {
    const std::size_t samples = 100000;
    HypergeometricSampler draw(100, 50, 40, 11);
    double sum = 0.0;
    for (std::size_t i = 0; i < samples; ++i) sum += static_cast<double>(draw());
    // Var X = n (m/N)(1 - m/N)(N - n)/(N - 1)
    const double var = 50.0 * 0.4 * 0.6 * 50.0 / 99.0;
    EXPECT_NEAR(sum / samples, 20.0, 3.0 * std::sqrt(var / samples));
}

TEST(Hypergeometric, MatchesExactPmf) {
    const std::size_t samples = 100000;
    struct Case {
        std::size_t N, n, m;
    };
    for (auto c : {Case{20, 10, 8}, Case{12, 5, 7}}) {
        std::vector<std::size_t> counts(c.n + 1, 0);
        HypergeometricSampler draw(c.N, c.n, c.m, 4);
        for (std::size_t i = 0; i < samples; ++i) ++counts[draw()];
        double total = 0.0;
        for (std::size_t k = 0; k <= c.n; ++k) {
            const double p = hypergeometric_pmf(c.N, c.n, c.m, k);
            total += p;
            const double sigma = std::sqrt(p * (1.0 - p) / samples);
            EXPECT_LE(std::abs(static_cast<double>(counts[k]) / samples - p), 5.0 * sigma + 1e-12) << k;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Hypergeometric, PmfHandValues) {
    // C(4,2) C(4,1) / C(8,3) = 24/56
    EXPECT_NEAR(hypergeometric_pmf(8, 3, 4, 2), 24.0 / 56.0, 1e-15);
    EXPECT_EQ(hypergeometric_pmf(8, 3, 4, 4), 0.0);
}

TEST(TailExperiment, PassesAtStatedPoint) {
    const auto r = tail_experiment({100, 50, 50, 10.0, 100000, 1});
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.empirical, 2.0 * std::exp(-4.0));
    EXPECT_EQ(r.pass, r.recompute_pass());
}

TEST(TailExperiment, ZeroDeviation) {
    const auto r = tail_experiment({100, 50, 50, 0.0, 1000, 1});
    EXPECT_EQ(r.empirical, 1.0);
    EXPECT_EQ(r.bound, 2.0);
    EXPECT_TRUE(r.pass);
}

TEST(TailExperiment, InvalidParams) {
    EXPECT_THROW(tail_experiment({100, 50, 50, 1.0, 0, 1}), std::invalid_argument);
    EXPECT_THROW(tail_experiment({100, 150, 50, 1.0, 10, 1}), std::invalid_argument);
    EXPECT_THROW(tail_experiment({100, 0, 50, 1.0, 10, 1}), std::invalid_argument);
}

TEST(ExperimentReport, PassFollowsFormula) {
    const auto upper = make_report(30, 100, 0.25, BoundKind::Upper);
    EXPECT_NEAR(upper.mc_sigma, std::sqrt(0.3 * 0.7 / 100), 1e-15);
    EXPECT_TRUE(upper.pass);  // 0.3 <= 0.25 + 3 * 0.0458
    EXPECT_FALSE(make_report(60, 100, 0.25, BoundKind::Upper).pass);
    EXPECT_TRUE(make_report(60, 100, 0.5, BoundKind::Lower).pass);
    EXPECT_FALSE(make_report(10, 100, 0.5, BoundKind::Lower).pass);
}

TEST(SplitSuccess, MediumTournament) {
    const auto r = split_success_experiment(512, 40, DegreeMode::Semi, 3);
    EXPECT_GT(r.threshold, 0.0);
    EXPECT_GE(r.report.empirical, 0.5);
    EXPECT_TRUE(r.report.pass);
}

TEST(SplitSuccess, ClampedThresholdAlwaysSucceeds) {
    // 2 * 64^(-1/3) = 0.5 exceeds any tournament's relative semi-degree
    const auto r = split_success_experiment(64, 30, DegreeMode::Semi, 3);
    EXPECT_EQ(r.threshold, 0.0);
    EXPECT_EQ(r.report.empirical, 1.0);
}

TEST(SplitSuccess, TinyAndInvalid) {
    const auto r = split_success_experiment(8, 10, DegreeMode::Total, 1);
    EXPECT_EQ(r.report.samples, 10u);
    EXPECT_THROW(split_success_experiment(9, 10, DegreeMode::Semi, 1), std::invalid_argument);
    EXPECT_THROW(split_success_experiment(6, 10, DegreeMode::Semi, 1), std::invalid_argument);
    EXPECT_THROW(split_success_experiment(16, 0, DegreeMode::Semi, 1), std::invalid_argument);
}
