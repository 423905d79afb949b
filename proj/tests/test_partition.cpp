#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cyclefactor/partition.hpp"
#include "test_util.hpp"

using namespace cyclefactor;

namespace {

// Independent recomputation of a side's relative degree via induced().
Ratio recompute(const OrientedGraph& g, const std::vector<VertexId>& side, DegreeMode mode) {
    const auto sub = induced(g, side);
    return {min_degree(sub.graph, mode), side.size()};
}

void expect_equipartition(const OrientedGraph& g, const Partition& p, std::size_t ell) {
    const auto v = verify_partition(g, p, p.mode);
    EXPECT_TRUE(v.structural_ok()) << (v.failures.empty() ? "" : v.failures.front());
    EXPECT_EQ(p.blocks.size(), g.order() / ell);
    for (const auto& b : p.blocks) EXPECT_EQ(b.size(), ell);
    for (const auto& r : p.reports) {
        EXPECT_EQ(recompute(g, r.left, p.mode), r.achieved_left) << r.path;
        EXPECT_EQ(recompute(g, r.right, p.mode), r.achieved_right) << r.path;
        if (!r.below_threshold) {
            EXPECT_GE(r.achieved_left.value(), r.threshold.value);
            EXPECT_GE(r.achieved_right.value(), r.threshold.value);
        }
    }
}

}  // namespace

TEST(Bounds, TheoreticalExamples) {
    // ℓ = 10^6 gives ℓ^(-1/3) = 0.01
    EXPECT_NEAR(theoretical_bound(0.5, 1'000'000, 1), 0.48, 1e-12);
    for (double d : {0.0, 0.3, 0.5}) EXPECT_EQ(theoretical_bound(d, 37, 0), d);
    // 64^(-1/3) = 1/4: 0.45 - 0.5 (1 + 2^(-1/3) + 2^(-2/3)) = -0.76183...
    const double c = 1.0 / std::cbrt(2.0);
    const double expected = 0.45 - 0.5 * (1.0 + c + c * c);
    EXPECT_NEAR(theoretical_bound(0.45, 64, 3), expected, 1e-12);
    EXPECT_NEAR(expected, -0.761830525, 1e-8);
    EXPECT_THROW(theoretical_bound(0.5, 0, 1), std::invalid_argument);
}

TEST(Bounds, SimplifiedExamples) {
    // 0.425 - 10 * 0.01
    EXPECT_NEAR(simplified_bound(0.425, 1'000'000), 0.325, 1e-12);
    EXPECT_NEAR(simplified_bound(0.5, std::size_t{1} << 60), 0.5, 1e-5);
    EXPECT_THROW(simplified_bound(0.5, 0), std::invalid_argument);
}

TEST(Bounds, GeometricConstant) {
    // closed form against a long partial sum
    double partial = 0.0;
    for (int j = 0; j < 400; ++j) partial += 2.0 * std::pow(2.0, -j / 3.0);
    EXPECT_NEAR(geometric_constant(), partial, 1e-9);
    EXPECT_NEAR(geometric_constant(), 9.694644, 1e-6);
    EXPECT_LE(geometric_constant(), 10.0);
}

TEST(Bounds, GridDominationAndMonotonicity) {
    for (std::size_t ell : {std::size_t{8}, std::size_t{64}, std::size_t{512}, std::size_t{1'000'000}})
        for (double delta : {0.0, 0.25, 0.375, 0.5}) {
            double prev = theoretical_bound(delta, ell, 0);
            for (unsigned k = 0; k <= 64; ++k) {
                const double b = theoretical_bound(delta, ell, k);
                EXPECT_LE(b, prev);
                EXPECT_GE(b, simplified_bound(delta, ell));
                prev = b;
            }
        }
}

TEST(Bounds, RecursionTelescopes) {
    const double ell_f = 64.0;
    for (unsigned k = 1; k <= 10; ++k) {
        const double delta = 0.45;
        // top level: n > 2^(k-1) ℓ, cost 2 n^(-1/3) < 2^(1-(k-1)/3) ℓ^(-1/3)
        const double first = std::pow(2.0, 1.0 - (k - 1) / 3.0) * std::pow(ell_f, -1.0 / 3.0);
        EXPECT_LT(2.0 * std::pow((std::pow(2.0, k - 1) * ell_f) + 1.0, -1.0 / 3.0), first);
        const double rest = k >= 2 ? delta - theoretical_bound(delta, 64, k - 1) : 0.0;
        EXPECT_NEAR((delta - first) - rest, theoretical_bound(delta, 64, k), 1e-12);

        double level_by_level = delta;
        for (unsigned j = 0; j < k; ++j) level_by_level -= 2.0 * std::pow(std::pow(2.0, k - 1 - j) * ell_f, -1.0 / 3.0);
        EXPECT_NEAR(level_by_level, theoretical_bound(delta, 64, k), 1e-12);
    }
}

TEST(Bounds, CeilLog2) {
    EXPECT_EQ(ceil_log2(1), 0u);
    EXPECT_EQ(ceil_log2(2), 1u);
    EXPECT_EQ(ceil_log2(3), 2u);
    EXPECT_EQ(ceil_log2(8), 3u);
    EXPECT_EQ(ceil_log2(9), 4u);
}

TEST(RandomSplit, TournamentSucceedsFirstTry) {
    const auto g = random_tournament(1024, 3);
    const auto split = random_split(g, 512, DegreeMode::Semi, 3, 100);
    EXPECT_EQ(split.w.size(), 512u);
    EXPECT_EQ(split.report.attempts, 1u);
    EXPECT_GT(split.report.threshold.value, 0.0);
    EXPECT_GE(split.report.achieved_left.value(), split.report.threshold.value);
    EXPECT_GE(split.report.achieved_right.value(), split.report.threshold.value);
}

TEST(RandomSplit, EdgelessClampsToZero) {
    const auto g = GraphBuilder(40).build();
    const auto split = random_split(g, 20, DegreeMode::Semi, 1, 100);
    EXPECT_EQ(split.report.threshold.value, 0.0);
    EXPECT_EQ(split.report.attempts, 1u);
}

TEST(RandomSplit, PreconditionViolation) {
    // blow-up of a cyclic triangle on 12 vertices: m1 = 2 < 12/4
    GraphBuilder b(12);
    for (VertexId a = 0; a < 12; ++a)
        for (VertexId c = 0; c < 12; ++c)
            if ((a % 3 + 1) % 3 == c % 3) b.add_edge(a, c);
    const auto g = std::move(b).build();
    EXPECT_EQ(min_degree(g, DegreeMode::Semi), 4u);
    EXPECT_THROW(random_split(g, 2, DegreeMode::Semi, 0, 10), std::invalid_argument);
    EXPECT_THROW(random_split(g, 7, DegreeMode::Semi, 0, 10), std::invalid_argument);
    EXPECT_THROW(random_split(g, 6, DegreeMode::Semi, 0, 0), std::invalid_argument);
    EXPECT_NO_THROW(random_split(g, 3, DegreeMode::Semi, 0, 10));
}

TEST(RandomSplit, ExhaustionCarriesBestSample) {
    const auto g = random_tournament(64, 9);
    try {
        random_split(g, 32, DegreeMode::Semi, 4, 5, 1.0);
        FAIL() << "expected AttemptsExhausted";
    } catch (const AttemptsExhausted& e) {
        EXPECT_EQ(e.max_attempts(), 5u);
        const auto& best = e.best_seen();
        EXPECT_EQ(best.w.size(), 32u);
        EXPECT_TRUE(best.report.below_threshold);
        EXPECT_EQ(best.report.attempts, 5u);
        EXPECT_EQ(recompute(g, best.report.left, DegreeMode::Semi), best.report.achieved_left);
        EXPECT_EQ(recompute(g, best.report.right, DegreeMode::Semi), best.report.achieved_right);
        // best over 5 samples is at least as good as the first sample alone
        try {
            random_split(g, 32, DegreeMode::Semi, 4, 1, 1.0);
        } catch (const AttemptsExhausted& first) {
            const auto score = [](const SplitReport& r) {
                return std::min(r.achieved_left.value(), r.achieved_right.value());
            };
            EXPECT_GE(score(best.report), score(first.best_seen().report));
        }
    }
}

TEST(Equipartition, SingleBlock) {
    const auto g = random_tournament(16, 2);
    const auto p = recursive_equipartition(g, 16, DegreeMode::Semi, 5);
    ASSERT_EQ(p.blocks.size(), 1u);
    EXPECT_EQ(p.blocks[0].size(), 16u);
    EXPECT_TRUE(p.reports.empty());
    EXPECT_EQ(p.k, 0u);
    EXPECT_EQ(p.bound_claimed, p.delta.value());
}

TEST(Equipartition, TwoBlocksMatchesRandomSplit) {
    const auto g = random_tournament(128, 2);
    const auto p = recursive_equipartition(g, 64, DegreeMode::Semi, 77);
    const auto split = random_split(g, 64, DegreeMode::Semi, 77, 100);
    ASSERT_EQ(p.blocks.size(), 2u);
    ASSERT_EQ(p.reports.size(), 1u);
    EXPECT_EQ(p.blocks[0], split.w);
    EXPECT_EQ(p.reports[0].achieved_left, split.report.achieved_left);
    EXPECT_EQ(p.k, 1u);
}

TEST(Equipartition, EightBlocksOfSixtyFour) {
    const auto g = random_tournament(512, 1);
    const auto p = recursive_equipartition(g, 64, DegreeMode::Semi, 8);
    EXPECT_EQ(p.k, 3u);
    EXPECT_EQ(p.reports.size(), 7u);
    EXPECT_EQ(p.reports[0].path, "");
    expect_equipartition(g, p, 64);
    const auto v = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_GE(v.min_block_degree(), 0.0);
    EXPECT_GE(v.min_block_degree(), p.bound_claimed);
    EXPECT_NEAR(p.bound_claimed, theoretical_bound(p.delta.value(), 64, 3), 0.0);
}

TEST(Equipartition, OddPartCount) {
    const auto g = random_tournament(5 * 24, 4);
    const auto p = recursive_equipartition(g, 24, DegreeMode::Semi, 1);
    EXPECT_EQ(p.k, 3u);
    EXPECT_EQ(p.reports[0].left.size(), 48u);
    EXPECT_EQ(p.reports[0].right.size(), 72u);
    expect_equipartition(g, p, 24);
}

TEST(Equipartition, NonVacuousBoundHolds) {
    // ℓ = 2048 gives a positive claimed bound
    const auto g = random_tournament(4096, 12);
    const auto p = recursive_equipartition(g, 2048, DegreeMode::Semi, 3);
    EXPECT_GT(p.bound_claimed, 0.2);
    const auto v = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_TRUE(v.structural_ok());
    EXPECT_GE(v.min_block_degree(), p.bound_claimed);
}

TEST(Equipartition, TotalMode) {
    const auto g = random_oriented(256, 0.8, 5);
    const auto p = recursive_equipartition(g, 32, DegreeMode::Total, 6);
    EXPECT_EQ(p.mode, DegreeMode::Total);
    expect_equipartition(g, p, 32);
    EXPECT_GT(p.delta.value(), 0.5);
}

TEST(Equipartition, ManySeedsStayExact) {
    for (Seed s = 0; s < 20; ++s) {
        const auto g = s % 2 ? random_tournament(256, s) : random_oriented(256, 0.9, s);
        expect_equipartition(g, recursive_equipartition(g, 32, DegreeMode::Semi, s), 32);
    }
}

TEST(Equipartition, Deterministic) {
    const auto g = random_tournament(384, 6);
    const auto a = recursive_equipartition(g, 32, DegreeMode::Semi, 21);
    const auto b = recursive_equipartition(g, 32, DegreeMode::Semi, 21);
    const auto c = recursive_equipartition(g, 32, DegreeMode::Semi, 21, {100, false, 4});
    EXPECT_EQ(a.blocks, b.blocks);
    EXPECT_EQ(a.blocks, c.blocks);
    ASSERT_EQ(a.reports.size(), c.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        EXPECT_EQ(a.reports[i].path, c.reports[i].path);
        EXPECT_EQ(a.reports[i].achieved_left, c.reports[i].achieved_left);
    }
    EXPECT_NE(a.blocks, recursive_equipartition(g, 32, DegreeMode::Semi, 22).blocks);
}

TEST(Equipartition, LasVegasAttemptsAreFew) {
    const auto g = random_tournament(1024, 3);
    std::size_t attempts = 0, nodes = 0;
    for (Seed s = 0; s < 30; ++s)
        for (const auto& r : recursive_equipartition(g, 64, DegreeMode::Semi, s).reports) {
            attempts += r.attempts;
            ++nodes;
        }
    EXPECT_LT(static_cast<double>(attempts) / static_cast<double>(nodes), 2.0);
}

TEST(Equipartition, Errors) {
    const auto g = random_tournament(100, 1);
    EXPECT_THROW(recursive_equipartition(g, 30, DegreeMode::Semi, 0), DivisibilityError);
    EXPECT_THROW(recursive_equipartition(g, 0, DegreeMode::Semi, 0), std::invalid_argument);
}

TEST(Equipartition, ExhaustionPathAndBestEffort) {
    const auto g = random_tournament(128, 2);
    PartitionOptions strict{3, false, 1, 1.0};
    try {
        recursive_equipartition(g, 32, DegreeMode::Semi, 0, strict);
        FAIL() << "expected AttemptsExhausted";
    } catch (const AttemptsExhausted& e) {
        EXPECT_EQ(e.path(), "root");
    }
    PartitionOptions lenient{3, true, 1, 1.0};
    const auto p = recursive_equipartition(g, 32, DegreeMode::Semi, 0, lenient);
    EXPECT_TRUE(p.below_threshold);
    expect_equipartition(g, p, 32);
    for (const auto& r : p.reports) EXPECT_TRUE(r.below_threshold);
}

TEST(VerifyPartition, DetectsSwapAndBadSizes) {
    const auto g = random_tournament(64, 5);
    auto p = recursive_equipartition(g, 16, DegreeMode::Semi, 1);
    const auto before = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_TRUE(before.structural_ok());

    std::swap(p.blocks[0][0], p.blocks[1][0]);
    const auto swapped = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_TRUE(swapped.structural_ok());
    for (std::size_t i = 0; i < 2; ++i) {
        auto block = p.blocks[i];
        std::sort(block.begin(), block.end());
        EXPECT_EQ(swapped.block_degrees[i], recompute(g, block, DegreeMode::Semi));
    }
    EXPECT_EQ(swapped.block_degrees[2], before.block_degrees[2]);

    p.blocks[1].push_back(p.blocks[0].back());
    p.blocks[0].pop_back();
    const auto bad = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_FALSE(bad.sizes_ok);
    EXPECT_TRUE(bad.coverage_ok);

    p.blocks[1].back() = p.blocks[2].front();
    const auto overlap = verify_partition(g, p, DegreeMode::Semi);
    EXPECT_FALSE(overlap.disjoint_ok);
    EXPECT_FALSE(overlap.coverage_ok);
}
