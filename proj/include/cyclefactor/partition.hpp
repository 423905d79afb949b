#ifndef CYCLEFACTOR_PARTITION_HPP
#define CYCLEFACTOR_PARTITION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclefactor/graph.hpp"
#include "cyclefactor/rng.hpp"

namespace cyclefactor {

/// Non-negative fraction kept exact so reports can be reproduced bit for bit.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// min_degree(g, mode) / |g|, the relative degree the bounds are stated in.
/// In Total mode the numerator is d⁺ + d⁻, so the value can exceed 1.
inline Ratio relative_degree(const OrientedGraph& g, DegreeMode mode) {
    if (g.order() == 0) return {0, 1};
    return {min_degree(g, mode), g.order()};
}

// ---------------------------------------------------------------------------
// Bounds

/// δ − 2ℓ^(−1/3) Σ_{j<k} 2^(−j/3). Not clamped; negative at small ℓ.
inline double theoretical_bound(double delta, std::size_t ell, unsigned k) {
    if (ell < 1) throw std::invalid_argument("theoretical_bound: ell must be >= 1");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("theoretical_bound: delta must be finite and >= 0");
    double sum = 0.0;
    for (unsigned j = 0; j < k; ++j) sum += std::exp2(-static_cast<double>(j) / 3.0);
    return delta - 2.0 * std::pow(static_cast<double>(ell), -1.0 / 3.0) * sum;
}

/// δ − 10ℓ^(−1/3); below theoretical_bound for every k since the full
/// geometric series sums to 2/(1 − 2^(−1/3)) < 10.
inline double simplified_bound(double delta, std::size_t ell) {
    if (ell < 1) throw std::invalid_argument("simplified_bound: ell must be >= 1");
    return delta - 10.0 * std::pow(static_cast<double>(ell), -1.0 / 3.0);
}

/// 2 Σ_{j≥0} 2^(−j/3) = 2 / (1 − 2^(−1/3)).
inline double geometric_constant() { return 2.0 / (1.0 - std::exp2(-1.0 / 3.0)); }

/// Smallest k with m ≤ 2^k.
inline unsigned ceil_log2(std::size_t m) {
    unsigned k = 0;
    while ((std::size_t{1} << k) < m) ++k;
    return k;
}

// ---------------------------------------------------------------------------
// Random split

struct SplitThreshold {
    Ratio delta;          // relative degree of the graph being split
    std::size_t n = 0;    // its order
    double margin = 0.0;  // extra demand on top of the bound, 0 normally
    double value = 0.0;   // max(0, δ − 2n^(−1/3) + margin)
};

inline SplitThreshold split_threshold(Ratio delta, std::size_t n, double margin = 0.0) {
    const double raw = n == 0 ? 0.0 : delta.value() - 2.0 * std::pow(static_cast<double>(n), -1.0 / 3.0);
    return {delta, n, margin, std::max(0.0, raw + margin)};
}

inline bool meets(Ratio achieved, const SplitThreshold& t) { return achieved.value() >= t.value; }

struct SplitReport {
    std::string path;  // recursion position: "" for the root, then L/R per level
    std::size_t attempts = 0;
    SplitThreshold threshold;
    Ratio achieved_left;
    Ratio achieved_right;
    DegreeMode mode = DegreeMode::Semi;
    bool below_threshold = false;  // best-effort fallback was used
    // Both sides in the ids of the graph the partition was requested on.
    std::vector<VertexId> left;
    std::vector<VertexId> right;
};

struct SplitResult {
    std::vector<VertexId> w;  // the |W| = m1 side, sorted, local ids
    SplitReport report;
};

class AttemptsExhausted : public std::runtime_error {
public:
    AttemptsExhausted(std::size_t max_attempts, SplitResult best, std::string path = {})
        : std::runtime_error("no split met the degree threshold after " + std::to_string(max_attempts) +
                             " attempts" + (path.empty() ? std::string{} : " at node '" + path + "'")),
          max_attempts_(max_attempts), best_(std::move(best)), path_(std::move(path)) {}

    std::size_t max_attempts() const { return max_attempts_; }
    const SplitResult& best_seen() const { return best_; }
    const std::string& path() const { return path_; }

private:
    std::size_t max_attempts_;
    SplitResult best_;
    std::string path_;
};

namespace detail {

// Relative min degree of g[side] using the bit rows.
inline Ratio side_degree(const OrientedGraph& g, const VertexMask& side, std::span<const VertexId> members,
                         DegreeMode mode) {
    if (members.empty()) return {0, 1};
    std::size_t best = static_cast<std::size_t>(-1);
    for (VertexId v : members) {
        const auto out = side.count_and(g.out_row(v));
        const auto in = side.count_and(g.in_row(v));
        best = std::min(best, mode == DegreeMode::Semi ? std::min(out, in) : out + in);
    }
    return {best, members.size()};
}

inline double score(const SplitReport& r) { return std::min(r.achieved_left.value(), r.achieved_right.value()); }

}  // namespace detail

/// Samples uniform m1-subsets W of V(g) until both g[W] and g − W have
/// relative min degree at least max(0, δ − 2n^(−1/3)), δ = min_degree/n.
/// Every vertex on both sides is checked for each sample.
///
/// Requires n/4 ≤ m1 ≤ n/2. Throws AttemptsExhausted, carrying the sample
/// with the best min(left, right), when max_attempts samples all fail.
/// A positive `margin` raises the threshold (stress testing, stricter splits).
inline SplitResult random_split(const OrientedGraph& g, std::size_t m1, DegreeMode mode, Seed seed,
                                std::size_t max_attempts, double margin = 0.0) {
    const std::size_t n = g.order();
    if (4 * m1 < n || 2 * m1 > n)
        throw std::invalid_argument("random_split: need n/4 <= m1 <= n/2 (n=" + std::to_string(n) +
                                    ", m1=" + std::to_string(m1) + ")");
    if (max_attempts < 1) throw std::invalid_argument("random_split: max_attempts must be >= 1");

    const auto threshold = split_threshold(relative_degree(g, mode), n, margin);
    Rng rng(seed);
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});

    std::optional<SplitResult> best;
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        // Partial Fisher-Yates; perm stays a permutation between samples.
        for (std::size_t i = 0; i < m1; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);

        VertexMask left_mask(n, std::span<const VertexId>(perm.data(), m1));
        VertexMask right_mask = left_mask.complement();
        SplitResult cand;
        cand.w = left_mask.members();
        const auto right = right_mask.members();
        cand.report.attempts = attempt;
        cand.report.threshold = threshold;
        cand.report.mode = mode;
        cand.report.achieved_left = detail::side_degree(g, left_mask, cand.w, mode);
        cand.report.achieved_right = detail::side_degree(g, right_mask, right, mode);

        if (meets(cand.report.achieved_left, threshold) && meets(cand.report.achieved_right, threshold)) {
            cand.report.left = cand.w;
            cand.report.right = right;
            return cand;
        }
        if (!best || detail::score(cand.report) > detail::score(best->report)) {
            cand.report.left = cand.w;
            cand.report.right = right;
            best = std::move(cand);
        }
    }
    best->report.attempts = max_attempts;
    best->report.below_threshold = true;
    throw AttemptsExhausted(max_attempts, std::move(*best));
}

// ---------------------------------------------------------------------------
// Recursive equipartition

struct Partition {
    std::vector<std::vector<VertexId>> blocks;  // original ids, each sorted
    std::size_t part_size = 0;
    std::vector<SplitReport> reports;           // pre-order over recursion nodes
    Ratio delta;                                // relative degree of the input graph
    unsigned k = 0;
    double bound_claimed = 0.0;                 // theoretical_bound(delta, part_size, k)
    DegreeMode mode = DegreeMode::Semi;
    Seed seed = 0;
    bool below_threshold = false;               // some node fell back to its best sample
};

struct PartitionOptions {
    std::size_t max_attempts = 100;
    bool best_effort = false;
    unsigned threads = 1;
    double margin = 0.0;  // passed to every random_split
};

class DivisibilityError : public std::invalid_argument {
public:
    DivisibilityError(std::size_t n, std::size_t ell)
        : std::invalid_argument("part size " + std::to_string(ell) + " does not divide vertex count " +
                                std::to_string(n)) {}
};

namespace detail {

struct Subtree {
    std::vector<std::vector<VertexId>> blocks;
    std::vector<SplitReport> reports;
};

inline Subtree equipartition_node(const OrientedGraph& sub, const std::vector<VertexId>& to_orig, std::size_t ell,
                                  DegreeMode mode, Seed seed, const PartitionOptions& opts, const std::string& path,
                                  unsigned parallel_depth) {
    const std::size_t m = sub.order() / ell;
    if (m <= 1) return {{to_orig}, {}};

    const std::size_t n1 = (m / 2) * ell;
    SplitResult split;
    try {
        split = random_split(sub, n1, mode, seed, opts.max_attempts, opts.margin);
    } catch (const AttemptsExhausted& e) {
        if (!opts.best_effort) throw AttemptsExhausted(e.max_attempts(), e.best_seen(), path.empty() ? "root" : path);
        split = e.best_seen();
    }

    VertexMask left_mask(sub.order(), split.w);
    const auto right_local = left_mask.complement().members();
    auto left = induced(sub, split.w);
    auto right = induced(sub, right_local);
    for (auto& v : left.to_original) v = to_orig[v];
    for (auto& v : right.to_original) v = to_orig[v];

    SplitReport report = std::move(split.report);
    report.path = path;
    report.left = left.to_original;
    report.right = right.to_original;

    const Seed left_seed = derive_seed(seed, 0);
    const Seed right_seed = derive_seed(seed, 1);
    Subtree lhs, rhs;
    if (parallel_depth > 0) {
        auto fut = std::async(std::launch::async, [&] {
            return equipartition_node(left.graph, left.to_original, ell, mode, left_seed, opts, path + "L",
                                      parallel_depth - 1);
        });
        rhs = equipartition_node(right.graph, right.to_original, ell, mode, right_seed, opts, path + "R",
                                 parallel_depth - 1);
        lhs = fut.get();
    } else {
        lhs = equipartition_node(left.graph, left.to_original, ell, mode, left_seed, opts, path + "L", 0);
        rhs = equipartition_node(right.graph, right.to_original, ell, mode, right_seed, opts, path + "R", 0);
    }

    Subtree out;
    out.blocks = std::move(lhs.blocks);
    out.blocks.insert(out.blocks.end(), std::make_move_iterator(rhs.blocks.begin()),
                      std::make_move_iterator(rhs.blocks.end()));
    out.reports.push_back(std::move(report));
    out.reports.insert(out.reports.end(), std::make_move_iterator(lhs.reports.begin()),
                       std::make_move_iterator(lhs.reports.end()));
    out.reports.insert(out.reports.end(), std::make_move_iterator(rhs.reports.begin()),
                       std::make_move_iterator(rhs.reports.end()));
    return out;
}

}  // namespace detail

/// Splits V(g) into m = n/ℓ blocks of size ℓ by recursive halving: split off
/// ⌊m/2⌋ℓ vertices with random_split, recurse on both sides with seeds
/// derived from the parent seed and the side, concatenate left then right.
///
/// With every split meeting its threshold, each block satisfies
/// min_degree(g[block])/ℓ ≥ theoretical_bound(δ, ℓ, ⌈log₂ m⌉).
///
/// Throws DivisibilityError when ℓ ∤ n, and AttemptsExhausted (with the
/// node path) unless opts.best_effort is set.
inline Partition recursive_equipartition(const OrientedGraph& g, std::size_t ell, DegreeMode mode, Seed seed,
                                         const PartitionOptions& opts = {}) {
    if (ell == 0) throw std::invalid_argument("recursive_equipartition: ell must be >= 1");
    if (g.order() == 0 || g.order() % ell != 0) throw DivisibilityError(g.order(), ell);

    std::vector<VertexId> all(g.order());
    std::iota(all.begin(), all.end(), VertexId{0});
    unsigned parallel_depth = 0;
    while ((2u << parallel_depth) <= opts.threads) ++parallel_depth;

    auto tree = detail::equipartition_node(g, all, ell, mode, seed, opts, "", parallel_depth);

    Partition p;
    p.blocks = std::move(tree.blocks);
    p.reports = std::move(tree.reports);
    p.part_size = ell;
    p.delta = relative_degree(g, mode);
    p.k = ceil_log2(g.order() / ell);
    p.bound_claimed = theoretical_bound(p.delta.value(), ell, p.k);
    p.mode = mode;
    p.seed = seed;
    p.below_threshold = std::any_of(p.reports.begin(), p.reports.end(), [](const auto& r) { return r.below_threshold; });
    return p;
}

// ---------------------------------------------------------------------------
// Independent verification

struct PartitionVerdict {
    bool sizes_ok = true;
    bool disjoint_ok = true;
    bool coverage_ok = true;
    std::vector<Ratio> block_degrees;  // min_degree(g[block]) / |block|
    std::vector<std::string> failures;

    bool structural_ok() const { return sizes_ok && disjoint_ok && coverage_ok; }
    double min_block_degree() const {
        double best = block_degrees.empty() ? 0.0 : block_degrees.front().value();
        for (const auto& r : block_degrees) best = std::min(best, r.value());
        return best;
    }
};

inline PartitionVerdict verify_partition(const OrientedGraph& g, const Partition& p, DegreeMode mode) {
    PartitionVerdict v;
    std::vector<int> seen(g.order(), 0);
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        const auto& block = p.blocks[i];
        if (block.size() != p.part_size) {
            v.sizes_ok = false;
            v.failures.push_back("block " + std::to_string(i) + " has size " + std::to_string(block.size()) +
                                 ", expected " + std::to_string(p.part_size));
        }
        bool in_range = true;
        for (VertexId x : block) {
            if (x >= g.order()) {
                in_range = false;
                v.coverage_ok = false;
                v.failures.push_back("block " + std::to_string(i) + " contains out-of-range vertex " + std::to_string(x));
                continue;
            }
            if (++seen[x] == 2) {
                v.disjoint_ok = false;
                v.failures.push_back("vertex " + std::to_string(x) + " appears in more than one block");
            }
        }
        if (!in_range) {
            v.block_degrees.push_back({0, 1});
            continue;
        }
        std::vector<VertexId> unique(block);
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        const auto sub = induced(g, unique);
        v.block_degrees.push_back({min_degree(sub.graph, mode), block.size()});
    }
    for (VertexId x = 0; x < g.order(); ++x)
        if (seen[x] == 0) {
            v.coverage_ok = false;
            v.failures.push_back("vertex " + std::to_string(x) + " is not covered");
        }
    return v;
}

}  // namespace cyclefactor

#endif
