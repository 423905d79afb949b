#ifndef CYCLEFACTOR_HAMILTON_HPP
#define CYCLEFACTOR_HAMILTON_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

/// Direction of each cycle edge: dirs[i] = +1 means x_i → x_{i+1 mod ℓ},
/// −1 means x_{i+1} → x_i. All +1 is the directed cycle.
class OrientationPattern {
public:
    OrientationPattern() = default;

    explicit OrientationPattern(std::vector<std::int8_t> dirs) : dirs_(std::move(dirs)) {
        if (dirs_.size() < 3) throw std::invalid_argument("orientation pattern needs length >= 3");
        for (auto d : dirs_)
            if (d != 1 && d != -1) throw std::invalid_argument("orientation pattern entries must be +1 or -1");
    }

    static OrientationPattern parse(std::string_view text) {
        std::vector<std::int8_t> dirs;
        for (char c : text) {
            if (c == '+')
                dirs.push_back(1);
            else if (c == '-')
                dirs.push_back(-1);
            else
                throw std::invalid_argument("pattern '" + std::string(text) + "' may only contain '+' and '-'");
        }
        return OrientationPattern(std::move(dirs));
    }

    static OrientationPattern directed(std::size_t length) {
        return OrientationPattern(std::vector<std::int8_t>(length, 1));
    }

    std::size_t size() const { return dirs_.size(); }
    std::int8_t operator[](std::size_t i) const { return dirs_[i]; }
    const std::vector<std::int8_t>& dirs() const { return dirs_; }

    std::string str() const {
        std::string s;
        for (auto d : dirs_) s.push_back(d > 0 ? '+' : '-');
        return s;
    }

    /// Pattern read from position r onwards: result[i] = dirs[(i + r) mod ℓ].
    OrientationPattern rotated(std::size_t r) const {
        std::vector<std::int8_t> out(dirs_.size());
        for (std::size_t i = 0; i < dirs_.size(); ++i) out[i] = dirs_[(i + r) % dirs_.size()];
        return OrientationPattern(std::move(out));
    }

    /// The same cycle traversed backwards: result[i] = −dirs[ℓ − 1 − i].
    OrientationPattern reversed() const {
        std::vector<std::int8_t> out(dirs_.rbegin(), dirs_.rend());
        for (auto& d : out) d = static_cast<std::int8_t>(-d);
        return OrientationPattern(std::move(out));
    }

    friend bool operator==(const OrientationPattern&, const OrientationPattern&) = default;
    friend auto operator<=>(const OrientationPattern& a, const OrientationPattern& b) { return a.dirs_ <=> b.dirs_; }

private:
    std::vector<std::int8_t> dirs_;
};

/// Lexicographically least (−1 < +1) pattern among all rotations of p and of
/// its reversal. Equal canonical forms ⇔ same abstract oriented cycle.
inline OrientationPattern canonicalize_pattern(const OrientationPattern& p) {
    OrientationPattern best = p;
    const OrientationPattern rev = p.reversed();
    for (std::size_t r = 0; r < p.size(); ++r) {
        best = std::min(best, p.rotated(r));
        best = std::min(best, rev.rotated(r));
    }
    return best;
}

struct CycleEmbedding {
    std::vector<VertexId> vertices;
    OrientationPattern pattern;
};

/// ⌈(3n − 1)/8⌉: semi-degree above which every orientation of a Hamilton
/// cycle is guaranteed for n ≥ n₀ (n₀ unspecified).
inline std::size_t theorem_threshold(std::size_t n) {
    if (n < 3) throw std::invalid_argument("theorem_threshold: n must be >= 3");
    return (3 * n - 1 + 7) / 8;
}

enum class SearchStatus { Found, NotFound, BudgetExhausted };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Found: return "found";
        case SearchStatus::NotFound: return "not_found";
        case SearchStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

struct SearchResult {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<CycleEmbedding> embedding;
    std::uint64_t expansions = 0;
};

class CapExceeded : public std::invalid_argument {
public:
    CapExceeded(std::size_t n, std::size_t cap)
        : std::invalid_argument("graph order " + std::to_string(n) + " exceeds the DP cap " + std::to_string(cap)) {}
};

inline constexpr std::size_t kDefaultDpCap = 20;
inline constexpr std::size_t kMaxDpCap = 30;
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

namespace detail {

inline void check_pattern_size(const OrientedGraph& g, const OrientationPattern& p) {
    if (p.size() != g.order())
        throw std::invalid_argument("pattern length " + std::to_string(p.size()) + " differs from graph order " +
                                    std::to_string(g.order()));
}

// Rotation offsets giving pairwise distinct rotated patterns.
inline std::vector<std::size_t> distinct_rotations(const OrientationPattern& p) {
    std::vector<std::size_t> out;
    std::vector<OrientationPattern> seen;
    for (std::size_t r = 0; r < p.size(); ++r) {
        auto q = p.rotated(r);
        if (std::find(seen.begin(), seen.end(), q) == seen.end()) {
            seen.push_back(std::move(q));
            out.push_back(r);
        }
    }
    return out;
}

// x realises p.rotated(r) from position 0; shift so the result realises p.
inline CycleEmbedding unrotate(const std::vector<VertexId>& x, std::size_t r, const OrientationPattern& p) {
    const std::size_t n = x.size();
    std::vector<VertexId> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = x[(j + n - r) % n];
    return {std::move(y), p};
}

inline bool edge_matches(const OrientedGraph& g, VertexId a, VertexId b, std::int8_t dir) {
    return dir > 0 ? g.has_edge(a, b) : g.has_edge(b, a);
}

}  // namespace detail

/// Exact search by subset DP over (visited set, last vertex) with vertex 0
/// fixed at cycle position 0; the position of the last vertex is |visited|−1,
/// which fixes the direction required of the next edge. Each distinct
/// rotation of the pattern is tried, so NotFound certifies that no spanning
/// copy of the abstract oriented cycle exists. A returned witness realises
/// `pattern` exactly as labelled.
inline SearchResult find_cycle_dp(const OrientedGraph& g, const OrientationPattern& pattern,
                                  std::size_t cap = kDefaultDpCap) {
    detail::check_pattern_size(g, pattern);
    const std::size_t n = g.order();
    if (n > std::min(cap, kMaxDpCap)) throw CapExceeded(n, std::min(cap, kMaxDpCap));

    std::vector<std::uint32_t> out_mask(n, 0), in_mask(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        for (VertexId u : g.out_neighbors(v)) out_mask[v] |= 1u << u;
        for (VertexId u : g.in_neighbors(v)) in_mask[v] |= 1u << u;
    }

    // reach[mask >> 1] for masks containing vertex 0: bit v set iff some path
    // 0 = x_0, ..., x_{c-1} = v over exactly `mask` realises the prefix.
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::vector<std::uint32_t> reach(std::size_t{1} << (n - 1));
    SearchResult result;

    for (std::size_t r : detail::distinct_rotations(pattern)) {
        const auto q = pattern.rotated(r);
        std::fill(reach.begin(), reach.end(), 0u);
        reach[0] = 1u;
        for (std::uint32_t mask = 3; mask <= full; mask += 2) {
            const int c = std::popcount(mask);
            const bool forward = q[static_cast<std::size_t>(c - 2)] > 0;
            std::uint32_t bits = mask & ~1u, acc = 0;
            while (bits) {
                const int v = std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint32_t pred = forward ? in_mask[v] : out_mask[v];
                if (reach[(mask ^ (1u << v)) >> 1] & pred) acc |= 1u << v;
            }
            reach[mask >> 1] = acc;
            ++result.expansions;
        }

        // close the cycle back to vertex 0
        const bool close_forward = q[n - 1] > 0;
        const std::uint32_t closers = reach[full >> 1] & (close_forward ? in_mask[0] : out_mask[0]);
        if (!closers) continue;

        std::vector<VertexId> x(n);
        x[0] = 0;
        std::uint32_t mask = full;
        auto v = static_cast<VertexId>(std::countr_zero(closers));
        for (std::size_t pos = n - 1; pos >= 1; --pos) {
            x[pos] = v;
            const std::uint32_t prev = mask ^ (1u << v);
            if (pos == 1) break;
            const std::uint32_t pred = q[pos - 1] > 0 ? in_mask[v] : out_mask[v];
            v = static_cast<VertexId>(std::countr_zero(reach[prev >> 1] & pred));
            mask = prev;
        }
        result.status = SearchStatus::Found;
        result.embedding = detail::unrotate(x, r, pattern);
        return result;
    }
    result.status = SearchStatus::NotFound;
    return result;
}

namespace detail {

class Backtracker {
public:
    Backtracker(const OrientedGraph& g, const OrientationPattern& q, std::uint64_t budget, std::uint64_t& expansions)
        : g_(g), q_(q), n_(g.order()), budget_(budget), expansions_(expansions), unvisited_(g.order()), path_(g.order()) {
        for (VertexId v = 1; v < n_; ++v) unvisited_.set(v);
    }

    std::optional<std::vector<VertexId>> run() {
        path_[0] = 0;
        if (extend(0)) return path_;
        return std::nullopt;
    }

    bool exhausted() const { return exhausted_; }

private:
    std::size_t residual(VertexId v) const {
        return unvisited_.count_and(g_.out_row(v)) + unvisited_.count_and(g_.in_row(v));
    }

    // Necessary conditions for completing the cycle once path_[0..pos] is fixed.
    bool feasible(std::size_t pos) const {
        const std::size_t left = n_ - 1 - pos;
        if (left == 0) return true;
        const VertexId end = path_[pos];
        const auto zero_row = q_[n_ - 1] > 0 ? g_.in_row(0) : g_.out_row(0);
        if (unvisited_.count_and(zero_row) == 0) return false;
        for (VertexId u : unvisited_.members()) {
            std::size_t links = residual(u) + (g_.adjacent(u, end) ? 1 : 0) + (g_.adjacent(u, 0) ? 1 : 0);
            if (links < 2) return false;
        }
        return true;
    }

    bool extend(std::size_t pos) {
        const VertexId last = path_[pos];
        if (pos == n_ - 1) return edge_matches(g_, last, 0, q_[n_ - 1]);

        const auto row = q_[pos] > 0 ? g_.out_row(last) : g_.in_row(last);
        std::vector<std::pair<std::size_t, VertexId>> cands;
        for (std::size_t w = 0; w < row.size(); ++w) {
            std::uint64_t bits = row[w] & unvisited_.words()[w];
            while (bits) {
                auto v = static_cast<VertexId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
                cands.emplace_back(residual(v), v);
            }
        }
        std::sort(cands.begin(), cands.end());

        for (auto [deg, v] : cands) {
            if (expansions_ >= budget_) {
                exhausted_ = true;
                return false;
            }
            ++expansions_;
            path_[pos + 1] = v;
            unvisited_.reset(v);
            if (feasible(pos + 1) && extend(pos + 1)) return true;
            unvisited_.set(v);
            if (exhausted_) return false;
        }
        return false;
    }

    const OrientedGraph& g_;
    const OrientationPattern& q_;
    std::size_t n_;
    std::uint64_t budget_;
    std::uint64_t& expansions_;
    VertexMask unvisited_;
    std::vector<VertexId> path_;
    bool exhausted_ = false;
};

}  // namespace detail

/// Depth-first extension from vertex 0, most-constrained candidate first
/// (fewest unvisited neighbours), pruning when some unvisited vertex cannot
/// get two cycle neighbours or vertex 0 cannot be closed. Every distinct
/// rotation is tried as in find_cycle_dp. `budget` caps node expansions over
/// the whole call; running out yields BudgetExhausted, never NotFound.
inline SearchResult find_cycle_backtrack(const OrientedGraph& g, const OrientationPattern& pattern,
                                         std::optional<std::uint64_t> budget = std::nullopt) {
    detail::check_pattern_size(g, pattern);
    const std::uint64_t limit = budget.value_or(std::numeric_limits<std::uint64_t>::max());
    SearchResult result;
    for (std::size_t r : detail::distinct_rotations(pattern)) {
        const auto q = pattern.rotated(r);
        detail::Backtracker bt(g, q, limit, result.expansions);
        if (auto path = bt.run()) {
            result.status = SearchStatus::Found;
            result.embedding = detail::unrotate(*path, r, pattern);
            return result;
        }
        if (bt.exhausted()) {
            result.status = SearchStatus::BudgetExhausted;
            return result;
        }
    }
    result.status = SearchStatus::NotFound;
    return result;
}

struct EmbeddingVerdict {
    bool ok = true;
    std::optional<std::size_t> first_failure;  // position index in the embedding
    std::string reason;
};

/// Checks length, range, distinctness and each edge's presence and direction.
inline EmbeddingVerdict verify_embedding(const OrientedGraph& g, const CycleEmbedding& emb) {
    const auto fail = [](std::optional<std::size_t> at, std::string why) {
        return EmbeddingVerdict{false, at, std::move(why)};
    };
    const auto& x = emb.vertices;
    const std::size_t n = x.size();
    if (n != emb.pattern.size())
        return fail(std::nullopt, "embedding has " + std::to_string(n) + " vertices, pattern has length " +
                                      std::to_string(emb.pattern.size()));
    if (n < 3) return fail(std::nullopt, "embedding shorter than 3");
    std::vector<VertexId> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] >= g.order()) return fail(i, "vertex " + std::to_string(x[i]) + " out of range");
        if (std::find(seen.begin(), seen.end(), x[i]) != seen.end())
            return fail(i, "vertex " + std::to_string(x[i]) + " repeated");
        seen.push_back(x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const VertexId a = x[i], b = x[(i + 1) % n];
        if (!detail::edge_matches(g, a, b, emb.pattern[i]))
            return fail(i, "edge " + std::to_string(i) + " between " + std::to_string(a) + " and " + std::to_string(b) +
                               " missing or wrongly oriented");
    }
    return {};
}

}  // namespace cyclefactor

#endif
