#ifndef CYCLEFACTOR_GRAPH_HPP
#define CYCLEFACTOR_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclefactor/rng.hpp"

namespace cyclefactor {

using VertexId = std::uint32_t;

enum class DegreeMode { Semi, Total };
enum class Direction { In, Out };

inline const char* to_string(DegreeMode mode) { return mode == DegreeMode::Semi ? "semi" : "total"; }

inline DegreeMode parse_degree_mode(const std::string& s) {
    if (s == "semi") return DegreeMode::Semi;
    if (s == "total") return DegreeMode::Total;
    throw std::invalid_argument("unknown degree mode '" + s + "' (expected semi or total)");
}

/// Fixed-size bitset over vertex ids, word-compatible with OrientedGraph rows.
class VertexMask {
public:
    VertexMask() = default;
    explicit VertexMask(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    VertexMask(std::size_t n, std::span<const VertexId> members) : VertexMask(n) {
        for (VertexId v : members) set(v);
    }

    std::size_t universe() const { return n_; }
    void set(VertexId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
    void reset(VertexId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    bool test(VertexId v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// |this ∩ row| for a row of the same word layout.
    std::size_t count_and(std::span<const std::uint64_t> row) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & row[i]));
        return c;
    }

    VertexMask complement() const {
        VertexMask out(n_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
        if (n_ % 64 != 0 && !out.words_.empty()) out.words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
        return out;
    }

    std::vector<VertexId> members() const {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                out.push_back(static_cast<VertexId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
                w &= w - 1;
            }
        }
        return out;
    }

    std::span<const std::uint64_t> words() const { return words_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Directed graph without loops or anti-parallel pairs. Immutable; built
/// through GraphBuilder. Keeps both bit rows (O(1) pair lookup, popcount
/// degree queries) and sorted neighbour lists.
class OrientedGraph {
public:
    OrientedGraph() = default;

    std::size_t order() const { return n_; }
    std::size_t size() const { return edge_count_; }

    bool has_edge(VertexId u, VertexId v) const {
        return u < n_ && v < n_ && ((out_rows_[u * words_ + (v >> 6)] >> (v & 63)) & 1U);
    }
    bool adjacent(VertexId u, VertexId v) const { return has_edge(u, v) || has_edge(v, u); }

    std::span<const VertexId> out_neighbors(VertexId v) const { return out_adj_.at(v); }
    std::span<const VertexId> in_neighbors(VertexId v) const { return in_adj_.at(v); }
    std::size_t out_degree(VertexId v) const { return out_adj_.at(v).size(); }
    std::size_t in_degree(VertexId v) const { return in_adj_.at(v).size(); }

    std::span<const std::uint64_t> out_row(VertexId v) const {
        return {out_rows_.data() + static_cast<std::size_t>(v) * words_, words_};
    }
    std::span<const std::uint64_t> in_row(VertexId v) const {
        return {in_rows_.data() + static_cast<std::size_t>(v) * words_, words_};
    }

    /// Edges as (tail, head) in lexicographic order.
    std::vector<std::pair<VertexId, VertexId>> edges() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        out.reserve(edge_count_);
        for (VertexId u = 0; u < n_; ++u)
            for (VertexId v : out_adj_[u]) out.emplace_back(u, v);
        return out;
    }

    friend bool operator==(const OrientedGraph& a, const OrientedGraph& b) {
        return a.n_ == b.n_ && a.out_rows_ == b.out_rows_;
    }

private:
    friend class GraphBuilder;

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::uint64_t> out_rows_;
    std::vector<std::uint64_t> in_rows_;
    std::vector<std::vector<VertexId>> out_adj_;
    std::vector<std::vector<VertexId>> in_adj_;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t n) {
        g_.n_ = n;
        g_.words_ = (n + 63) / 64;
        g_.out_rows_.assign(n * g_.words_, 0);
        g_.in_rows_.assign(n * g_.words_, 0);
        g_.out_adj_.resize(n);
        g_.in_adj_.resize(n);
    }

    std::size_t order() const { return g_.n_; }

    /// Adds u→v. Throws GraphError on loops, duplicates, anti-parallel pairs
    /// and out-of-range endpoints.
    void add_edge(VertexId u, VertexId v) {
        if (u >= g_.n_ || v >= g_.n_)
            throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
        if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
        if (g_.has_edge(u, v))
            throw GraphError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (g_.has_edge(v, u))
            throw GraphError("anti-parallel edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        add_unchecked(u, v);
    }

    /// Caller guarantees the pair is new and unoriented so far.
    void add_unchecked(VertexId u, VertexId v) {
        g_.out_rows_[u * g_.words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
        g_.in_rows_[v * g_.words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
        ++g_.edge_count_;
    }

    OrientedGraph build() && {
        for (VertexId u = 0; u < g_.n_; ++u) {
            for (std::size_t w = 0; w < g_.words_; ++w) {
                std::uint64_t bits = g_.out_rows_[u * g_.words_ + w];
                while (bits) {
                    auto v = static_cast<VertexId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                    g_.out_adj_[u].push_back(v);
                    g_.in_adj_[v].push_back(u);
                    bits &= bits - 1;
                }
            }
        }
        return std::move(g_);
    }

private:
    OrientedGraph g_;
};

inline std::size_t vertex_degree(const OrientedGraph& g, VertexId v, DegreeMode mode) {
    const auto out = g.out_degree(v);
    const auto in = g.in_degree(v);
    return mode == DegreeMode::Semi ? std::min(out, in) : out + in;
}

/// δ⁰(g) for Semi, δ(g) = min(d⁺ + d⁻) for Total; 0 on the empty graph.
inline std::size_t min_degree(const OrientedGraph& g, DegreeMode mode) {
    if (g.order() == 0) return 0;
    std::size_t best = vertex_degree(g, 0, mode);
    for (VertexId v = 1; v < g.order(); ++v) best = std::min(best, vertex_degree(g, v, mode));
    return best;
}

/// |N^±(v) ∩ w|.
inline std::size_t degree_into(const OrientedGraph& g, VertexId v, const VertexMask& w, Direction dir) {
    if (v >= g.order()) throw std::out_of_range("degree_into: vertex " + std::to_string(v) + " out of range");
    if (w.universe() != g.order()) throw std::invalid_argument("degree_into: mask universe mismatch");
    return w.count_and(dir == Direction::Out ? g.out_row(v) : g.in_row(v));
}

inline std::size_t degree_into(const OrientedGraph& g, VertexId v, std::span<const VertexId> w, Direction dir) {
    if (v >= g.order()) throw std::out_of_range("degree_into: vertex " + std::to_string(v) + " out of range");
    std::size_t c = 0;
    for (VertexId x : w) {
        if (x >= g.order()) throw std::out_of_range("degree_into: set member out of range");
        c += dir == Direction::Out ? g.has_edge(v, x) : g.has_edge(x, v);
    }
    return c;
}

/// Induced subgraph with dense relabelling; `to_original[i]` is the id in the
/// parent graph of local vertex i. Local ids follow ascending original ids.
struct InducedSubgraph {
    OrientedGraph graph;
    std::vector<VertexId> to_original;
};

inline InducedSubgraph induced(const OrientedGraph& g, std::span<const VertexId> w) {
    std::vector<VertexId> ids(w.begin(), w.end());
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("induced: vertex set contains duplicates");
    if (!ids.empty() && ids.back() >= g.order()) throw std::out_of_range("induced: vertex out of range");

    std::vector<VertexId> local(g.order(), static_cast<VertexId>(-1));
    for (std::size_t i = 0; i < ids.size(); ++i) local[ids[i]] = static_cast<VertexId>(i);

    GraphBuilder b(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (VertexId x : g.out_neighbors(ids[i]))
            if (local[x] != static_cast<VertexId>(-1)) b.add_unchecked(static_cast<VertexId>(i), local[x]);
    return {std::move(b).build(), std::move(ids)};
}

inline OrientedGraph random_tournament(std::size_t n, Seed seed) {
    Rng rng(seed);
    GraphBuilder b(n);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) {
            if (rng.coin())
                b.add_unchecked(u, v);
            else
                b.add_unchecked(v, u);
        }
    return std::move(b).build();
}

/// Each pair present with probability p, then oriented by a fair coin.
inline OrientedGraph random_oriented(std::size_t n, double p, Seed seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random_oriented: p must lie in [0,1]");
    Rng rng(seed);
    GraphBuilder b(n);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) {
            if (!rng.bernoulli(p)) continue;
            if (rng.coin())
                b.add_unchecked(u, v);
            else
                b.add_unchecked(v, u);
        }
    return std::move(b).build();
}

}  // namespace cyclefactor

#endif
