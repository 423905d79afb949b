#ifndef CYCLEFACTOR_FACTOR_HPP
#define CYCLEFACTOR_FACTOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclefactor/graph.hpp"
#include "cyclefactor/hamilton.hpp"
#include "cyclefactor/partition.hpp"

namespace cyclefactor {

struct FactorRequest {
    std::size_t ell = 0;
    // Empty: directed ℓ-cycles everywhere. One entry: used for every part.
    // Otherwise one pattern per part, in block order.
    std::vector<OrientationPattern> patterns;
    DegreeMode mode = DegreeMode::Semi;
    Seed seed = 0;
    PartitionOptions partition;
    std::size_t dp_cap = kDefaultDpCap;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 1;
};

struct FactorCertificate {
    Partition partition;
    std::vector<CycleEmbedding> embeddings;        // embeddings[i] spans partition.blocks[i], original ids
    std::vector<bool> guarantee_flags;             // δ⁰(G[V_i]) ≥ ⌈(3ℓ−1)/8⌉
    std::vector<std::size_t> part_semi_degrees;    // δ⁰(G[V_i])
    std::vector<std::string> methods;              // "dp" or "backtrack" per part
    bool partition_below_threshold = false;
};

enum class FailureStage { PartitionExhausted, PartNotFound, PartBudgetExhausted };

inline const char* to_string(FailureStage s) {
    switch (s) {
        case FailureStage::PartitionExhausted: return "partition_exhausted";
        case FailureStage::PartNotFound: return "part_not_found";
        case FailureStage::PartBudgetExhausted: return "part_budget_exhausted";
    }
    return "?";
}

struct FactorFailure {
    FailureStage stage = FailureStage::PartNotFound;
    std::optional<std::size_t> part;
    std::string message;
    std::optional<Partition> partition;
    std::vector<std::optional<CycleEmbedding>> embeddings;  // per block; set for parts solved before the failure
};

struct FactorResult {
    std::optional<FactorCertificate> certificate;
    std::optional<FactorFailure> failure;

    bool ok() const { return certificate.has_value(); }
};

namespace detail {

struct PartOutcome {
    SearchResult search;
    std::string method;
};

inline PartOutcome solve_part(const InducedSubgraph& sub, const OrientationPattern& pattern, const FactorRequest& req) {
    PartOutcome out;
    if (sub.graph.order() <= std::min(req.dp_cap, kMaxDpCap)) {
        out.search = find_cycle_dp(sub.graph, pattern, req.dp_cap);
        out.method = "dp";
    } else {
        out.search = find_cycle_backtrack(sub.graph, pattern, req.budget);
        out.method = "backtrack";
    }
    if (out.search.embedding)
        for (auto& v : out.search.embedding->vertices) v = sub.to_original[v];
    return out;
}

}  // namespace detail

/// Equipartition into ℓ-sets, then one spanning cycle per part with that
/// part's orientation. Parts are searched hardest first (ascending δ⁰); the
/// reported failure is the first failing part in that order, whatever the
/// thread count.
inline FactorResult cycle_factor(const OrientedGraph& g, const FactorRequest& req) {
    if (req.ell < 3) throw std::invalid_argument("cycle_factor: ell must be >= 3");
    if (g.order() == 0 || g.order() % req.ell != 0) throw DivisibilityError(g.order(), req.ell);
    const std::size_t m = g.order() / req.ell;
    for (const auto& p : req.patterns)
        if (p.size() != req.ell)
            throw std::invalid_argument("pattern '" + p.str() + "' has length " + std::to_string(p.size()) +
                                        ", expected " + std::to_string(req.ell));
    if (req.patterns.size() > 1 && req.patterns.size() != m)
        throw std::invalid_argument("got " + std::to_string(req.patterns.size()) + " patterns for " +
                                    std::to_string(m) + " parts");
    const auto pattern_for = [&](std::size_t i) {
        if (req.patterns.empty()) return OrientationPattern::directed(req.ell);
        return req.patterns.size() == 1 ? req.patterns.front() : req.patterns[i];
    };

    FactorResult result;
    Partition partition;
    try {
        partition = recursive_equipartition(g, req.ell, req.mode, req.seed, req.partition);
    } catch (const AttemptsExhausted& e) {
        result.failure = FactorFailure{FailureStage::PartitionExhausted, std::nullopt, e.what(), std::nullopt, {}};
        return result;
    }

    std::vector<InducedSubgraph> subs;
    std::vector<std::size_t> semi(m);
    for (std::size_t i = 0; i < m; ++i) {
        subs.push_back(induced(g, partition.blocks[i]));
        semi[i] = min_degree(subs[i].graph, DegreeMode::Semi);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return semi[a] < semi[b]; });

    std::vector<std::optional<detail::PartOutcome>> outcomes(m);
    const std::size_t batch = std::max(1u, req.threads);
    for (std::size_t start = 0; start < m; start += batch) {
        const std::size_t stop = std::min(m, start + batch);
        if (stop - start == 1) {
            const auto i = order[start];
            outcomes[i] = detail::solve_part(subs[i], pattern_for(i), req);
        } else {
            std::vector<std::future<detail::PartOutcome>> futs;
            for (std::size_t j = start; j < stop; ++j) {
                const auto i = order[j];
                futs.push_back(std::async(std::launch::async, [&, i] { return detail::solve_part(subs[i], pattern_for(i), req); }));
            }
            for (std::size_t j = start; j < stop; ++j) outcomes[order[j]] = futs[j - start].get();
        }
        const bool failed = std::any_of(order.begin() + static_cast<std::ptrdiff_t>(start),
                                        order.begin() + static_cast<std::ptrdiff_t>(stop),
                                        [&](std::size_t i) { return outcomes[i]->search.status != SearchStatus::Found; });
        if (failed) break;
    }

    for (std::size_t j = 0; j < m; ++j) {
        const auto i = order[j];
        if (outcomes[i] && outcomes[i]->search.status == SearchStatus::Found) continue;
        FactorFailure f;
        const bool budget = outcomes[i]->search.status == SearchStatus::BudgetExhausted;
        f.stage = budget ? FailureStage::PartBudgetExhausted : FailureStage::PartNotFound;
        f.part = i;
        f.message = "part " + std::to_string(i) + ": " +
                    (budget ? "search budget exhausted" : "no spanning copy of pattern " + pattern_for(i).str());
        f.embeddings.resize(m);
        for (std::size_t k = 0; k < j; ++k) f.embeddings[order[k]] = outcomes[order[k]]->search.embedding;
        f.partition = std::move(partition);
        result.failure = std::move(f);
        return result;
    }

    FactorCertificate cert;
    cert.partition_below_threshold = partition.below_threshold;
    const auto needed = theorem_threshold(req.ell);
    for (std::size_t i = 0; i < m; ++i) {
        cert.embeddings.push_back(std::move(*outcomes[i]->search.embedding));
        cert.guarantee_flags.push_back(semi[i] >= needed);
        cert.part_semi_degrees.push_back(semi[i]);
        cert.methods.push_back(outcomes[i]->method);
    }
    cert.partition = std::move(partition);
    result.certificate = std::move(cert);
    return result;
}

struct FactorVerdict {
    bool tiling_ok = true;
    bool blocks_match_ok = true;
    bool embeddings_ok = true;
    std::vector<std::string> failures;

    bool ok() const { return tiling_ok && blocks_match_ok && embeddings_ok; }
};

/// Rechecks a certificate against g without trusting anything it records
/// beyond the blocks, embeddings and patterns themselves.
inline FactorVerdict verify_factor(const OrientedGraph& g, const FactorCertificate& cert) {
    FactorVerdict v;
    const auto& blocks = cert.partition.blocks;
    std::vector<int> cover(g.order(), 0);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (VertexId x : blocks[i]) {
            if (x >= g.order()) {
                v.tiling_ok = false;
                v.failures.push_back("block " + std::to_string(i) + " has out-of-range vertex " + std::to_string(x));
            } else if (++cover[x] == 2) {
                v.tiling_ok = false;
                v.failures.push_back("vertex " + std::to_string(x) + " lies in two blocks");
            }
        }
    for (VertexId x = 0; x < g.order(); ++x)
        if (cover[x] == 0) {
            v.tiling_ok = false;
            v.failures.push_back("vertex " + std::to_string(x) + " uncovered");
        }

    if (cert.embeddings.size() != blocks.size()) {
        v.blocks_match_ok = false;
        v.failures.push_back(std::to_string(cert.embeddings.size()) + " embeddings for " +
                             std::to_string(blocks.size()) + " blocks");
        return v;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto a = blocks[i];
        auto b = cert.embeddings[i].vertices;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
            v.blocks_match_ok = false;
            v.failures.push_back("embedding " + std::to_string(i) + " does not span block " + std::to_string(i));
        }
        const auto e = verify_embedding(g, cert.embeddings[i]);
        if (!e.ok) {
            v.embeddings_ok = false;
            v.failures.push_back("embedding " + std::to_string(i) + ": " + e.reason);
        }
    }
    return v;
}

struct ThresholdReport {
    Ratio relative_semi_degree;   // δ⁰(g)/n
    double target = 0.0;          // 3/8 + ε
    bool meets_target = false;
    double ell0_lower = 0.0;      // 20³ε⁻³; the other term, n₀, is not known
    bool ell_at_least_ell0_lower = false;
    double per_part_bound = 0.0;  // 3/8 + ε − 10ℓ^(−1/3)
    double per_part_target = 0.0; // 3/8 + ε/2
    bool per_part_ok = false;
};

inline ThresholdReport threshold_report(const OrientedGraph& g, std::size_t ell, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("threshold_report: eps must be positive");
    if (ell < 1) throw std::invalid_argument("threshold_report: ell must be >= 1");
    ThresholdReport r;
    r.relative_semi_degree = relative_degree(g, DegreeMode::Semi);
    r.target = 3.0 / 8.0 + eps;
    r.meets_target = r.relative_semi_degree.value() >= r.target;
    r.ell0_lower = 8000.0 / (eps * eps * eps);
    r.ell_at_least_ell0_lower = static_cast<double>(ell) >= r.ell0_lower;
    r.per_part_bound = simplified_bound(r.target, ell);
    r.per_part_target = 3.0 / 8.0 + eps / 2.0;
    r.per_part_ok = r.per_part_bound >= r.per_part_target;
    return r;
}

}  // namespace cyclefactor

#endif
