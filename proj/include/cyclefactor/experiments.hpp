#ifndef CYCLEFACTOR_EXPERIMENTS_HPP
#define CYCLEFACTOR_EXPERIMENTS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclefactor/graph.hpp"
#include "cyclefactor/partition.hpp"
#include "cyclefactor/rng.hpp"

namespace cyclefactor {

/// 2·exp(−2t²/n), the two-sided hypergeometric tail bound.
inline double tail_bound(std::size_t n, double t) {
    if (n < 1) throw std::invalid_argument("tail_bound: n must be >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("tail_bound: t must be >= 0");
    return 2.0 * std::exp(-2.0 * t * t / static_cast<double>(n));
}

/// Draws X = |S ∩ [m]| for S a uniform n-subset of [N]. Keeps one
/// permutation and partially reshuffles it per draw.
class HypergeometricSampler {
public:
    HypergeometricSampler(std::size_t N, std::size_t n, std::size_t m, Seed seed)
        : N_(N), n_(n), m_(m), rng_(seed), perm_(N) {
        if (n > N || m > N) throw std::invalid_argument("hypergeometric: need n <= N and m <= N");
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    }

    std::size_t operator()() {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            std::swap(perm_[i], perm_[i + rng_.below(N_ - i)]);
            hits += perm_[i] < m_;
        }
        return hits;
    }

    double mean() const { return static_cast<double>(n_) * static_cast<double>(m_) / static_cast<double>(N_); }

private:
    std::size_t N_, n_, m_;
    Rng rng_;
    std::vector<std::size_t> perm_;
};

inline std::size_t sample_hypergeometric(std::size_t N, std::size_t n, std::size_t m, Seed seed) {
    return HypergeometricSampler(N, n, m, seed)();
}

struct TailParams {
    std::size_t N = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    double t = 0.0;
    std::size_t samples = 0;
    Seed seed = 0;
};

/// Upper: the bound caps the probability (pass ⇔ empirical ≤ bound + 3σ).
/// Lower: the bound is a floor (pass ⇔ empirical ≥ bound − 3σ).
enum class BoundKind { Upper, Lower };

struct ExperimentReport {
    std::size_t hits = 0;
    std::size_t samples = 0;
    double empirical = 0.0;
    double bound = 0.0;
    double mc_sigma = 0.0;  // sqrt(p(1−p)/samples) at p = empirical
    BoundKind kind = BoundKind::Upper;
    bool pass = false;

    bool recompute_pass() const {
        return kind == BoundKind::Upper ? empirical <= bound + 3.0 * mc_sigma : empirical >= bound - 3.0 * mc_sigma;
    }
};

inline ExperimentReport make_report(std::size_t hits, std::size_t samples, double bound, BoundKind kind) {
    ExperimentReport r;
    r.hits = hits;
    r.samples = samples;
    r.empirical = static_cast<double>(hits) / static_cast<double>(samples);
    r.bound = bound;
    r.mc_sigma = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(samples));
    r.kind = kind;
    r.pass = r.recompute_pass();
    return r;
}

inline void validate(const TailParams& p) {
    if (p.samples < 1) throw std::invalid_argument("tail experiment: samples must be >= 1");
    if (p.N < 1 || p.n > p.N || p.m > p.N) throw std::invalid_argument("tail experiment: need 0 <= n, m <= N, N >= 1");
    if (p.n < 1) throw std::invalid_argument("tail experiment: n must be >= 1");
    if (!(p.t >= 0.0)) throw std::invalid_argument("tail experiment: t must be >= 0");
}

/// Monte Carlo estimate of P(|X − nm/N| ≥ t) against tail_bound(n, t).
inline ExperimentReport tail_experiment(const TailParams& p) {
    validate(p);
    HypergeometricSampler draw(p.N, p.n, p.m, p.seed);
    const double mean = draw.mean();
    std::size_t hits = 0;
    for (std::size_t s = 0; s < p.samples; ++s) hits += std::abs(static_cast<double>(draw()) - mean) >= p.t;
    return make_report(hits, p.samples, tail_bound(p.n, p.t), BoundKind::Upper);
}

/// Exact P(X = k) = C(m,k) C(N−m,n−k) / C(N,n); N ≤ 60 keeps every
/// coefficient inside 64 bits.
inline double hypergeometric_pmf(std::size_t N, std::size_t n, std::size_t m, std::size_t k) {
    if (N > 60) throw std::invalid_argument("hypergeometric_pmf: N too large for exact coefficients");
    const auto choose = [](std::size_t a, std::size_t b) -> std::uint64_t {
        if (b > a) return 0;
        std::uint64_t c = 1;
        for (std::size_t i = 1; i <= b; ++i) c = c * (a - b + i) / i;
        return c;
    };
    if (k > n || k > m || n - k > N - m) return 0.0;
    return static_cast<double>(choose(m, k)) * static_cast<double>(choose(N - m, n - k)) /
           static_cast<double>(choose(N, n));
}

struct SplitExperimentReport {
    ExperimentReport report;
    std::size_t n = 0;
    Ratio delta;
    double threshold = 0.0;
    Seed graph_seed = 0;
};

/// Single halving splits of one random tournament on n vertices; success
/// means both halves reach max(0, δ − 2n^(−1/3)). Compared against the
/// success floor 1/2.
inline SplitExperimentReport split_success_experiment(std::size_t n, std::size_t trials, DegreeMode mode, Seed seed) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("split_success_experiment: n must be even and >= 8");
    if (trials < 1) throw std::invalid_argument("split_success_experiment: trials must be >= 1");

    SplitExperimentReport out;
    out.n = n;
    out.graph_seed = derive_seed(seed, "graph");
    const auto g = random_tournament(n, out.graph_seed);
    const auto threshold = split_threshold(relative_degree(g, mode), n);
    out.delta = threshold.delta;
    out.threshold = threshold.value;

    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        try {
            random_split(g, n / 2, mode, derive_seed(seed, t), 1);
            ++hits;
        } catch (const AttemptsExhausted&) {
        }
    }
    out.report = make_report(hits, trials, 0.5, BoundKind::Lower);
    return out;
}

}  // namespace cyclefactor

#endif
