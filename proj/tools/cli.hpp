#ifndef CYCLEFACTOR_TOOLS_CLI_HPP
#define CYCLEFACTOR_TOOLS_CLI_HPP

// Batch front end: gen, degree, partition, hamilton, factor, experiment.
//
// Exit codes:
//   0  success
//   1  input or I/O error (unreadable file, malformed edge list)
//   2  usage error
//   3  part size does not divide the vertex count
//   4  partition split attempts exhausted
//   5  no spanning cycle (hamilton, or some factor part)
//   6  search budget exhausted
//   7  experiment bound violated at some grid point
//   8  certificate failed independent verification

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyclefactor/cyclefactor.hpp"

namespace cyclefactor::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kUsage = 2,
    kDivisibility = 3,
    kAttemptsExhausted = 4,
    kNotFound = 5,
    kBudgetExhausted = 6,
    kExperimentFailed = 7,
    kVerificationFailed = 8,
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::vector<std::string> argv;
    std::string subcommand;
    Seed seed = 0;
    std::string out;
    unsigned threads = 1;

    std::string input;
    std::string gen_spec;

    // gen
    std::string kind;
    std::size_t n = 0;
    double p = 0.0;

    std::size_t ell = 0;
    std::string mode = "semi";
    std::size_t max_attempts = 100;
    bool best_effort = false;
    double margin = 0.0;
    double eps = 0.1;
    std::string pattern;
    std::string patterns;
    std::string method = "auto";
    std::size_t dp_cap = kDefaultDpCap;
    std::uint64_t budget = kDefaultBudget;

    // experiment
    std::string experiment;
    std::string preset;
    std::vector<std::size_t> big_n;
    std::vector<std::size_t> small_n;
    std::vector<std::size_t> m;
    std::vector<double> t;
    std::size_t samples = 100000;
    std::size_t trials = 200;
    std::string csv;
};

inline std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty() || o.out == "-") {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    f << text;
}

inline Json config_json(const Options& o) {
    Json c;
    c["subcommand"] = o.subcommand;
    c["argv"] = o.argv;
    c["seed"] = o.seed;
    return c;
}

// Document skeleton: the timestamp comes first and is the only field that
// varies between identical runs.
inline Json document(const Options& o, std::chrono::steady_clock::time_point start) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream ts;
    ts << utc_now() << " elapsed_ms=" << std::llround(ms);
    Json j;
    j["timestamp"] = ts.str();
    j["config"] = config_json(o);
    return j;
}

inline OrientedGraph generate(const std::string& kind, std::size_t n, double p, Seed seed) {
    if (kind == "tournament") return random_tournament(n, seed);
    if (kind == "oriented") {
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("oriented: p must lie in [0,1]");
        return random_oriented(n, p, seed);
    }
    throw UsageError("unknown generator '" + kind + "' (expected tournament or oriented)");
}

/// --input FILE or --gen tournament:N | oriented:N:P. Generated inputs use a
/// seed derived from --seed.
inline OrientedGraph load_graph(const Options& o) {
    if (o.input.empty() == o.gen_spec.empty()) throw UsageError("exactly one of --input and --gen is required");
    if (!o.input.empty()) {
        try {
            return read_edge_list(o.input);
        } catch (const ParseError& e) {
            throw InputError(o.input + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw InputError(e.what());
        }
    }
    std::vector<std::string> parts;
    std::stringstream ss(o.gen_spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    try {
        if (parts.size() == 2 && parts[0] == "tournament")
            return generate("tournament", std::stoul(parts[1]), 0.0, derive_seed(o.seed, "graph"));
        if (parts.size() == 3 && parts[0] == "oriented")
            return generate("oriented", std::stoul(parts[1]), std::stod(parts[2]), derive_seed(o.seed, "graph"));
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e)) throw;
        throw UsageError("bad --gen value '" + o.gen_spec + "'");
    }
    throw UsageError("bad --gen value '" + o.gen_spec + "' (expected tournament:N or oriented:N:P)");
}

inline Json graph_json(const OrientedGraph& g) {
    return Json{{"n", g.order()},
                {"e", g.size()},
                {"hash", graph_hash(g)},
                {"semi_degree", min_degree(g, DegreeMode::Semi)},
                {"total_degree", min_degree(g, DegreeMode::Total)}};
}

inline std::vector<OrientationPattern> parse_patterns(const std::string& text) {
    std::vector<OrientationPattern> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            out.push_back(OrientationPattern::parse(item));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

inline int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
    const auto g = generate(o.kind, o.n, o.p, o.seed);
    emit(o, to_edge_list(g), out);
    auto& summary = (o.out.empty() || o.out == "-") ? err : out;
    summary << "n=" << g.order() << " e=" << g.size() << " semi=" << min_degree(g, DegreeMode::Semi)
            << " total=" << min_degree(g, DegreeMode::Total) << '\n';
    return kOk;
}

inline int cmd_degree(const Options& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto g = load_graph(o);
    auto doc = document(o, start);
    doc["graph"] = graph_json(g);
    doc["relative_semi_degree"] = to_json(relative_degree(g, DegreeMode::Semi));
    doc["relative_total_degree"] = to_json(relative_degree(g, DegreeMode::Total));
    emit(o, doc.dump(2) + "\n", out);
    return kOk;
}

inline int cmd_partition(const Options& o, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const auto g = load_graph(o);
    const auto mode = parse_degree_mode(o.mode);
    if (o.ell == 0) throw UsageError("--ell must be positive");
    PartitionOptions popts{o.max_attempts, o.best_effort, o.threads, o.margin};
    Partition p;
    try {
        p = recursive_equipartition(g, o.ell, mode, o.seed, popts);
    } catch (const DivisibilityError& e) {
        err << "error: " << e.what() << '\n';
        return kDivisibility;
    } catch (const AttemptsExhausted& e) {
        err << "error: " << e.what() << " (rerun with --best-effort to keep the best sample)\n";
        return kAttemptsExhausted;
    }
    const auto verdict = verify_partition(g, p, mode);
    auto doc = document(o, start);
    doc["graph"] = graph_json(g);
    doc["partition"] = to_json(p);
    doc["verdict"] = to_json(verdict);
    emit(o, doc.dump(2) + "\n", out);
    return verdict.structural_ok() ? kOk : kVerificationFailed;
}

inline int cmd_hamilton(const Options& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto g = load_graph(o);
    OrientationPattern pattern;
    try {
        pattern = o.pattern.empty() ? OrientationPattern::directed(g.order()) : OrientationPattern::parse(o.pattern);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (pattern.size() != g.order())
        throw UsageError("pattern length " + std::to_string(pattern.size()) + " differs from graph order " +
                         std::to_string(g.order()));
    std::string method = o.method;
    if (method == "auto") method = g.order() <= std::min(o.dp_cap, kMaxDpCap) ? "dp" : "backtrack";
    SearchResult r;
    if (method == "dp") {
        try {
            r = find_cycle_dp(g, pattern, o.dp_cap);
        } catch (const CapExceeded& e) {
            throw UsageError(e.what());
        }
    } else if (method == "backtrack") {
        r = find_cycle_backtrack(g, pattern, o.budget);
    } else {
        throw UsageError("unknown --method '" + o.method + "'");
    }
    auto doc = document(o, start);
    doc["graph"] = graph_json(g);
    doc["method"] = method;
    doc["pattern"] = pattern.str();
    doc["canonical_pattern"] = canonicalize_pattern(pattern).str();
    doc["theorem_threshold"] = theorem_threshold(g.order());
    doc["result"] = to_json(r);
    if (r.embedding) doc["verified"] = verify_embedding(g, *r.embedding).ok;
    emit(o, doc.dump(2) + "\n", out);
    switch (r.status) {
        case SearchStatus::Found: return kOk;
        case SearchStatus::NotFound: return kNotFound;
        case SearchStatus::BudgetExhausted: return kBudgetExhausted;
    }
    return kOk;
}

inline int cmd_factor(const Options& o, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const auto g = load_graph(o);
    FactorRequest req;
    req.ell = o.ell;
    req.patterns = parse_patterns(o.patterns);
    req.mode = parse_degree_mode(o.mode);
    req.seed = o.seed;
    req.partition = {o.max_attempts, o.best_effort, o.threads, o.margin};
    req.dp_cap = o.dp_cap;
    req.budget = o.budget;
    req.threads = o.threads;
    if (req.ell < 3) throw UsageError("--ell must be >= 3");
    if (!(o.eps > 0.0)) throw UsageError("--eps must be positive");

    FactorResult result;
    try {
        result = cycle_factor(g, req);
    } catch (const DivisibilityError& e) {
        err << "error: " << e.what() << '\n';
        return kDivisibility;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    auto doc = document(o, start);
    doc["graph"] = graph_json(g);
    doc["seed"] = o.seed;
    doc["ell"] = o.ell;
    doc["threshold_report"] = to_json(threshold_report(g, o.ell, o.eps));
    int code = kOk;
    if (result.ok()) {
        const auto verdict = verify_factor(g, *result.certificate);
        doc["status"] = "certificate";
        doc["certificate"] = to_json(*result.certificate);
        doc["verdict"] = to_json(verdict);
        if (!verdict.ok()) code = kVerificationFailed;
    } else {
        const auto& f = *result.failure;
        doc["status"] = "failure";
        doc["failure"] = to_json(f);
        err << "factor failed: " << f.message << '\n';
        code = f.stage == FailureStage::PartitionExhausted ? kAttemptsExhausted
               : f.stage == FailureStage::PartNotFound    ? kNotFound
                                                          : kBudgetExhausted;
    }
    emit(o, doc.dump(2) + "\n", out);
    return code;
}

inline std::vector<TailParams> tail_grid(const Options& o) {
    std::vector<TailParams> grid;
    if (o.samples < 1) throw UsageError("--samples must be >= 1");
    if (o.preset == "standard") {
        for (std::size_t N : {100u, 1000u})
            for (std::size_t m : {N / 4, N / 2})
                for (int which = 0; which < 2; ++which) {
                    const std::size_t n = N / 2;
                    const double t = which == 0 ? std::sqrt(static_cast<double>(n)) : std::cbrt(static_cast<double>(n) * n);
                    grid.push_back({N, n, m, t, o.samples, 0});
                }
    } else if (!o.preset.empty()) {
        throw UsageError("unknown --preset '" + o.preset + "'");
    } else {
        if (o.big_n.empty() || o.small_n.empty() || o.m.empty() || o.t.empty())
            throw UsageError("tail needs --N, --n, --m and --t (or --preset standard)");
        for (auto N : o.big_n)
            for (auto n : o.small_n)
                for (auto m : o.m)
                    for (auto t : o.t) grid.push_back({N, n, m, t, o.samples, 0});
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i].seed = derive_seed(o.seed, i);
        try {
            validate(grid[i]);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return grid;
}

inline int cmd_experiment(const Options& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    bool all_pass = true;
    Json points = Json::array();
    std::string csv;
    if (o.experiment == "tail") {
        const auto grid = tail_grid(o);
        std::vector<ExperimentReport> reports;
        for (const auto& p : grid) {
            reports.push_back(tail_experiment(p));
            all_pass = all_pass && reports.back().pass;
            auto row = Json{{"N", p.N}, {"n", p.n}, {"m", p.m}, {"t", p.t}, {"samples", p.samples}, {"seed", p.seed}};
            row["report"] = to_json(reports.back());
            points.push_back(std::move(row));
        }
        csv = tail_csv(grid, reports);
    } else if (o.experiment == "split-success") {
        if (o.trials < 1) throw UsageError("--trials must be >= 1");
        if (o.small_n.empty()) throw UsageError("split-success needs --n");
        const auto mode = parse_degree_mode(o.mode);
        std::vector<SplitExperimentReport> rows;
        for (std::size_t i = 0; i < o.small_n.size(); ++i) {
            const auto n = o.small_n[i];
            if (n < 8 || n % 2 != 0) throw UsageError("--n must be even and >= 8");
            rows.push_back(split_success_experiment(n, o.trials, mode, derive_seed(o.seed, i)));
            all_pass = all_pass && rows.back().report.pass;
            auto row = Json{{"n", n},
                            {"trials", o.trials},
                            {"graph_seed", rows.back().graph_seed},
                            {"delta", to_json(rows.back().delta)},
                            {"threshold", rows.back().threshold}};
            row["report"] = to_json(rows.back().report);
            points.push_back(std::move(row));
        }
        csv = split_csv(rows);
    } else {
        throw UsageError("unknown experiment '" + o.experiment + "' (expected tail or split-success)");
    }
    auto doc = document(o, start);
    doc["experiment"] = o.experiment;
    doc["all_pass"] = all_pass;
    doc["points"] = std::move(points);
    emit(o, doc.dump(2) + "\n", out);
    if (!o.csv.empty()) {
        std::ofstream f(o.csv, std::ios::binary);
        if (!f) throw InputError("cannot write '" + o.csv + "'");
        f << csv;
    }
    return all_pass ? kOk : kExperimentFailed;
}

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    o.argv = args;
    CLI::App app{"Cycle-factor toolkit for oriented graphs", "cyclefactor"};
    app.require_subcommand(1);

    const auto common = [&](CLI::App* sc, bool needs_graph) {
        sc->add_option("--seed", o.seed, "Seed for all randomness");
        sc->add_option("--out,-o", o.out, "Output file (default stdout)");
        sc->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
        if (needs_graph) {
            sc->add_option("--input,-i", o.input, "Edge-list file");
            sc->add_option("--gen", o.gen_spec, "Generated input: tournament:N or oriented:N:P");
        }
    };

    auto* gen = app.add_subcommand("gen", "Generate a random oriented graph as an edge list");
    gen->add_option("kind", o.kind, "tournament or oriented")->required();
    gen->add_option("n", o.n, "Vertex count")->required();
    gen->add_option("p", o.p, "Edge probability (oriented only)");
    common(gen, false);

    auto* degree = app.add_subcommand("degree", "Report minimum semi- and total degree");
    common(degree, true);

    auto* partition = app.add_subcommand("partition", "Degree-preserving equipartition");
    common(partition, true);
    partition->add_option("--ell", o.ell, "Part size")->required();
    partition->add_option("--mode", o.mode, "semi or total");
    partition->add_option("--max-attempts", o.max_attempts, "Samples per split")->check(CLI::PositiveNumber);
    partition->add_flag("--best-effort", o.best_effort, "Keep the best sample when attempts run out");
    partition->add_option("--margin", o.margin, "Raise every split threshold by this amount");

    auto* hamilton = app.add_subcommand("hamilton", "Find a spanning cycle with a given orientation");
    common(hamilton, true);
    hamilton->add_option("--pattern", o.pattern, "String over {+,-}; default all +");
    hamilton->add_option("--method", o.method, "auto, dp or backtrack");
    hamilton->add_option("--dp-cap", o.dp_cap, "Largest order solved by DP");
    hamilton->add_option("--budget", o.budget, "Backtracking node-expansion budget");

    auto* factor = app.add_subcommand("factor", "Cycle-factor with per-part orientations");
    common(factor, true);
    factor->add_option("--ell", o.ell, "Cycle length")->required();
    factor->add_option("--patterns", o.patterns, "One pattern, or one per part, comma separated");
    factor->add_option("--eps", o.eps, "Epsilon for the threshold report");
    factor->add_option("--mode", o.mode, "semi or total");
    factor->add_option("--max-attempts", o.max_attempts, "Samples per split")->check(CLI::PositiveNumber);
    factor->add_flag("--best-effort", o.best_effort, "Keep the best sample when attempts run out");
    factor->add_option("--margin", o.margin, "Raise every split threshold by this amount");
    factor->add_option("--dp-cap", o.dp_cap, "Largest part size solved by DP");
    factor->add_option("--budget", o.budget, "Backtracking budget per part");

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo checks of the probabilistic bounds");
    common(experiment, false);
    experiment->add_option("kind", o.experiment, "tail or split-success")->required();
    experiment->add_option("--preset", o.preset, "standard: the N in {100,1000} grid (tail only)");
    experiment->add_option("--N", o.big_n, "Population sizes")->delimiter(',');
    experiment->add_option("--n", o.small_n, "Sample sizes (tail) or tournament orders (split-success)")->delimiter(',');
    experiment->add_option("--m", o.m, "Marked-set sizes")->delimiter(',');
    experiment->add_option("--t", o.t, "Deviations")->delimiter(',');
    experiment->add_option("--samples", o.samples, "Samples per grid point");
    experiment->add_option("--trials", o.trials, "Split trials");
    experiment->add_option("--mode", o.mode, "semi or total");
    experiment->add_option("--csv", o.csv, "Also write a CSV table here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            o.subcommand = "gen";
            return cmd_gen(o, out, err);
        }
        if (degree->parsed()) {
            o.subcommand = "degree";
            return cmd_degree(o, out);
        }
        if (partition->parsed()) {
            o.subcommand = "partition";
            return cmd_partition(o, out, err);
        }
        if (hamilton->parsed()) {
            o.subcommand = "hamilton";
            return cmd_hamilton(o, out);
        }
        if (factor->parsed()) {
            o.subcommand = "factor";
            return cmd_factor(o, out, err);
        }
        o.subcommand = "experiment";
        return cmd_experiment(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace cyclefactor::cli

#endif
