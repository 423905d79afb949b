#ifndef CYCLEFACTOR_REPORT_HPP
#define CYCLEFACTOR_REPORT_HPP

// JSON and CSV renderings of results. Field order is fixed (ordered_json), so
// equal inputs give byte-identical output.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cyclefactor/experiments.hpp"
#include "cyclefactor/factor.hpp"
#include "cyclefactor/hamilton.hpp"
#include "cyclefactor/partition.hpp"

namespace cyclefactor {

using Json = nlohmann::ordered_json;

inline Json to_json(const Ratio& r) { return Json{{"num", r.num}, {"den", r.den}, {"value", r.value()}}; }

inline Json to_json(const SplitReport& r) {
    Json j;
    j["path"] = r.path.empty() ? "root" : r.path;
    j["attempts"] = r.attempts;
    j["threshold"] = Json{{"delta", to_json(r.threshold.delta)}, {"n", r.threshold.n}, {"margin", r.threshold.margin}, {"value", r.threshold.value}};
    j["achieved_left"] = to_json(r.achieved_left);
    j["achieved_right"] = to_json(r.achieved_right);
    j["left_size"] = r.left.size();
    j["right_size"] = r.right.size();
    j["mode"] = to_string(r.mode);
    j["below_threshold"] = r.below_threshold;
    return j;
}

inline Json to_json(const Partition& p) {
    Json j;
    j["part_size"] = p.part_size;
    j["parts"] = p.blocks.size();
    j["mode"] = to_string(p.mode);
    j["seed"] = p.seed;
    j["delta"] = to_json(p.delta);
    j["k"] = p.k;
    j["bound_claimed"] = p.bound_claimed;
    j["bound_simplified"] = simplified_bound(p.delta.value(), p.part_size);
    if (p.mode == DegreeMode::Total)
        j["assumption"] = "total-degree mode reuses the semi-degree error term 2n^(-1/3)";
    j["below_threshold"] = p.below_threshold;
    j["blocks"] = p.blocks;
    Json reports = Json::array();
    for (const auto& r : p.reports) reports.push_back(to_json(r));
    j["reports"] = std::move(reports);
    return j;
}

inline Json to_json(const PartitionVerdict& v) {
    Json degrees = Json::array();
    for (const auto& r : v.block_degrees) degrees.push_back(to_json(r));
    return Json{{"structural_ok", v.structural_ok()},
                {"sizes_ok", v.sizes_ok},
                {"disjoint_ok", v.disjoint_ok},
                {"coverage_ok", v.coverage_ok},
                {"block_degrees", std::move(degrees)},
                {"failures", v.failures}};
}

inline Json to_json(const CycleEmbedding& e) { return Json{{"pattern", e.pattern.str()}, {"vertices", e.vertices}}; }

inline Json to_json(const SearchResult& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["expansions"] = r.expansions;
    j["embedding"] = r.embedding ? to_json(*r.embedding) : Json(nullptr);
    return j;
}

inline Json to_json(const FactorCertificate& c) {
    Json parts = Json::array();
    for (std::size_t i = 0; i < c.embeddings.size(); ++i) {
        parts.push_back(Json{{"block", c.partition.blocks[i]},
                             {"pattern", c.embeddings[i].pattern.str()},
                             {"canonical_pattern", canonicalize_pattern(c.embeddings[i].pattern).str()},
                             {"embedding", c.embeddings[i].vertices},
                             {"semi_degree", c.part_semi_degrees[i]},
                             {"guarantee_flag", static_cast<bool>(c.guarantee_flags[i])},
                             {"method", c.methods[i]}});
    }
    Json j;
    j["guarantee"] = "theorem-guaranteed (asymptotic): flag means the part's semi-degree reaches ceil((3l-1)/8); "
                     "every embedding is verified by search";
    j["partition_below_threshold"] = c.partition_below_threshold;
    j["parts"] = std::move(parts);
    j["partition"] = to_json(c.partition);
    return j;
}

inline Json to_json(const FactorFailure& f) {
    Json solved = Json::array();
    for (const auto& e : f.embeddings) solved.push_back(e ? to_json(*e) : Json(nullptr));
    Json j;
    j["stage"] = to_string(f.stage);
    j["part"] = f.part ? Json(*f.part) : Json(nullptr);
    j["message"] = f.message;
    j["partial_embeddings"] = std::move(solved);
    j["partition"] = f.partition ? to_json(*f.partition) : Json(nullptr);
    return j;
}

inline Json to_json(const FactorVerdict& v) {
    return Json{{"ok", v.ok()},
                {"tiling_ok", v.tiling_ok},
                {"blocks_match_ok", v.blocks_match_ok},
                {"embeddings_ok", v.embeddings_ok},
                {"failures", v.failures}};
}

inline Json to_json(const ThresholdReport& r) {
    return Json{{"relative_semi_degree", to_json(r.relative_semi_degree)},
                {"target", r.target},
                {"meets_target", r.meets_target},
                {"ell0", Json{{"explicit_term", r.ell0_lower}, {"n0", "unknown"}}},
                {"ell_at_least_explicit_term", r.ell_at_least_ell0_lower},
                {"per_part_bound", r.per_part_bound},
                {"per_part_target", r.per_part_target},
                {"per_part_ok", r.per_part_ok}};
}

inline Json to_json(const ExperimentReport& r) {
    return Json{{"hits", r.hits},
                {"samples", r.samples},
                {"empirical", r.empirical},
                {"bound", r.bound},
                {"bound_kind", r.kind == BoundKind::Upper ? "upper" : "lower"},
                {"mc_sigma", r.mc_sigma},
                {"pass", r.pass}};
}

/// One CSV row per tail grid point.
inline std::string tail_csv(const std::vector<TailParams>& params, const std::vector<ExperimentReport>& reports) {
    std::ostringstream s;
    s.precision(17);
    s << "N,n,m,t,samples,seed,hits,empirical,bound,mc_sigma,pass\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        const auto& r = reports[i];
        s << p.N << ',' << p.n << ',' << p.m << ',' << p.t << ',' << p.samples << ',' << p.seed << ',' << r.hits << ','
          << r.empirical << ',' << r.bound << ',' << r.mc_sigma << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return s.str();
}

inline std::string split_csv(const std::vector<SplitExperimentReport>& rows) {
    std::ostringstream s;
    s.precision(17);
    s << "n,trials,delta,threshold,hits,empirical,floor,mc_sigma,pass\n";
    for (const auto& r : rows)
        s << r.n << ',' << r.report.samples << ',' << r.delta.value() << ',' << r.threshold << ',' << r.report.hits
          << ',' << r.report.empirical << ',' << r.report.bound << ',' << r.report.mc_sigma << ','
          << (r.report.pass ? "true" : "false") << '\n';
    return s.str();
}

}  // namespace cyclefactor

#endif
