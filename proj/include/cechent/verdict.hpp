#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "homology.hpp"
#include "induced_maps.hpp"
#include "polynomial.hpp"
#include "scenario.hpp"

namespace cechent {

enum class Verdict { Satisfied, Violated, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Satisfied: return "SATISFIED";
    case Verdict::Violated: return "VIOLATED";
    default: return "INCONCLUSIVE";
    }
}

struct CoverEntropyRow {
    std::string cover;
    EntropySequence sequence;
    ExpansionReport expansion;
    std::size_t L_d = 1;
    double ent_f = 0.0;
    double ent_fL = 0.0;
};

struct VerdictReport {
    std::string scenario;
    std::string model_label;
    std::size_t points = 0;

    // homology of the nerve carrying the self map
    std::string homology_cover;
    std::vector<HomologyGroup> homology;
    std::vector<HomologyGroup> cohomology;
    DualityReport duality;

    bool map_found = false;
    std::string map_method;
    std::string map_note;
    int refinements = 0;
    bool refinement_iso = true;
    std::vector<Polynomial> degree_char_polys;
    SpectralSummary spectral;
    double cohomology_rho = 0.0;
    std::optional<EigenSupReport> eigen_sup;

    std::vector<CoverEntropyRow> entropy;
    std::size_t selected = 0;
    double sup_ent_f = 0.0;
    LdDirection direction = LdDirection::Both;

    double ent_estimate = 0.0;
    std::size_t L_d = 1;
    double log_L_d = 0.0;
    double ent_fL = 0.0;
    double rho = 0.0;
    double log_rho = -std::numeric_limits<double>::infinity();
    /// ent_fL - log rho; +inf when rho = 0.
    double margin = 0.0;
    double margin_without_log = 0.0;
    double tolerance = 1e-6;
    bool truncated = false;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> footnotes;
};

namespace detail {

inline std::string fixed6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v + 0.0);
    std::string s = buf;
    return s == "-0.000000" ? "0.000000" : s;
}

inline std::size_t directional_ld(const ExpansionReport& e, LdDirection d) {
    switch (d) {
    case LdDirection::Forward: return e.forward;
    case LdDirection::Backward: return e.backward;
    default: return e.L_d;
    }
}

/// Free part of f^* on H^p, from the transposed chain map.
inline std::vector<IntMatrix> cohomology_blocks(const ChainMap& f, const ChainComplex& c) {
    std::vector<IntMatrix> out;
    for (int p = 0; p <= c.top_dimension(); ++p) {
        DegreeHomology dc = degree_cohomology(c, p);
        out.push_back(induced_degree_map(f[p].transpose(), dc, dc, p).free_part);
    }
    return out;
}

} // namespace detail

/// Full pipeline: self map on homology and its spectrum, entropy and L_d
/// over every cover, then the comparison ent(f_L) >= log rho.
inline VerdictReport run_verdict(const Scenario& s) {
    if (!s.model || s.covers.empty()) throw ValidationError("verdict: scenario needs a model and at least one cover");
    const Model& m = *s.model;
    const AnalysisOptions& opt = s.analysis;
    VerdictReport r;
    r.scenario = s.name;
    r.model_label = m.label();
    r.points = m.size();
    r.tolerance = opt.tolerance;
    r.direction = opt.ld_direction;

    // spectral side: the first cover admitting an induced self map
    std::optional<InducedEndomorphism> endo;
    std::string endo_cover;
    for (const auto& [name, cover] : s.covers) {
        InducedEndomorphism e = find_induced_endomorphism(m, cover, opt.max_refinements);
        if (e.found) {
            endo = std::move(e);
            endo_cover = name;
            break;
        }
        r.map_note += (r.map_note.empty() ? "" : "; ") + name + ": " + e.note;
    }
    if (endo) {
        r.map_found = true;
        r.map_method = endo->method;
        r.refinements = endo->refinements;
        r.refinement_iso = endo->refinement_iso;
        r.homology_cover = endo_cover + (endo->refinements ? " refined " + std::to_string(endo->refinements) + "x" : "");
        const ChainComplex cc = endo->complex->chain_complex();
        r.homology = homology_table(cc);
        for (int p = 0; p <= cc.top_dimension(); ++p) r.cohomology.push_back(cohomology(cc, p));
        r.duality = duality_audit(*endo->complex);
        for (const auto& b : endo->homology.free_blocks()) r.degree_char_polys.push_back(characteristic_polynomial(b));
        r.spectral = spectral_summary(endo->homology.free_blocks(), opt.eigen_tolerance);
        r.cohomology_rho = spectral_summary(detail::cohomology_blocks(endo->self_map, cc), opt.eigen_tolerance).rho;
        r.eigen_sup = eigen_sup_chain(endo->self_map, cc);
        r.rho = r.spectral.rho;
        r.log_rho = r.spectral.log_rho;
    } else {
        r.homology_cover = s.covers.front().first;
        const NerveComplex k = build_nerve(s.covers.front().second);
        const ChainComplex cc = k.chain_complex();
        r.homology = homology_table(cc);
        for (int p = 0; p <= cc.top_dimension(); ++p) r.cohomology.push_back(cohomology(cc, p));
        r.duality = duality_audit(k);
    }

    // entropy side: sup of ent(f, a) + log L_d over the covers
    bool have = false;
    for (const auto& [name, cover] : s.covers) {
        CoverEntropyRow row;
        row.cover = name;
        row.sequence = entropy_estimate(m, cover, opt.n_max, opt.exact_limit, opt.join_cap);
        row.expansion = expansion_multiplicity(m, cover);
        row.L_d = detail::directional_ld(row.expansion, opt.ld_direction);
        row.ent_f = row.sequence.estimate;
        row.ent_fL = row.ent_f + std::log(static_cast<double>(row.L_d));
        r.truncated = r.truncated || row.sequence.truncated;
        r.sup_ent_f = std::max(r.sup_ent_f, row.ent_f);
        if (!have || row.ent_fL > r.entropy[r.selected].ent_fL) r.selected = r.entropy.size();
        have = true;
        r.entropy.push_back(std::move(row));
    }
    const CoverEntropyRow& best = r.entropy[r.selected];
    r.ent_estimate = best.ent_f;
    r.L_d = best.L_d;
    r.log_L_d = std::log(static_cast<double>(best.L_d));
    r.ent_fL = best.ent_fL;

    if (r.map_found) {
        r.margin = r.rho > 0 ? r.ent_fL - r.log_rho : std::numeric_limits<double>::infinity();
        r.margin_without_log = r.ent_fL - r.rho;
    }
    if (!r.map_found || r.truncated) r.verdict = Verdict::Inconclusive;
    else r.verdict = r.margin >= -opt.tolerance ? Verdict::Satisfied : Verdict::Violated;

    auto& f = r.footnotes;
    f.push_back("ent_fL adds log L_d once; the second addition in the fiber-entropy definition is read as a typo");
    if (r.map_found)
        f.push_back("verdict compares ent_fL with log rho; without the logarithm the margin would be " +
                    detail::fixed6(r.margin_without_log));
    if (!r.map_found) f.push_back("no induced self map within " + std::to_string(opt.max_refinements) + " refinements: " + r.map_note);
    if (r.map_found && !r.refinement_iso)
        f.push_back("the refinement map is not an isomorphism on homology; rho belongs to the sectioned self map of the refined nerve");
    if (r.map_found && !r.spectral.certified) f.push_back("eigenvalue error bound exceeds the eigen tolerance");
    if (r.map_found && std::fabs(r.cohomology_rho - r.rho) > opt.eigen_tolerance)
        f.push_back("cohomology spectral radius " + detail::fixed6(r.cohomology_rho) + " differs from the homology one");
    if (r.map_found && r.rho == 0) f.push_back("rho = 0: log rho is -inf and the margin is unbounded");
    for (const auto& row : r.entropy) {
        if (row.sequence.decaying)
            f.push_back("cover " + row.cover + ": joins stabilize at n=" + std::to_string(*row.sequence.stabilized_at) +
                        ", so ent is 0 (min H_n/n over the range is " + detail::fixed6(row.sequence.min_per_n) + ")");
        if (row.sequence.truncated) f.push_back("cover " + row.cover + ": join sequence truncated at the element cap");
        if (!row.sequence.exact) f.push_back("cover " + row.cover + ": some subcover sizes are greedy upper bounds");
    }
    if (opt.ld_direction != LdDirection::Both)
        f.push_back(std::string("L_d uses the ") + to_string(opt.ld_direction) + " direction count only");
    return r;
}

namespace detail {

/// Appends the members of `src` to the object `dst`.
inline void merge_into(Json& dst, const Json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

inline Json number_or_null(double v) {
    if (std::isfinite(v)) return v + 0.0;
    return nullptr;
}

inline Json group_json(int dim, const HomologyGroup& g) {
    Json t = Json::array();
    for (const auto& x : g.torsion) t.push_back(static_cast<long long>(x));
    return Json{{"dim", dim}, {"rank", g.rank}, {"torsion", t}};
}

inline Json entropy_json(const EntropySequence& s) {
    Json j;
    j["h_values"] = s.h_values;
    j["n_values"] = s.n_values;
    j["estimate"] = s.estimate + 0.0;
    j["min_per_n"] = s.min_per_n;
    j["stabilized_at"] = s.stabilized_at ? Json(*s.stabilized_at) : Json(nullptr);
    j["decaying"] = s.decaying;
    j["monotone"] = s.monotone;
    j["truncated"] = s.truncated;
    j["exact"] = s.exact;
    return j;
}

} // namespace detail

inline Json report_json(const VerdictReport& r) {
    using detail::number_or_null;
    Json j;
    j["scenario"] = r.scenario;
    j["model"] = Json{{"label", r.model_label}, {"points", r.points}};
    Json h = Json::array(), c = Json::array();
    for (std::size_t p = 0; p < r.homology.size(); ++p) h.push_back(detail::group_json(static_cast<int>(p), r.homology[p]));
    for (std::size_t p = 0; p < r.cohomology.size(); ++p) c.push_back(detail::group_json(static_cast<int>(p), r.cohomology[p]));
    j["homology"] = h;
    j["cohomology"] = c;

    Json sp;
    sp["cover"] = r.homology_cover;
    if (r.map_found) {
        sp["char_poly"] = r.spectral.char_poly.to_string();
        Json per = Json::array();
        for (const auto& p : r.degree_char_polys) per.push_back(p.to_string());
        sp["degree_char_polys"] = per;
        sp["rho"] = r.rho;
        sp["log_rho"] = number_or_null(r.log_rho);
        sp["rho_exact"] = r.spectral.rho_exact;
        sp["eigen_moduli"] = r.spectral.eigen_moduli;
        sp["error_bound"] = r.spectral.error_bound;
        sp["certified"] = r.spectral.certified;
        sp["cohomology_rho"] = r.cohomology_rho;
        sp["method"] = r.map_method;
        sp["refinements"] = r.refinements;
        sp["refinement_iso"] = r.refinement_iso;
    } else {
        sp["char_poly"] = nullptr;
        sp["rho"] = nullptr;
        sp["log_rho"] = nullptr;
        sp["note"] = r.map_note;
    }
    j["spectral"] = sp;

    const CoverEntropyRow& best = r.entropy.at(r.selected);
    Json en = Json{{"cover", best.cover}};
    detail::merge_into(en, detail::entropy_json(best.sequence));
    en["sup_estimate"] = r.sup_ent_f;
    Json table = Json::array();
    for (const auto& row : r.entropy)
        table.push_back(Json{{"cover", row.cover}, {"estimate", row.ent_f + 0.0}, {"L_d", row.L_d}, {"ent_fL", row.ent_fL + 0.0}});
    en["covers"] = table;
    j["entropy"] = en;

    j["fiber"] = Json{{"cover", best.cover},
                      {"L_d", r.L_d},
                      {"log_L_d", r.log_L_d + 0.0},
                      {"ent_fL", r.ent_fL + 0.0},
                      {"direction", to_string(r.direction)},
                      {"forward", best.expansion.forward},
                      {"backward", best.expansion.backward}};
    if (r.eigen_sup)
        j["eigen_sup"] = Json{{"supH", r.eigen_sup->sup_h},
                            {"supZ", r.eigen_sup->sup_z},
                            {"supC", r.eigen_sup->sup_c},
                            {"chain_holds", r.eigen_sup->chain_holds()},
                            {"divisibility", r.eigen_sup->divisibility_holds}};
    else
        j["eigen_sup"] = Json{{"supH", nullptr}, {"supZ", nullptr}, {"supC", nullptr}};

    Json rows = Json::array();
    for (const auto& row : r.duality.rows)
        rows.push_back(Json{{"p", row.p}, {"homology", row.homology.to_string()}, {"cohomology", row.cohomology.to_string()}, {"holds", row.holds}});
    j["duality"] = Json{{"n", r.duality.n}, {"holds", r.duality.holds()}, {"rows", rows}};

    j["verdict"] = to_string(r.verdict);
    j["margin"] = r.map_found ? number_or_null(r.margin) : Json(nullptr);
    j["margin_without_log"] = r.map_found ? number_or_null(r.margin_without_log) : Json(nullptr);
    j["truncated"] = r.truncated;
    j["footnotes"] = r.footnotes;
    return j;
}

enum class ReportFormat { Structured, Tabular };

inline const char* kTabularHeader = "scenario\tent_estimate\tL_d\tent_fL\trho\tlog_rho\tmargin\tverdict\n";

inline std::string tabular_row(const VerdictReport& r) {
    using detail::fixed6;
    std::string out = r.scenario + "\t" + fixed6(r.ent_estimate) + "\t" + std::to_string(r.L_d) + "\t" + fixed6(r.ent_fL) + "\t";
    if (r.map_found) out += fixed6(r.rho) + "\t" + fixed6(r.log_rho) + "\t" + fixed6(r.margin);
    else out += "NA\tNA\tNA";
    return out + "\t" + to_string(r.verdict) + "\n";
}

/// Structured: one JSON object, two-space indent, trailing newline.
/// Tabular: header plus one tab-separated row.
inline std::string emit_report(const VerdictReport& r, ReportFormat format) {
    if (format == ReportFormat::Structured) return report_json(r).dump(2) + "\n";
    return std::string(kTabularHeader) + tabular_row(r);
}

} // namespace cechent
