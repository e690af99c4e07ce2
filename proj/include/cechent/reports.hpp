#pragma once

#include <string>
#include <vector>

#include "fiber.hpp"
#include "verdict.hpp"

namespace cechent {

namespace detail {

inline Json simplex_list(const NerveComplex& k, const std::vector<Simplex>& s, std::size_t limit = 8) {
    Json out = Json::array();
    for (std::size_t i = 0; i < s.size() && i < limit; ++i) out.push_back(k.simplex_label(s[i]));
    return out;
}

inline Json complex_json(const NerveComplex& k) {
    Json counts = Json::array();
    for (int p = 0; p <= k.top_dimension(); ++p) counts.push_back(k.count(p));
    const ChainComplex c = k.chain_complex();
    Json h = Json::array(), co = Json::array();
    for (int p = 0; p <= c.top_dimension(); ++p) {
        h.push_back(group_json(p, homology(c, p)));
        co.push_back(group_json(p, cohomology(c, p)));
    }
    return Json{{"vertices", k.vertex_count()}, {"top_dimension", k.top_dimension()}, {"simplices", counts}, {"homology", h}, {"cohomology", co}};
}

inline Json matrix_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(static_cast<long long>(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline void require_model(const Scenario& s, const char* what) {
    if (!s.model || s.covers.empty()) throw ValidationError(std::string(what) + ": scenario needs a model and at least one cover");
}

} // namespace detail

/// Nerve sizes, homology and cohomology of every cover and raw complex.
inline Json homology_report(const Scenario& s) {
    Json j;
    j["scenario"] = s.name;
    Json covers = Json::array();
    for (const auto& [name, cover] : s.covers) {
        Json c = Json{{"cover", name}, {"elements", cover.size()}};
        detail::merge_into(c, detail::complex_json(build_nerve(cover)));
        covers.push_back(c);
    }
    j["covers"] = covers;
    Json complexes = Json::array();
    for (const auto& [name, k] : s.complexes) {
        Json c = Json{{"complex", name}};
        detail::merge_into(c, detail::complex_json(k));
        complexes.push_back(c);
    }
    j["complexes"] = complexes;
    return j;
}

inline Json entropy_report(const Scenario& s) {
    detail::require_model(s, "entropy");
    const AnalysisOptions& opt = s.analysis;
    Json j;
    j["scenario"] = s.name;
    j["n_max"] = opt.n_max;
    Json covers = Json::array();
    double sup = 0.0, sup_fl = 0.0;
    for (const auto& [name, cover] : s.covers) {
        FiberEntropyReport fe = fiber_entropy(*s.model, cover, opt.n_max, opt.exact_limit, opt.join_cap);
        const std::size_t ld = detail::directional_ld(fe.expansion, opt.ld_direction);
        const double ent_fl = fe.ent_f_alpha + std::log(static_cast<double>(ld));
        SubcoverResult n1 = minimal_subcover(cover, opt.exact_limit);
        Json c = Json{{"cover", name}, {"N", n1.size}, {"H", std::log(static_cast<double>(n1.size))}, {"subcover", n1.chosen},
                      {"method", to_string(n1.method)}};
        detail::merge_into(c, detail::entropy_json(fe.sequence));
        c["L_d"] = ld;
        c["ent_fL"] = ent_fl + 0.0;
        Json per = Json::array();
        for (const auto& e : fe.expansion.elements)
            per.push_back(Json{{"element", e.name}, {"backward", e.backward}, {"forward", e.forward}, {"divisor", e.divisor}});
        c["expansion"] = per;
        covers.push_back(c);
        sup = std::max(sup, fe.ent_f_alpha);
        sup_fl = std::max(sup_fl, ent_fl);
    }
    j["covers"] = covers;
    j["ent"] = sup + 0.0;
    j["ent_fL"] = sup_fl + 0.0;
    return j;
}

inline Json spectral_report(const Scenario& s) {
    detail::require_model(s, "spectral");
    Json j;
    j["scenario"] = s.name;
    Json covers = Json::array();
    for (const auto& [name, cover] : s.covers) {
        InducedEndomorphism e = find_induced_endomorphism(*s.model, cover, s.analysis.max_refinements);
        Json c = Json{{"cover", name}, {"found", e.found}};
        if (!e.found) {
            c["note"] = e.note;
            covers.push_back(c);
            continue;
        }
        c["method"] = e.method;
        c["refinements"] = e.refinements;
        c["refinement_iso"] = e.refinement_iso;
        Json degrees = Json::array();
        for (const auto& d : e.homology.degrees) {
            Json tors = Json::array();
            for (const auto& row : d.torsion_action) {
                Json r = Json::array();
                for (const auto& x : row) r.push_back(static_cast<long long>(x));
                tors.push_back(r);
            }
            degrees.push_back(Json{{"dim", d.p},
                                   {"free_map", detail::matrix_json(d.free_part)},
                                   {"char_poly", characteristic_polynomial(d.free_part).to_string()},
                                   {"torsion_action", tors}});
        }
        c["degrees"] = degrees;
        SpectralSummary sp = spectral_summary(e.homology.free_blocks(), s.analysis.eigen_tolerance);
        c["char_poly"] = sp.char_poly.to_string();
        c["eigen_moduli"] = sp.eigen_moduli;
        c["rho"] = sp.rho;
        c["log_rho"] = detail::number_or_null(sp.log_rho);
        c["error_bound"] = sp.error_bound;
        c["cauchy_bound"] = sp.cauchy_bound;
        c["certified"] = sp.certified;
        covers.push_back(c);
    }
    j["covers"] = covers;
    return j;
}

inline Json fiber_report(const Scenario& s) {
    detail::require_model(s, "fiber");
    const Model& m = *s.model;
    const int n = s.analysis.window;
    Json j;
    j["scenario"] = s.name;
    j["window"] = n;
    Json covers = Json::array();
    for (const auto& [name, cover] : s.covers) {
        const NerveComplex k = build_nerve(cover);
        const FiberNerve fn = build_fiber_nerve(cover, m, n);
        const EmbeddingReport emb = embed_cech_chains(k, fn);
        const FiberAxiomReport ax = fiber_axiom_audit(cover, m, n);
        Json c = Json{{"cover", name}};
        c["fiber_nerve"] = detail::complex_json(fn.complex);
        c["embedding"] = Json{{"nerve_in_fiber", emb.nerve_in_fiber()},
                              {"fiber_in_nerve", emb.fiber_in_nerve()},
                              {"nerve_only", detail::simplex_list(k, emb.nerve_only)},
                              {"fiber_only", detail::simplex_list(k, emb.fiber_only)}};
        Json mism = Json::array();
        for (const auto& [a, b] : ax.mismatches) mism.push_back(cover[a].name + "," + cover[b].name);
        c["axiom"] = Json{{"pairs", ax.pairs_checked}, {"holds", ax.holds()}, {"mismatches", mism}};
        const std::size_t ld = expansion_multiplicity(m, cover).L_d;
        EigenchainWitness w = eigenchain_analysis(m, cover, 0, static_cast<long long>(ld));
        c["eigenchain"] = Json{{"element", cover[0].name},
                               {"eigenvalue", w.eigenvalue},
                               {"status", to_string(w.status)},
                               {"available_branches", w.available_branches},
                               {"split", w.split ? Json::array({w.split->first, w.split->second}) : Json(nullptr)}};
        covers.push_back(c);
    }
    j["covers"] = covers;
    return j;
}

/// Duality, purity, nerve/fiber-nerve inclusion at every window up to the
/// configured one, eigen-sup chain, and carrier independence.
inline Json audit_report(const Scenario& s) {
    Json j;
    j["scenario"] = s.name;
    auto complex_audit = [](const NerveComplex& k) {
        Json c;
        const DualityReport d = duality_audit(k);
        Json rows = Json::array();
        for (const auto& row : d.rows)
            rows.push_back(Json{{"p", row.p}, {"homology", row.homology.to_string()}, {"cohomology", row.cohomology.to_string()}, {"holds", row.holds}});
        c["duality"] = Json{{"n", d.n}, {"holds", d.holds()}, {"rows", rows}};
        const PurityReport pr = purity_audit(k);
        c["purity"] = Json{{"top_dimension", pr.top_dimension}, {"holds", pr.holds()}, {"not_faces_of_top", detail::simplex_list(k, pr.not_faces_of_top)}};
        return c;
    };
    Json covers = Json::array();
    for (const auto& [name, cover] : s.covers) {
        const NerveComplex k = build_nerve(cover);
        Json c = Json{{"cover", name}};
        detail::merge_into(c, complex_audit(k));
        Json windows = Json::array();
        for (int n = 0; n <= s.analysis.window; ++n) {
            const EmbeddingReport e = embed_cech_chains(k, build_fiber_nerve(cover, *s.model, n));
            windows.push_back(Json{{"window", n}, {"nerve_in_fiber", e.nerve_in_fiber()}, {"fiber_in_nerve", e.fiber_in_nerve()},
                                   {"lost", e.nerve_only.size()}});
        }
        c["fiber_inclusion"] = windows;
        InducedEndomorphism e = find_induced_endomorphism(*s.model, cover, s.analysis.max_refinements);
        if (e.found) {
            const EigenSupReport l = eigen_sup_chain(e.self_map, e.complex->chain_complex());
            c["eigen_sup"] = Json{{"supH", l.sup_h}, {"supZ", l.sup_z}, {"supC", l.sup_c}, {"chain_holds", l.chain_holds()},
                                {"divisibility", l.divisibility_holds}};
        } else {
            c["eigen_sup"] = nullptr;
        }
        // two carrier choices on the cover itself, when both exist
        try {
            const ChainComplex cc = k.chain_complex();
            HomologyMap first = induced_homology_map(induced_chain_map(carrier_assignment(*s.model, cover, CarrierChoice::First), k, k), cc, cc);
            HomologyMap last = induced_homology_map(induced_chain_map(carrier_assignment(*s.model, cover, CarrierChoice::Last), k, k), cc, cc);
            bool same = true;
            for (std::size_t p = 0; p < first.degrees.size(); ++p)
                same = same && first.degrees[p].free_part == last.degrees[p].free_part;
            c["carrier_independence"] = Json{{"checked", true}, {"same_homology_map", same}};
        } catch (const Error& err) {
            c["carrier_independence"] = Json{{"checked", false}, {"note", err.what()}};
        }
        covers.push_back(c);
    }
    j["covers"] = covers;
    Json complexes = Json::array();
    for (const auto& [name, k] : s.complexes) {
        Json c = Json{{"complex", name}};
        detail::merge_into(c, complex_audit(k));
        complexes.push_back(c);
    }
    j["complexes"] = complexes;
    return j;
}

/// Tab-separated "path<TAB>value" lines of every leaf, in document order.
inline std::string flatten_tabular(const Json& j) {
    std::string out = "path\tvalue\n";
    auto walk = [&](auto&& self, const Json& v, const std::string& path) -> void {
        if (v.is_object()) {
            for (const auto& [k, x] : v.items()) self(self, x, path.empty() ? k : path + "." + k);
        } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
            for (std::size_t i = 0; i < v.size(); ++i) self(self, v[i], path + "[" + std::to_string(i) + "]");
        } else {
            out += path + "\t" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        }
    };
    walk(walk, j, "");
    return out;
}

} // namespace cechent
