#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "homology.hpp"
#include "model.hpp"
#include "nerve.hpp"
#include "polynomial.hpp"
#include "smith.hpp"

namespace cechent {

enum class AssignmentKind { Dynamics, Refinement };

/// Vertex map between cover nerves.
struct SimplicialAssignment {
    std::vector<std::size_t> vertex_map;
    AssignmentKind kind = AssignmentKind::Dynamics;
};

enum class CarrierChoice { First, Last };

/// For each source element U, an element of `dst` containing f(U).
/// Throws NoCarrierError naming U when none exists; the usual remedy is
/// to refine the source by joining it with its preimage cover.
inline SimplicialAssignment carrier_assignment(const Model& m, const Cover& src, const Cover& dst,
                                               CarrierChoice choice = CarrierChoice::First) {
    SimplicialAssignment a;
    a.kind = AssignmentKind::Dynamics;
    for (const auto& u : src.elements()) {
        const PointSet img = m.image(u.points);
        std::optional<std::size_t> hit;
        for (std::size_t j = 0; j < dst.size(); ++j)
            if (img.is_subset_of(dst[j].points)) {
                hit = j;
                if (choice == CarrierChoice::First) break;
            }
        if (!hit)
            throw NoCarrierError(u.name, "carrier: image of '" + u.name +
                                             "' lies in no cover element; refine the cover with its preimage and retry");
        a.vertex_map.push_back(*hit);
    }
    return a;
}

inline SimplicialAssignment carrier_assignment(const Model& m, const Cover& a, CarrierChoice choice = CarrierChoice::First) {
    return carrier_assignment(m, a, a, choice);
}

/// Each element of `fine` sent to the first element of `coarse` holding it.
inline SimplicialAssignment refinement_assignment(const Cover& fine, const Cover& coarse) {
    require_same_base(fine, coarse);
    SimplicialAssignment a;
    a.kind = AssignmentKind::Refinement;
    for (const auto& u : fine.elements()) {
        std::optional<std::size_t> hit;
        for (std::size_t j = 0; j < coarse.size(); ++j)
            if (u.points.is_subset_of(coarse[j].points)) {
                hit = j;
                break;
            }
        if (!hit) throw AssignmentError("refinement: element '" + u.name + "' lies in no coarser element");
        a.vertex_map.push_back(*hit);
    }
    return a;
}

/// components[p] : C_p(src) -> C_p(dst).
struct ChainMap {
    std::vector<IntMatrix> components;

    int top_dimension() const { return static_cast<int>(components.size()) - 1; }
    const IntMatrix& operator[](int p) const { return components.at(static_cast<std::size_t>(p)); }
};

/// d_dst M_p = M_{p-1} d_src for every p, exactly.
inline bool commutes_with_boundary(const ChainMap& c, const ChainComplex& src, const ChainComplex& dst) {
    for (int p = 1; p <= c.top_dimension(); ++p) {
        IntMatrix lhs = (p <= dst.top_dimension() + 1 ? dst.boundary(p) : IntMatrix(c[p - 1].rows(), 0)) * c[p];
        IntMatrix rhs = c[p - 1] * src.boundary(p);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

/// (a ∘ b)_p = a_p b_p
inline ChainMap compose(const ChainMap& a, const ChainMap& b) {
    ChainMap out;
    const int top = std::min(a.top_dimension(), b.top_dimension());
    for (int p = 0; p <= top; ++p) out.components.push_back(a[p] * b[p]);
    return out;
}

inline ChainMap identity_chain_map(const ChainComplex& c) {
    ChainMap out;
    for (int p = 0; p <= c.top_dimension(); ++p) out.components.push_back(IntMatrix::identity(c.rank(p)));
    return out;
}

/// Simplicial chain map of a vertex assignment: degenerate images go to
/// zero, others to the sorted image simplex with the permutation sign.
inline ChainMap induced_chain_map(const SimplicialAssignment& s, const NerveComplex& src, const NerveComplex& dst) {
    if (s.vertex_map.size() != src.vertex_count()) throw AssignmentError("chain map: assignment size does not match source");
    ChainMap c;
    for (int p = 0; p <= src.top_dimension(); ++p) {
        IntMatrix m(dst.count(p), src.count(p));
        const auto& cols = src.simplices(p);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            Simplex img;
            for (auto v : cols[j]) img.push_back(s.vertex_map[v]);
            // sign of the sorting permutation, by counting inversions
            int inversions = 0;
            bool degenerate = false;
            for (std::size_t a = 0; a < img.size(); ++a)
                for (std::size_t b = a + 1; b < img.size(); ++b) {
                    if (img[a] == img[b]) degenerate = true;
                    if (img[a] > img[b]) ++inversions;
                }
            if (degenerate) continue;
            std::sort(img.begin(), img.end());
            auto row = dst.index_of(img);
            if (!row) throw AssignmentError("chain map: image " + dst.simplex_label(img) + " of " + src.simplex_label(cols[j]) +
                                            " is not a simplex of the target");
            m(*row, j) = (inversions % 2 == 0) ? 1 : -1;
        }
        c.components.push_back(std::move(m));
    }
    if (!commutes_with_boundary(c, src.chain_complex(), dst.chain_complex()))
        throw AssignmentError("chain map: boundary commutation failed");
    return c;
}

/// Induced map in one degree: on the free quotient, plus the action on
/// torsion generators reduced modulo each target divisor.
struct DegreeMap {
    int p = 0;
    IntMatrix free_part;
    /// torsion[i][j]: coefficient of target torsion generator i in the
    /// image of source torsion generator j, mod target divisor i.
    std::vector<std::vector<Integer>> torsion_action;
    std::vector<Integer> target_divisors;
};

struct HomologyMap {
    std::vector<DegreeMap> degrees;

    std::vector<IntMatrix> free_blocks() const {
        std::vector<IntMatrix> out;
        for (const auto& d : degrees) out.push_back(d.free_part);
        return out;
    }
};

inline DegreeMap induced_degree_map(const IntMatrix& chain, const DegreeHomology& src, const DegreeHomology& dst, int p) {
    DegreeMap d;
    d.p = p;
    const std::size_t s_rank = dst.boundary_rank();
    IntMatrix images = chain * src.free_generators();
    IntMatrix coords = dst.adapted_coords(images);
    d.free_part = coords.block(s_rank, coords.rows(), 0, coords.cols());

    const auto src_t = src.torsion_indices();
    const auto dst_t = dst.torsion_indices();
    if (!src_t.empty() && !dst_t.empty()) {
        IntMatrix gens = src.generators();
        IntMatrix tors(gens.rows(), src_t.size());
        for (std::size_t j = 0; j < src_t.size(); ++j)
            for (std::size_t r = 0; r < gens.rows(); ++r) tors(r, j) = gens(r, src_t[j]);
        IntMatrix tc = dst.adapted_coords(chain * tors);
        for (auto i : dst_t) {
            const Integer& mod = dst.divisor(i);
            std::vector<Integer> row;
            for (std::size_t j = 0; j < src_t.size(); ++j) {
                Integer v = tc(i, j) % mod;
                if (v < 0) v += mod;
                row.push_back(v);
            }
            d.torsion_action.push_back(std::move(row));
            d.target_divisors.push_back(mod);
        }
    }
    return d;
}

/// Map on H_p for p = 0 .. top of the source. Degrees above the target's
/// top map into the zero group.
inline HomologyMap induced_homology_map(const ChainMap& c, const ChainComplex& src, const ChainComplex& dst) {
    HomologyMap h;
    for (int p = 0; p <= src.top_dimension(); ++p) {
        DegreeHomology hs = degree_homology(src, p);
        if (p > dst.top_dimension()) {
            h.degrees.push_back(DegreeMap{p, IntMatrix(0, hs.group().rank), {}, {}});
            continue;
        }
        DegreeHomology ht = degree_homology(dst, p);
        h.degrees.push_back(induced_degree_map(c[p], hs, ht, p));
    }
    return h;
}

/// Spectral radii of a self chain map on chains, cycles, and homology.
struct EigenSupReport {
    double sup_h = 0.0;
    double sup_z = 0.0;
    double sup_c = 0.0;
    SpectralSummary chains;
    SpectralSummary cycles;
    SpectralSummary homology;
    bool cycles_invariant = true;
    /// charpoly(H_p) | charpoly(Z_p) | charpoly(C_p) for every p.
    bool divisibility_holds = true;
    bool chain_holds(double tol = 1e-9) const { return sup_h <= sup_z + tol && sup_z <= sup_c + tol; }
};

inline EigenSupReport eigen_sup_chain(const ChainMap& c, const ChainComplex& k) {
    EigenSupReport r;
    std::vector<IntMatrix> cb, zb, hb;
    for (int p = 0; p <= k.top_dimension(); ++p) {
        const IntMatrix& m = c[p];
        if (!m.square() || m.rows() != k.rank(p)) throw AssignmentError("eigen sup: chain map is not a self map");
        DegreeHomology dh = degree_homology(k, p);
        IntMatrix kb = dh.kernel_basis();
        IntMatrix img = m * kb;
        if (!dh.are_cycles(img)) {
            r.cycles_invariant = false;
            continue;
        }
        IntMatrix z = dh.kernel_coords(img);
        IntMatrix h = induced_degree_map(m, dh, dh, p).free_part;
        Polynomial pc = characteristic_polynomial(m), pz = characteristic_polynomial(z), ph = characteristic_polynomial(h);
        if (!ph.divides(pz) || !pz.divides(pc)) r.divisibility_holds = false;
        cb.push_back(m);
        zb.push_back(std::move(z));
        hb.push_back(std::move(h));
    }
    r.chains = spectral_summary(cb);
    r.cycles = spectral_summary(zb);
    r.homology = spectral_summary(hb);
    r.sup_c = r.chains.rho;
    r.sup_z = r.cycles.rho;
    r.sup_h = r.homology.rho;
    return r;
}

/// Chain map s : coarse -> fine with R s = id, where R : fine -> coarse.
/// Solved as one integer linear system; nullopt when no integral section
/// exists in degrees 0..top(coarse).
inline std::optional<ChainMap> chain_section(const ChainMap& r, const ChainComplex& fine, const ChainComplex& coarse) {
    const int top = coarse.top_dimension();
    if (r.top_dimension() < top) return std::nullopt;
    std::vector<std::size_t> offset;
    std::size_t unknowns = 0;
    for (int p = 0; p <= top; ++p) {
        offset.push_back(unknowns);
        unknowns += (p <= fine.top_dimension() ? fine.rank(p) : 0) * coarse.rank(p);
    }
    auto var = [&](int p, std::size_t i, std::size_t j) { return offset[static_cast<std::size_t>(p)] + i * coarse.rank(p) + j; };
    auto fine_rank = [&](int p) -> std::size_t { return p <= fine.top_dimension() ? fine.rank(p) : 0; };

    std::vector<std::vector<std::pair<std::size_t, Integer>>> rows;
    std::vector<Integer> rhs;
    for (int p = 0; p <= top; ++p) {
        const std::size_t nc = coarse.rank(p), nf = fine_rank(p);
        for (std::size_t i = 0; i < nc; ++i)
            for (std::size_t j = 0; j < nc; ++j) {
                std::vector<std::pair<std::size_t, Integer>> row;
                for (std::size_t k = 0; k < nf; ++k)
                    if (r[p](i, k) != 0) row.emplace_back(var(p, k, j), r[p](i, k));
                rows.push_back(std::move(row));
                rhs.emplace_back(i == j ? 1 : 0);
            }
        if (p == 0) continue;
        const IntMatrix df = p <= fine.top_dimension() + 1 ? fine.boundary(p) : IntMatrix(fine_rank(p - 1), 0);
        const IntMatrix& dc = coarse.boundary(p);
        for (std::size_t i = 0; i < fine_rank(p - 1); ++i)
            for (std::size_t j = 0; j < nc; ++j) {
                std::vector<std::pair<std::size_t, Integer>> row;
                for (std::size_t k = 0; k < nf; ++k)
                    if (df(i, k) != 0) row.emplace_back(var(p, k, j), df(i, k));
                for (std::size_t k = 0; k < coarse.rank(p - 1); ++k)
                    if (dc(k, j) != 0) row.emplace_back(var(p - 1, i, k), -dc(k, j));
                rows.push_back(std::move(row));
                rhs.emplace_back(0);
            }
    }
    IntMatrix a(rows.size(), unknowns), b(rows.size(), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [col, v] : rows[i]) a(i, col) += v;
        b(i, 0) = rhs[i];
    }
    auto x = solve_integer(a, b);
    if (!x) return std::nullopt;
    ChainMap s;
    for (int p = 0; p <= top; ++p) {
        IntMatrix m(fine_rank(p), coarse.rank(p));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = (*x)(var(p, i, j), 0);
        s.components.push_back(std::move(m));
    }
    return s;
}

inline bool is_unimodular(const IntMatrix& m) { return m.square() && abs(determinant(m)) == 1; }

/// Self map of one nerve that realises the dynamics on homology.
struct InducedEndomorphism {
    bool found = false;
    std::string method;
    int refinements = 0;
    std::optional<Cover> cover;
    std::optional<NerveComplex> complex;
    ChainMap self_map;
    HomologyMap homology;
    /// For sectioned maps: whether the refinement map is an isomorphism
    /// on free homology (then the result is conjugate to f_* on the
    /// coarse cover, independent of the chosen section).
    bool refinement_iso = true;
    std::string note;
};

/// Tries a self carrier on the cover and on up to `max_refinements`
/// successive joins with preimages. At refinement level j >= 1 it also
/// tries a carrier from level j into level j-1, pulled back to a self
/// map of level j through an integral chain section of the refinement.
inline InducedEndomorphism find_induced_endomorphism(const Model& m, const Cover& alpha, int max_refinements = 3) {
    InducedEndomorphism out;
    std::vector<Cover> levels{alpha};
    for (int j = 0; j <= max_refinements; ++j) {
        if (j > 0) levels.push_back(join(alpha, preimage_cover(m, levels.back())));
        const Cover& cur = levels.back();
        if (!cur.is_cover()) {
            out.note = "refinement level " + std::to_string(j) + " is not a cover";
            return out;
        }
        NerveComplex k = build_nerve(cur);
        const ChainComplex cc = k.chain_complex();
        try {
            SimplicialAssignment a = carrier_assignment(m, cur);
            out.self_map = induced_chain_map(a, k, k);
            out.homology = induced_homology_map(out.self_map, cc, cc);
            out.found = true;
            out.method = "self-carrier";
            out.refinements = j;
            out.cover = cur;
            out.complex = std::move(k);
            return out;
        } catch (const NoCarrierError& e) {
            out.note = e.what();
        } catch (const AssignmentError& e) {
            out.note = e.what();
        }
        if (j == 0) continue;
        const Cover& prev = levels[levels.size() - 2];
        try {
            NerveComplex kp = build_nerve(prev);
            const ChainComplex pc = kp.chain_complex();
            ChainMap g = induced_chain_map(carrier_assignment(m, cur, prev), k, kp);
            ChainMap r = induced_chain_map(refinement_assignment(cur, prev), k, kp);
            auto s = chain_section(r, cc, pc);
            if (!s) {
                out.note = "no integral chain section at refinement level " + std::to_string(j);
                continue;
            }
            // s ∘ g : C(cur) -> C(prev) -> C(cur)
            ChainMap h;
            for (int p = 0; p <= k.top_dimension(); ++p)
                h.components.push_back(p <= s->top_dimension() && p <= g.top_dimension() ? (*s)[p] * g[p]
                                                                                          : IntMatrix(cc.rank(p), cc.rank(p)));
            if (!commutes_with_boundary(h, cc, cc)) {
                out.note = "sectioned map failed boundary commutation";
                continue;
            }
            HomologyMap rh = induced_homology_map(r, cc, pc);
            out.refinement_iso = true;
            for (const auto& d : rh.degrees)
                if (!is_unimodular(d.free_part) && !(d.free_part.rows() == 0 && d.free_part.cols() == 0)) out.refinement_iso = false;
            out.self_map = std::move(h);
            out.homology = induced_homology_map(out.self_map, cc, cc);
            out.found = true;
            out.method = "refined carrier with chain section";
            out.refinements = j;
            out.cover = cur;
            out.complex = std::move(k);
            return out;
        } catch (const NoCarrierError& e) {
            out.note = e.what();
        } catch (const AssignmentError& e) {
            out.note = e.what();
        }
    }
    return out;
}

/// One level of a refinement tower.
struct TowerLevel {
    HomologyGroup group;
    /// Free-part matrix of H_p(level) -> H_p(previous level); empty for
    /// the first level.
    IntMatrix connecting;
    bool connecting_iso = false;
};

struct TowerReport {
    int p = 0;
    std::vector<TowerLevel> levels;
    /// Last two levels have equal groups and an invertible connecting map.
    bool stabilized = false;
    HomologyGroup limit;
    /// Cochain direction: transposes of the connecting maps.
    std::vector<IntMatrix> cohomology_connecting;
};

/// `covers` ordered coarse to fine; each must refine its predecessor.
inline TowerReport tower_limit(const std::vector<Cover>& covers, int p) {
    if (covers.empty()) throw ValidationError("tower: no covers");
    TowerReport rep;
    rep.p = p;
    std::optional<NerveComplex> prev;
    for (std::size_t i = 0; i < covers.size(); ++i) {
        if (i > 0 && !refines(covers[i - 1], covers[i]))
            throw ValidationError("tower: level " + std::to_string(i) + " does not refine level " + std::to_string(i - 1));
        NerveComplex k = build_nerve(covers[i]);
        const ChainComplex cc = k.chain_complex();
        TowerLevel lvl;
        lvl.group = p <= cc.top_dimension() ? homology(cc, p) : HomologyGroup{};
        if (prev) {
            const ChainComplex pc = prev->chain_complex();
            ChainMap r = induced_chain_map(refinement_assignment(covers[i], covers[i - 1]), k, *prev);
            if (p <= cc.top_dimension()) {
                HomologyMap hm = induced_homology_map(r, cc, pc);
                lvl.connecting = hm.degrees[static_cast<std::size_t>(p)].free_part;
            } else {
                lvl.connecting = IntMatrix(p <= pc.top_dimension() ? homology(pc, p).rank : 0, 0);
            }
            lvl.connecting_iso = lvl.connecting.square() && (lvl.connecting.rows() == 0 || is_unimodular(lvl.connecting));
            rep.cohomology_connecting.push_back(lvl.connecting.transpose());
        }
        rep.levels.push_back(std::move(lvl));
        prev = std::move(k);
    }
    const auto& last = rep.levels.back();
    if (rep.levels.size() == 1) {
        rep.stabilized = true;
    } else {
        const auto& before = rep.levels[rep.levels.size() - 2];
        rep.stabilized = last.group == before.group && last.connecting_iso;
    }
    rep.limit = last.group;
    return rep;
}

} // namespace cechent
