#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "model.hpp"

namespace cechent {

/// Strictly ascending vertex indices; ascending order fixes orientation.
using Simplex = std::vector<std::size_t>;

inline int simplex_dimension(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

/// Boundary maps of a finite free chain complex. boundaries[p] is
/// d_p : C_p -> C_{p-1}; boundaries[0] has zero rows and boundaries[top+1]
/// has zero columns, so every degree has both neighbours.
struct ChainComplex {
    std::vector<IntMatrix> boundaries;

    int top_dimension() const { return static_cast<int>(boundaries.size()) - 2; }
    std::size_t rank(int p) const { return boundaries.at(static_cast<std::size_t>(p)).cols(); }
    const IntMatrix& boundary(int p) const { return boundaries.at(static_cast<std::size_t>(p)); }
};

/// Face-closed simplicial complex on named vertices. Built either as the
/// nerve of a cover or from a raw list of maximal simplices.
class NerveComplex {
public:
    /// Closes `maximal` under faces. Vertex indices refer to `vertex_names`.
    static NerveComplex from_maximal_simplices(std::vector<std::string> vertex_names, const std::vector<Simplex>& maximal,
                                               std::size_t simplex_cap = 1u << 20) {
        NerveComplex k;
        k.vertex_names_ = std::move(vertex_names);
        std::set<Simplex> all;
        for (Simplex s : maximal) {
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw ValidationError("complex: repeated vertex in simplex");
            for (auto v : s)
                if (v >= k.vertex_names_.size()) throw ValidationError("complex: vertex index out of range");
            if (s.empty()) continue;
            if (s.size() > 24) throw ComplexityError("complex: simplex with more than 24 vertices");
            const std::size_t n = s.size();
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
                Simplex face;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (std::uint64_t{1} << i)) face.push_back(s[i]);
                all.insert(std::move(face));
                if (all.size() > simplex_cap) throw ComplexityError("complex: more than " + std::to_string(simplex_cap) + " simplices");
            }
        }
        std::size_t top = 0;
        for (const auto& s : all) top = std::max(top, s.size());
        k.simplices_.assign(top, {});
        for (const auto& s : all) k.simplices_[s.size() - 1].push_back(s);
        for (auto& layer : k.simplices_) std::sort(layer.begin(), layer.end());
        k.build_index();
        return k;
    }

    /// Complex from a family already closed under faces; throws if a face
    /// is missing.
    static NerveComplex from_closed_family(std::vector<std::string> vertex_names, const std::set<Simplex>& family) {
        NerveComplex k;
        k.vertex_names_ = std::move(vertex_names);
        std::size_t top = 0;
        for (const auto& s : family) top = std::max(top, s.size());
        k.simplices_.assign(top, {});
        for (const auto& s : family) {
            if (s.empty()) continue;
            for (std::size_t i = 0; s.size() > 1 && i < s.size(); ++i) {
                Simplex face(s);
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                if (!family.count(face)) throw ValidationError("complex: family is not closed under faces");
            }
            k.simplices_[s.size() - 1].push_back(s);
        }
        for (auto& layer : k.simplices_) std::sort(layer.begin(), layer.end());
        k.build_index();
        return k;
    }

    /// Raw complex with vertices named by the ids appearing in `maximal`.
    static NerveComplex from_named_simplices(const std::vector<std::vector<std::string>>& maximal) {
        std::vector<std::string> names;
        std::map<std::string, std::size_t> idx;
        std::vector<Simplex> simplices;
        for (const auto& s : maximal) {
            Simplex out;
            for (const auto& v : s) {
                auto [it, inserted] = idx.emplace(v, names.size());
                if (inserted) names.push_back(v);
                out.push_back(it->second);
            }
            simplices.push_back(std::move(out));
        }
        return from_maximal_simplices(std::move(names), simplices);
    }

    const std::vector<std::string>& vertex_names() const noexcept { return vertex_names_; }
    std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
    /// -1 for the empty complex.
    int top_dimension() const noexcept { return static_cast<int>(simplices_.size()) - 1; }
    const std::vector<Simplex>& simplices(int p) const {
        static const std::vector<Simplex> none;
        if (p < 0 || p > top_dimension()) return none;
        return simplices_[static_cast<std::size_t>(p)];
    }
    std::size_t count(int p) const { return simplices(p).size(); }
    std::size_t total_simplices() const {
        std::size_t n = 0;
        for (const auto& l : simplices_) n += l.size();
        return n;
    }
    bool contains(const Simplex& s) const {
        if (s.empty() || static_cast<int>(s.size()) - 1 > top_dimension()) return false;
        return index_[s.size() - 1].count(s) > 0;
    }
    std::optional<std::size_t> index_of(const Simplex& s) const {
        if (s.empty() || static_cast<int>(s.size()) - 1 > top_dimension()) return std::nullopt;
        const auto& m = index_[s.size() - 1];
        auto it = m.find(s);
        if (it == m.end()) return std::nullopt;
        return it->second;
    }
    std::set<Simplex> simplex_set() const {
        std::set<Simplex> out;
        for (const auto& l : simplices_) out.insert(l.begin(), l.end());
        return out;
    }
    const std::optional<Cover>& cover() const noexcept { return cover_; }

    /// d_p with entry (-1)^i at the face omitting the i-th vertex.
    /// Accepts 0 <= p <= top_dimension() + 1.
    IntMatrix boundary(int p) const {
        if (p < 0 || p > top_dimension() + 1) throw DimensionError("boundary: dimension " + std::to_string(p) + " out of range");
        const auto& cols = simplices(p);
        if (p == 0) return IntMatrix(0, cols.size());
        const auto& rows = simplices(p - 1);
        IntMatrix d(rows.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const Simplex& s = cols[j];
            for (std::size_t i = 0; i < s.size(); ++i) {
                Simplex face;
                face.reserve(s.size() - 1);
                for (std::size_t t = 0; t < s.size(); ++t)
                    if (t != i) face.push_back(s[t]);
                d(*index_of(face), j) = (i % 2 == 0) ? 1 : -1;
            }
        }
        return d;
    }

    ChainComplex chain_complex() const {
        ChainComplex c;
        for (int p = 0; p <= top_dimension() + 1; ++p) c.boundaries.push_back(boundary(p));
        return c;
    }

    std::string simplex_label(const Simplex& s) const {
        std::string out = "{";
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + vertex_names_.at(s[i]);
        return out + "}";
    }

private:
    friend NerveComplex build_nerve(const Cover&, std::size_t);

    void build_index() {
        index_.assign(simplices_.size(), {});
        for (std::size_t p = 0; p < simplices_.size(); ++p)
            for (std::size_t i = 0; i < simplices_[p].size(); ++i) index_[p].emplace(simplices_[p][i], i);
    }

    std::vector<std::string> vertex_names_;
    std::vector<std::vector<Simplex>> simplices_;
    std::vector<std::map<Simplex, std::size_t>> index_;
    std::optional<Cover> cover_;
};

/// Common intersection of the named elements.
inline PointSet common_intersection(const Cover& a, const Simplex& s) {
    PointSet acc = a.base()->full_set();
    for (auto v : s) acc &= a[v].points;
    return acc;
}

/// Simplices are the element sets with nonempty common intersection.
/// Each point contributes the full simplex on the elements containing it.
inline NerveComplex build_nerve(const Cover& a, std::size_t simplex_cap = 1u << 20) {
    if (!a.is_cover()) throw NotACoverError("nerve: family does not cover the model");
    std::set<Simplex> maximal;
    const std::size_t npts = a.base()->size();
    for (std::size_t p = 0; p < npts; ++p) {
        Simplex s;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].points.test(p)) s.push_back(i);
        maximal.insert(std::move(s));
    }
    std::vector<std::string> names;
    for (const auto& e : a.elements()) names.push_back(e.name);
    NerveComplex k = NerveComplex::from_maximal_simplices(std::move(names), {maximal.begin(), maximal.end()}, simplex_cap);
    k.cover_ = a;
    return k;
}

/// Interpretation of the boundary-operator dimension of a cover: the top
/// simplex dimension of its nerve.
inline int partial_dimension(const NerveComplex& k) { return k.top_dimension(); }

struct ComplementDescriptor {
    std::vector<PointSet> complements;
    PointSet complement_union;
    /// complement_union != X, equivalently the elements meet.
    bool represents_simplex = false;
};

/// Complement form of a vertex set: U^0 ∪ ... ∪ U^p, which misses some
/// point exactly when U_0 ∩ ... ∩ U_p is nonempty.
inline ComplementDescriptor complement_representation(const Simplex& s, const Cover& a) {
    ComplementDescriptor d;
    d.complement_union = a.base()->empty_set();
    for (auto v : s) {
        d.complements.push_back(~a[v].points);
        d.complement_union |= d.complements.back();
    }
    d.represents_simplex = !d.complement_union.all();
    return d;
}

struct PurityReport {
    int top_dimension = -1;
    std::vector<Simplex> faces_of_top;
    std::vector<Simplex> not_faces_of_top;
    bool holds() const { return not_faces_of_top.empty(); }
};

/// Checks that every lower-dimensional simplex is a face of some
/// top-dimensional simplex.
inline PurityReport purity_audit(const NerveComplex& k) {
    PurityReport r;
    r.top_dimension = k.top_dimension();
    const auto& tops = k.simplices(k.top_dimension());
    for (int p = 0; p < k.top_dimension(); ++p)
        for (const auto& s : k.simplices(p)) {
            bool inside = std::any_of(tops.begin(), tops.end(),
                                      [&](const Simplex& t) { return std::includes(t.begin(), t.end(), s.begin(), s.end()); });
            (inside ? r.faces_of_top : r.not_faces_of_top).push_back(s);
        }
    return r;
}

} // namespace cechent
