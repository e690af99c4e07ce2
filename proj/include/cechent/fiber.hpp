#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "homology.hpp"
#include "model.hpp"
#include "nerve.hpp"

namespace cechent {

inline constexpr int kDefaultFiberWindow = 3;

/// Windowed orbit of a set: slices f^i(U) for i = -window .. window,
/// forward by image, backward by preimage.
class OrbitFiber {
public:
    OrbitFiber(PointSet center, int window, std::vector<PointSet> slices)
        : center_(std::move(center)), window_(window), slices_(std::move(slices)) {}

    const PointSet& center() const noexcept { return center_; }
    int window() const noexcept { return window_; }
    const PointSet& slice(int i) const { return slices_.at(static_cast<std::size_t>(i + window_)); }
    const std::vector<PointSet>& slices() const noexcept { return slices_; }
    bool all_nonempty() const {
        for (const auto& s : slices_)
            if (s.none()) return false;
        return true;
    }
    friend bool operator==(const OrbitFiber& a, const OrbitFiber& b) { return a.window_ == b.window_ && a.slices_ == b.slices_; }

private:
    PointSet center_;
    int window_ = 0;
    std::vector<PointSet> slices_;
};

inline OrbitFiber orbit_fiber(const Model& m, const PointSet& u, int window) {
    if (u.none()) throw ValidationError("fiber: the empty set has no fiber");
    if (window < 0) throw ValidationError("fiber: window must be nonnegative");
    std::vector<PointSet> slices(static_cast<std::size_t>(2 * window + 1));
    const auto mid = static_cast<std::size_t>(window);
    slices[mid] = u;
    for (int i = 1; i <= window; ++i) {
        slices[mid + static_cast<std::size_t>(i)] = m.image(slices[mid + static_cast<std::size_t>(i - 1)]);
        slices[mid - static_cast<std::size_t>(i)] = m.preimage(slices[mid - static_cast<std::size_t>(i - 1)]);
    }
    return OrbitFiber(u, window, std::move(slices));
}

/// Slicewise intersection; nullopt when any slice of the window is empty.
inline std::optional<OrbitFiber> fiber_intersect(const OrbitFiber& a, const OrbitFiber& b) {
    if (a.window() != b.window()) throw ValidationError("fiber: windows differ");
    std::vector<PointSet> s;
    s.reserve(a.slices().size());
    for (std::size_t i = 0; i < a.slices().size(); ++i) {
        s.push_back(a.slices()[i] & b.slices()[i]);
        if (s.back().none()) return std::nullopt;
    }
    return OrbitFiber(a.center() & b.center(), a.window(), std::move(s));
}

struct FiberNerve {
    NerveComplex complex;
    int window = 0;
};

/// Simplices are element sets whose fibers meet in every slice of the
/// window. The condition is hereditary, so a depth-first extension over
/// ascending vertex indices enumerates exactly the face-closed family.
inline FiberNerve build_fiber_nerve(const Cover& a, const Model& m, int window, std::size_t simplex_cap = 1u << 20) {
    if (!a.is_cover()) throw NotACoverError("fiber nerve: family does not cover the model");
    std::vector<OrbitFiber> fibers;
    fibers.reserve(a.size());
    for (const auto& e : a.elements()) fibers.push_back(orbit_fiber(m, e.points, window));

    std::set<Simplex> family;
    Simplex current;
    auto extend = [&](auto&& self, const OrbitFiber& acc, std::size_t next) -> void {
        for (std::size_t v = next; v < fibers.size(); ++v) {
            auto meet = fiber_intersect(acc, fibers[v]);
            if (!meet) continue;
            current.push_back(v);
            family.insert(current);
            if (family.size() > simplex_cap) throw ComplexityError("fiber nerve: too many simplices");
            self(self, *meet, v + 1);
            current.pop_back();
        }
    };
    for (std::size_t v = 0; v < fibers.size(); ++v) {
        if (!fibers[v].all_nonempty()) continue;
        current = {v};
        family.insert(current);
        extend(extend, fibers[v], v + 1);
    }
    std::vector<std::string> names;
    for (const auto& e : a.elements()) names.push_back(e.name);
    return FiberNerve{NerveComplex::from_closed_family(std::move(names), family), window};
}

inline HomologyGroup fiber_homology(const FiberNerve& fn, int p) { return homology(fn.complex, p); }

/// Simplex-set comparison between the ordinary nerve and a fiber nerve
/// of the same cover, in both directions.
struct EmbeddingReport {
    std::vector<Simplex> nerve_only;  // ordinary simplices that are not fiber simplices
    std::vector<Simplex> fiber_only;  // fiber simplices that are not ordinary simplices
    bool nerve_in_fiber() const { return nerve_only.empty(); }
    bool fiber_in_nerve() const { return fiber_only.empty(); }
    bool equal() const { return nerve_only.empty() && fiber_only.empty(); }
};

inline EmbeddingReport embed_cech_chains(const NerveComplex& k, const FiberNerve& fn) {
    EmbeddingReport r;
    const auto a = k.simplex_set();
    const auto b = fn.complex.simplex_set();
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.nerve_only));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(r.fiber_only));
    return r;
}

/// Pairs (U, V) of cover elements whose slicewise fiber intersection
/// differs from the fiber of U ∩ V.
struct FiberAxiomReport {
    std::vector<std::pair<std::size_t, std::size_t>> mismatches;
    std::size_t pairs_checked = 0;
    bool holds() const { return mismatches.empty(); }
};

inline FiberAxiomReport fiber_axiom_audit(const Cover& a, const Model& m, int window) {
    FiberAxiomReport r;
    std::vector<OrbitFiber> fibers;
    for (const auto& e : a.elements()) fibers.push_back(orbit_fiber(m, e.points, window));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            ++r.pairs_checked;
            const PointSet w = a[i].points & a[j].points;
            std::vector<PointSet> meet;
            for (std::size_t s = 0; s < fibers[i].slices().size(); ++s) meet.push_back(fibers[i].slices()[s] & fibers[j].slices()[s]);
            bool same;
            if (w.none()) {
                same = std::any_of(meet.begin(), meet.end(), [](const PointSet& x) { return x.none(); });
            } else {
                same = orbit_fiber(m, w, window).slices() == meet;
            }
            if (!same) r.mismatches.emplace_back(i, j);
        }
    return r;
}

/// m = p + q with p != q, both positive; defined for m > 2.
inline std::pair<long long, long long> decompose_eigenvalue(long long m) {
    if (m <= 2) throw DomainError("decompose_eigenvalue: requires m > 2");
    return {1, m - 1};
}

enum class WitnessStatus { Certified, Refuted, Inconclusive };

inline const char* to_string(WitnessStatus s) {
    switch (s) {
    case WitnessStatus::Certified: return "certified";
    case WitnessStatus::Refuted: return "refuted";
    default: return "inconclusive";
    }
}

/// Branch certificate for an eigenvalue m at element U0: m pairwise
/// disjoint nonempty subsets of f^-1(f(U0)).
struct EigenchainWitness {
    long long eigenvalue = 0;
    std::size_t element = 0;
    /// Chain supporting the witness: the fiber vertex of U0.
    std::vector<std::pair<Simplex, Integer>> chain;
    PointSet target;                  // f^-1(f(U0))
    std::vector<PointSet> branches;
    /// For m > 2: the branches split into a first group of p and a second
    /// of q sub-relations of f restricted to U0.
    std::optional<std::pair<long long, long long>> split;
    std::size_t available_branches = 0;
    WitnessStatus status = WitnessStatus::Inconclusive;
};

/// Searches the Boolean algebra generated by the cover elements contained
/// in f^-1(f(U0)). Its atoms are the finest disjoint pieces available, so
/// m disjoint branches exist iff there are at least m atoms; the search is
/// complete and never inconclusive.
inline EigenchainWitness eigenchain_analysis(const Model& m, const Cover& a, std::size_t u0, long long mval) {
    if (u0 >= a.size()) throw ValidationError("eigenchain: element index out of range");
    if (mval < 0) throw DomainError("eigenchain: eigenvalue must be nonnegative");
    EigenchainWitness w;
    w.eigenvalue = mval;
    w.element = u0;
    w.chain = {{Simplex{u0}, Integer(1)}};
    w.target = m.preimage(m.image(a[u0].points));

    if (mval <= 1) {
        w.status = WitnessStatus::Certified;
        if (mval == 1) w.branches.push_back(w.target.any() ? w.target : a[u0].points);
        w.available_branches = static_cast<std::size_t>(mval);
        return w;
    }

    std::vector<const PointSet*> inside;
    for (const auto& e : a.elements())
        if (e.points.is_subset_of(w.target)) inside.push_back(&e.points);
    // atoms: points grouped by their membership signature
    std::vector<std::pair<std::vector<bool>, PointSet>> atoms;
    for (std::size_t p = 0; p < m.size(); ++p) {
        std::vector<bool> sig;
        bool any = false;
        for (const auto* s : inside) {
            sig.push_back(s->test(p));
            any = any || sig.back();
        }
        if (!any) continue;
        auto it = std::find_if(atoms.begin(), atoms.end(), [&](const auto& x) { return x.first == sig; });
        if (it == atoms.end()) {
            atoms.push_back({sig, m.empty_set()});
            it = std::prev(atoms.end());
        }
        it->second.set(p);
    }
    w.available_branches = atoms.size();
    if (static_cast<long long>(atoms.size()) >= mval) {
        for (long long i = 0; i < mval; ++i) w.branches.push_back(atoms[static_cast<std::size_t>(i)].second);
        if (mval > 2) w.split = decompose_eigenvalue(mval);
        w.status = WitnessStatus::Certified;
    } else {
        w.status = WitnessStatus::Refuted;
    }
    return w;
}

} // namespace cechent
