#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "model.hpp"

namespace cechent {

enum class SubcoverMethod { Exact, Greedy };

inline const char* to_string(SubcoverMethod m) { return m == SubcoverMethod::Exact ? "exact" : "greedy"; }

struct SubcoverResult {
    std::size_t size = 0;
    std::vector<std::size_t> chosen_indices;  // ascending
    std::vector<std::string> chosen;
    SubcoverMethod method = SubcoverMethod::Exact;
    /// 0 for exact; otherwise the greedy size minus a certified lower bound.
    std::size_t optimality_gap = 0;
    std::size_t lower_bound = 0;
};

inline constexpr std::size_t kDefaultExactLimit = 20;

namespace detail {

/// Set cover over a point subset. Elements are already restricted to the
/// points still to be covered.
struct CoverInstance {
    PointSet universe;
    std::vector<PointSet> sets;
    std::vector<std::size_t> ids;  // original element indices
};

/// Points no two of which share an element: each needs its own element.
inline std::size_t packing_bound(const CoverInstance& inst, const PointSet& uncovered) {
    PointSet blocked = uncovered;
    blocked.reset();
    std::size_t count = 0;
    for (auto p = uncovered.find_first(); p != PointSet::npos; p = uncovered.find_next(p)) {
        if (blocked.test(p)) continue;
        ++count;
        for (const auto& s : inst.sets)
            if (s.test(p)) blocked |= s;
    }
    return count;
}

inline std::size_t size_bound(const CoverInstance& inst, const PointSet& uncovered) {
    std::size_t largest = 0;
    for (const auto& s : inst.sets) largest = std::max(largest, (s & uncovered).count());
    if (largest == 0) return 0;
    return (uncovered.count() + largest - 1) / largest;
}

inline std::size_t lower_bound(const CoverInstance& inst, const PointSet& uncovered) {
    if (uncovered.none()) return 0;
    return std::max(packing_bound(inst, uncovered), size_bound(inst, uncovered));
}

/// Largest marginal gain, ties to the earliest element.
inline std::vector<std::size_t> greedy(const CoverInstance& inst) {
    std::vector<std::size_t> pick;
    PointSet left = inst.universe;
    while (left.any()) {
        std::size_t best = 0, gain = 0;
        for (std::size_t i = 0; i < inst.sets.size(); ++i) {
            const std::size_t g = (inst.sets[i] & left).count();
            if (g > gain) {
                gain = g;
                best = i;
            }
        }
        pick.push_back(best);
        left -= inst.sets[best];
    }
    return pick;
}

class BranchAndBound {
public:
    explicit BranchAndBound(const CoverInstance& inst) : inst_(inst) {
        best_ = greedy(inst);
    }

    std::vector<std::size_t> solve() {
        std::vector<std::size_t> current;
        search(inst_.universe, current);
        return best_;
    }

private:
    void search(const PointSet& uncovered, std::vector<std::size_t>& current) {
        if (uncovered.none()) {
            if (current.size() < best_.size()) best_ = current;
            return;
        }
        if (current.size() + lower_bound(inst_, uncovered) >= best_.size()) return;
        // branch on the uncovered point contained in the fewest elements
        std::size_t pivot = PointSet::npos, fewest = inst_.sets.size() + 1;
        for (auto p = uncovered.find_first(); p != PointSet::npos; p = uncovered.find_next(p)) {
            std::size_t c = 0;
            for (const auto& s : inst_.sets) c += s.test(p);
            if (c < fewest) {
                fewest = c;
                pivot = p;
            }
        }
        for (std::size_t i = 0; i < inst_.sets.size(); ++i) {
            if (!inst_.sets[i].test(pivot)) continue;
            current.push_back(i);
            search(uncovered - inst_.sets[i], current);
            current.pop_back();
        }
    }

    const CoverInstance& inst_;
    std::vector<std::size_t> best_;
};

} // namespace detail

/// Minimum subfamily covering the model. Exact reductions run first
/// (dominated elements removed, elements forced by a point they alone
/// cover taken), the rest splits into components sharing no element.
/// Components of at most `exact_limit` elements are solved by
/// branch-and-bound, larger ones greedily with a reported gap.
inline SubcoverResult minimal_subcover(const Cover& a, std::size_t exact_limit = kDefaultExactLimit) {
    if (!a.is_cover()) throw NotACoverError("subcover: family does not cover the model");
    SubcoverResult r;
    std::vector<std::size_t> chosen;
    PointSet uncovered = a.base()->full_set();
    std::vector<std::size_t> alive(a.size());
    std::iota(alive.begin(), alive.end(), std::size_t{0});

    for (bool changed = true; changed && uncovered.any();) {
        changed = false;
        std::vector<PointSet> restricted;
        for (auto i : alive) restricted.push_back(a[i].points & uncovered);
        std::vector<std::size_t> keep;
        for (std::size_t x = 0; x < alive.size(); ++x) {
            if (restricted[x].none()) continue;
            bool dominated = false;
            for (std::size_t y = 0; y < alive.size() && !dominated; ++y) {
                if (x == y || !restricted[x].is_subset_of(restricted[y])) continue;
                // equal sets: the earlier one survives
                dominated = restricted[x] != restricted[y] || y < x;
            }
            if (!dominated) keep.push_back(x);
        }
        if (keep.size() != alive.size()) changed = true;
        std::vector<std::size_t> next;
        std::vector<PointSet> next_sets;
        for (auto x : keep) {
            next.push_back(alive[x]);
            next_sets.push_back(restricted[x]);
        }
        alive = std::move(next);
        const PointSet pending = uncovered;
        for (auto p = pending.find_first(); p != PointSet::npos; p = pending.find_next(p)) {
            if (!uncovered.test(p)) continue;
            std::size_t owner = alive.size(), hits = 0;
            for (std::size_t x = 0; x < alive.size(); ++x)
                if (next_sets[x].test(p)) {
                    ++hits;
                    owner = x;
                }
            if (hits == 1) {
                chosen.push_back(alive[owner]);
                uncovered -= next_sets[owner];
                changed = true;
            }
        }
    }

    // components of the remaining element-overlap graph
    std::vector<bool> done(alive.size(), false);
    for (std::size_t s = 0; s < alive.size() && uncovered.any(); ++s) {
        if (done[s]) continue;
        detail::CoverInstance inst;
        inst.universe = a[alive[s]].points & uncovered;
        std::vector<std::size_t> members{s};
        done[s] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t t = 0; t < alive.size(); ++t) {
                if (done[t] || !(a[alive[t]].points & inst.universe).any()) continue;
                done[t] = true;
                members.push_back(t);
                inst.universe |= a[alive[t]].points & uncovered;
                grew = true;
            }
        }
        std::sort(members.begin(), members.end());
        for (auto t : members) {
            inst.sets.push_back(a[alive[t]].points & uncovered);
            inst.ids.push_back(alive[t]);
        }
        std::vector<std::size_t> pick;
        if (inst.sets.size() <= exact_limit) {
            pick = detail::BranchAndBound(inst).solve();
        } else {
            pick = detail::greedy(inst);
            const std::size_t lb = detail::lower_bound(inst, inst.universe);
            r.method = SubcoverMethod::Greedy;
            r.optimality_gap += pick.size() - lb;
        }
        for (auto i : pick) chosen.push_back(inst.ids[i]);
        uncovered -= inst.universe;
    }

    std::sort(chosen.begin(), chosen.end());
    r.size = chosen.size();
    r.lower_bound = r.size - r.optimality_gap;
    r.chosen_indices = chosen;
    for (auto i : chosen) r.chosen.push_back(a[i].name);
    return r;
}

/// Natural log of the minimal subcover size.
inline double cover_entropy(const Cover& a, std::size_t exact_limit = kDefaultExactLimit) {
    return std::log(static_cast<double>(minimal_subcover(a, exact_limit).size));
}

} // namespace cechent
