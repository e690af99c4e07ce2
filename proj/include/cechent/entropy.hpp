#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "set_cover.hpp"

namespace cechent {

inline constexpr std::size_t kDefaultJoinCap = 4096;

struct EntropySequence {
    std::vector<std::size_t> n_values;  // minimal subcover size at n = 1..
    std::vector<double> h_values;       // log of n_values
    std::vector<double> per_n;          // h_values[n-1] / n
    double min_per_n = 0.0;
    /// 0 when the joins stabilize (H bounded, so H/n -> 0); otherwise
    /// min_per_n over the computed range.
    double estimate = 0.0;
    std::optional<std::size_t> stabilized_at;
    bool monotone = true;        // h_values nondecreasing
    bool per_n_monotone = true;  // per_n nonincreasing
    bool decaying = false;       // bounded H, per_n falling to zero
    bool truncated = false;
    bool exact = true;           // every subcover solved exactly
};

inline EntropySequence entropy_estimate(const Model& m, const Cover& a, std::size_t n_max,
                                        std::size_t exact_limit = kDefaultExactLimit,
                                        std::size_t element_cap = kDefaultJoinCap) {
    if (n_max < 2) throw ValidationError("entropy: n_max must be at least 2");
    if (!m.is_total()) throw DomainError("entropy: transition is not total, preimage covers may fail to cover");
    if (!a.is_cover()) throw NotACoverError("entropy: family does not cover the model");

    EntropySequence s;
    const JoinSequence joins = iterated_join_sequence(m, a, n_max, element_cap);
    s.truncated = joins.truncated;
    s.stabilized_at = joins.stabilized_at;
    std::optional<SubcoverResult> last;
    for (std::size_t n = 1; n <= joins.levels.size(); ++n) {
        if (!last || !joins.stabilized_at || n <= *joins.stabilized_at)
            last = minimal_subcover(joins.levels[n - 1], exact_limit);
        s.exact = s.exact && last->method == SubcoverMethod::Exact;
        s.n_values.push_back(last->size);
        s.h_values.push_back(std::log(static_cast<double>(last->size)));
        s.per_n.push_back(s.h_values.back() / static_cast<double>(n));
    }
    for (std::size_t i = 1; i < s.h_values.size(); ++i) {
        if (s.n_values[i] < s.n_values[i - 1]) s.monotone = false;
        if (s.per_n[i] > s.per_n[i - 1]) s.per_n_monotone = false;
    }
    s.min_per_n = *std::min_element(s.per_n.begin(), s.per_n.end());
    if (s.stabilized_at) {
        s.estimate = 0.0;
        s.decaying = true;
    } else {
        s.estimate = s.min_per_n;
    }
    return s;
}

struct TopologicalEntropyRow {
    std::size_t cover = 0;
    double estimate = 0.0;
    bool truncated = false;
};

struct TopologicalEntropy {
    double value = 0.0;
    std::vector<TopologicalEntropyRow> table;
};

/// Sup of the per-cover estimates over the supplied covers.
inline TopologicalEntropy topological_entropy(const Model& m, const std::vector<Cover>& covers, std::size_t n_max,
                                              std::size_t exact_limit = kDefaultExactLimit) {
    if (covers.empty()) throw ValidationError("entropy: no covers supplied");
    TopologicalEntropy t;
    for (std::size_t i = 0; i < covers.size(); ++i) {
        auto s = entropy_estimate(m, covers[i], n_max, exact_limit);
        t.table.push_back({i, s.estimate, s.truncated});
        t.value = std::max(t.value, s.estimate);
    }
    return t;
}

struct ElementExpansion {
    std::string name;
    std::size_t backward = 0;  // elements meeting f^-1(U)
    std::size_t forward = 0;   // elements meeting f(U)
    std::size_t divisor = 1;   // elements meeting U
    std::size_t backward_ratio = 1;
    std::size_t forward_ratio = 1;
};

struct ExpansionReport {
    std::vector<ElementExpansion> elements;
    std::size_t backward = 1;
    std::size_t forward = 1;
    std::size_t L_d = 1;
};

/// Directional expansion counts per element, each divided (ceiling) by
/// the number of elements meeting the element itself, so overlapping
/// covers count neighbours only once per unit of overlap. L_d is the
/// maximum over elements and both directions, at least 1.
inline ExpansionReport expansion_multiplicity(const Model& m, const Cover& a) {
    if (!a.is_cover()) throw NotACoverError("expansion: family does not cover the model");
    ExpansionReport r;
    auto meeting = [&](const PointSet& s) {
        std::size_t c = 0;
        for (const auto& v : a.elements()) c += (v.points & s).any();
        return c;
    };
    auto ratio = [](std::size_t num, std::size_t den) { return std::max<std::size_t>(1, (num + den - 1) / den); };
    for (const auto& u : a.elements()) {
        ElementExpansion e;
        e.name = u.name;
        e.divisor = std::max<std::size_t>(1, meeting(u.points));
        e.backward = meeting(m.preimage(u.points));
        e.forward = meeting(m.image(u.points));
        e.backward_ratio = ratio(e.backward, e.divisor);
        e.forward_ratio = ratio(e.forward, e.divisor);
        r.backward = std::max(r.backward, e.backward_ratio);
        r.forward = std::max(r.forward, e.forward_ratio);
        r.elements.push_back(std::move(e));
    }
    r.L_d = std::max(r.backward, r.forward);
    return r;
}

struct FiberEntropyReport {
    EntropySequence sequence;
    ExpansionReport expansion;
    double ent_f_alpha = 0.0;
    std::size_t L_d = 1;
    double log_L_d = 0.0;
    double ent_fL_alpha = 0.0;
};

/// ent(f, a) plus log L_d, the logarithm added once.
inline FiberEntropyReport fiber_entropy(const Model& m, const Cover& a, std::size_t n_max,
                                        std::size_t exact_limit = kDefaultExactLimit,
                                        std::size_t element_cap = kDefaultJoinCap) {
    FiberEntropyReport r;
    r.sequence = entropy_estimate(m, a, n_max, exact_limit, element_cap);
    r.expansion = expansion_multiplicity(m, a);
    r.ent_f_alpha = r.sequence.estimate;
    r.L_d = r.expansion.L_d;
    r.log_L_d = std::log(static_cast<double>(r.L_d));
    r.ent_fL_alpha = r.ent_f_alpha + r.log_L_d;
    return r;
}

} // namespace cechent
