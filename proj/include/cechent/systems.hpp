#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace cechent {

/// A model with the covers an analysis runs over. The first cover is the
/// primary one; the others widen the sup over covers.
struct System {
    ModelPtr model;
    std::vector<std::pair<std::string, Cover>> covers;
};

/// Words of length `depth` over {0..k-1}; w maps to every word w[1..] s.
/// The relation is the one-sided shift seen through a finite window.
inline ModelPtr full_shift(int k, int depth) {
    if (k < 1 || k > 36) throw ValidationError("shift: alphabet size must be in 1..36");
    if (depth < 1) throw ValidationError("shift: depth must be positive");
    std::size_t n = 1;
    for (int i = 0; i < depth; ++i) {
        n *= static_cast<std::size_t>(k);
        if (n > (1u << 16)) throw ComplexityError("shift: more than 65536 words");
    }
    static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::vector<std::string> names(n);
    for (std::size_t w = 0; w < n; ++w) {
        std::string s(static_cast<std::size_t>(depth), '0');
        std::size_t v = w;
        for (int i = depth - 1; i >= 0; --i) {
            s[static_cast<std::size_t>(i)] = digits[v % static_cast<std::size_t>(k)];
            v /= static_cast<std::size_t>(k);
        }
        names[w] = s;
    }
    // word index is the base-k value, most significant symbol first
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t w = 0; w < n; ++w) {
        const std::size_t tail = (w * static_cast<std::size_t>(k)) % n;
        for (int s = 0; s < k; ++s) succ[w].push_back(tail + static_cast<std::size_t>(s));
    }
    return Model::from_successors("shift:k=" + std::to_string(k) + ",depth=" + std::to_string(depth), names, succ);
}

/// Cylinders fixing the first `length` symbols, named "[prefix]".
inline Cover cylinder_cover(const ModelPtr& m, int length) {
    if (length < 1) throw ValidationError("cylinders: length must be positive");
    const std::size_t depth = m->point_name(0).size();
    if (static_cast<std::size_t>(length) > depth) throw ValidationError("cylinders: length exceeds word depth");
    std::vector<CoverElement> out;
    for (std::size_t p = 0; p < m->size(); ++p) {
        const std::string prefix = "[" + m->point_name(p).substr(0, static_cast<std::size_t>(length)) + "]";
        auto it = std::find_if(out.begin(), out.end(), [&](const CoverElement& e) { return e.name == prefix; });
        if (it == out.end()) {
            out.push_back({prefix, m->empty_set()});
            it = std::prev(out.end());
        }
        it->points.set(p);
    }
    return Cover::create(m, std::move(out));
}

inline Cover singleton_cover(const ModelPtr& m) {
    std::vector<CoverElement> out;
    for (std::size_t p = 0; p < m->size(); ++p) {
        PointSet s = m->empty_set();
        s.set(p);
        out.push_back({"{" + m->point_name(p) + "}", std::move(s)});
    }
    return Cover::create(m, std::move(out));
}

inline Cover whole_cover(const ModelPtr& m) { return Cover::create(m, {{"X", m->full_set()}}); }

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n, std::size_t from = 0) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(from + i));
    return out;
}

/// Points 1..k, every point maps to all of X.
inline System exercise1(int k) {
    if (k < 1) throw ValidationError("exercise1: k must be positive");
    std::vector<std::vector<std::size_t>> succ(static_cast<std::size_t>(k));
    for (auto& s : succ)
        for (int j = 0; j < k; ++j) s.push_back(static_cast<std::size_t>(j));
    auto m = Model::from_successors("exercise1:k=" + std::to_string(k), numbered("", static_cast<std::size_t>(k), 1), succ);
    return {m, {{"singletons", singleton_cover(m)}, {"whole", whole_cover(m)}}};
}

/// Points 1..k, every point maps to 1.
inline System exercise2(int k) {
    if (k < 1) throw ValidationError("exercise2: k must be positive");
    std::vector<std::vector<std::size_t>> succ(static_cast<std::size_t>(k), std::vector<std::size_t>{0});
    auto m = Model::from_successors("exercise2:k=" + std::to_string(k), numbered("", static_cast<std::size_t>(k), 1), succ);
    return {m, {{"singletons", singleton_cover(m)}}};
}

inline System shift_system(int k, int depth) {
    auto m = full_shift(k, depth);
    return {m, {{"cylinders:1", cylinder_cover(m, 1)}}};
}

/// Cells 0..R-1 of the circle; cell c maps to cell d*c mod R.
inline ModelPtr circle_map(int cells, int degree) {
    if (cells < 4) throw ValidationError("circle: need at least 4 cells");
    if (degree < 0) throw ValidationError("circle: degree must be nonnegative");
    std::vector<std::vector<std::size_t>> succ(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c)
        succ[static_cast<std::size_t>(c)] = {static_cast<std::size_t>((static_cast<long long>(degree) * c) % cells)};
    return Model::from_successors("circle:cells=" + std::to_string(cells) + ",d=" + std::to_string(degree),
                                  numbered("c", static_cast<std::size_t>(cells)), succ);
}

/// `count` arcs of cells/count consecutive cells, each extended by
/// `overlap` cells into the next arc. With count >= 3 the nerve is a cycle.
inline Cover arc_cover(const ModelPtr& m, std::size_t count, std::size_t overlap = 1) {
    const std::size_t r = m->size();
    if (count < 3 || r % count != 0) throw ValidationError("arcs: count must be at least 3 and divide the cell count");
    const std::size_t w = r / count;
    if (overlap >= w) throw ValidationError("arcs: overlap must be smaller than the arc length");
    std::vector<CoverElement> out;
    for (std::size_t i = 0; i < count; ++i) {
        PointSet s = m->empty_set();
        for (std::size_t j = 0; j < w + overlap; ++j) s.set((w * i + j) % r);
        out.push_back({"a" + std::to_string(i), std::move(s)});
    }
    return Cover::create(m, std::move(out));
}

inline System circle_system(int cells, int degree, std::size_t arcs = 4) {
    auto m = circle_map(cells, degree);
    return {m, {{"arcs", arc_cover(m, arcs)}}};
}

/// Degree-d circle at a resolution where one refinement already has a
/// circle nerve: 4 arcs of 4 cells up to degree 2, 2d arcs of 6 cells
/// beyond.
inline System circle_degree_system(int degree) {
    if (degree < 0) throw ValidationError("circle: degree must be nonnegative");
    if (degree <= 2) return circle_system(16, degree, 4);
    const int arcs = 2 * degree;
    return circle_system(6 * arcs, degree, static_cast<std::size_t>(arcs));
}

inline System identity_system(int cells = 16) {
    if (cells < 4 || cells % 4 != 0) throw ValidationError("identity: cell count must be a positive multiple of 4");
    std::vector<std::vector<std::size_t>> succ;
    for (std::size_t i = 0; i < static_cast<std::size_t>(cells); ++i) succ.push_back({i});
    auto m = Model::from_successors("identity:cells=" + std::to_string(cells), numbered("c", succ.size()), succ);
    return {m, {{"arcs", arc_cover(m, 4)}}};
}

inline System contraction_system(Rational k, int resolution) {
    auto [m, windows] = discretize_interval_map(PLIntervalSpec::linear(k, resolution),
                                                "contraction:k=" + std::to_string(k.numerator()) + "/" +
                                                    std::to_string(k.denominator()) + ",resolution=" + std::to_string(resolution));
    return {m, {{"windows", windows}}};
}

} // namespace cechent
