#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/rational.hpp>

#include "error.hpp"

namespace cechent {

using PointSet = boost::dynamic_bitset<>;

/// Finite point set with a (possibly multivalued, possibly partial)
/// transition relation. Immutable once built; shared by every cover on it.
class Model {
public:
    static std::shared_ptr<const Model> from_successors(std::string label, std::vector<std::string> points,
                                                        const std::vector<std::vector<std::size_t>>& successors) {
        if (points.empty()) throw ValidationError("model: point set is empty");
        if (successors.size() != points.size())
            throw ValidationError("model: successor table size does not match point count");
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!index.emplace(points[i], i).second) throw ValidationError("model: duplicate point '" + points[i] + "'");
        std::vector<PointSet> succ;
        succ.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            PointSet s(points.size());
            for (auto j : successors[i]) {
                if (j >= points.size())
                    throw ValidationError("model: successor index " + std::to_string(j) + " of point '" + points[i] +
                                          "' is out of range");
                s.set(j);
            }
            succ.push_back(std::move(s));
        }
        return std::shared_ptr<const Model>(new Model(std::move(label), std::move(points), std::move(index), std::move(succ)));
    }

    /// Transition given by point names; points missing from `transitions`
    /// have no successors.
    static std::shared_ptr<const Model> from_named(std::string label, std::vector<std::string> points,
                                                   const std::vector<std::pair<std::string, std::vector<std::string>>>& transitions) {
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < points.size(); ++i) index.emplace(points[i], i);
        std::vector<std::vector<std::size_t>> succ(points.size());
        for (const auto& [from, tos] : transitions) {
            auto f = index.find(from);
            if (f == index.end()) throw ValidationError("model: transition source '" + from + "' is not a point");
            for (const auto& to : tos) {
                auto t = index.find(to);
                if (t == index.end())
                    throw ValidationError("model: successor '" + to + "' of '" + from + "' is not a point");
                succ[f->second].push_back(t->second);
            }
        }
        return from_successors(std::move(label), std::move(points), succ);
    }

    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& points() const noexcept { return points_; }
    const std::string& point_name(std::size_t i) const { return points_.at(i); }
    std::optional<std::size_t> index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const PointSet& successors(std::size_t p) const { return successors_.at(p); }

    PointSet empty_set() const { return PointSet(size()); }
    PointSet full_set() const {
        PointSet s(size());
        s.set();
        return s;
    }

    /// Union of the successors of every point in `s`.
    PointSet image(const PointSet& s) const {
        PointSet out(size());
        for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p)) out |= successors_[p];
        return out;
    }

    /// Existential preimage: points with at least one successor in `s`.
    PointSet preimage(const PointSet& s) const {
        PointSet out(size());
        for (std::size_t p = 0; p < size(); ++p)
            if (successors_[p].intersects(s)) out.set(p);
        return out;
    }

    bool is_total() const {
        return std::all_of(successors_.begin(), successors_.end(), [](const PointSet& s) { return s.any(); });
    }
    bool is_single_valued() const {
        return std::all_of(successors_.begin(), successors_.end(), [](const PointSet& s) { return s.count() == 1; });
    }

    PointSet set_of(const std::vector<std::size_t>& idx) const {
        PointSet s(size());
        for (auto i : idx) s.set(i);
        return s;
    }

private:
    Model(std::string label, std::vector<std::string> points, std::unordered_map<std::string, std::size_t> index,
          std::vector<PointSet> successors)
        : label_(std::move(label)), points_(std::move(points)), index_(std::move(index)), successors_(std::move(successors)) {}

    std::string label_;
    std::vector<std::string> points_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<PointSet> successors_;
};

using ModelPtr = std::shared_ptr<const Model>;

struct CoverElement {
    std::string name;
    PointSet points;
};

/// Named finite family of nonempty point subsets. A value built by
/// `Cover::create` always covers its model; intermediate families from
/// `preimage_cover` on partial relations may not, and carry the flag.
class Cover {
public:
    static Cover create(ModelPtr base, std::vector<CoverElement> elements) {
        if (!base) throw ValidationError("cover: missing base model");
        std::set<std::string> names;
        PointSet all(base->size());
        for (const auto& e : elements) {
            if (e.points.size() != base->size()) throw ValidationError("cover: element '" + e.name + "' has wrong universe");
            if (e.points.none()) throw ValidationError("cover: element '" + e.name + "' is empty");
            if (!names.insert(e.name).second) throw ValidationError("cover: duplicate element name '" + e.name + "'");
            all |= e.points;
        }
        if (elements.empty()) throw ValidationError("cover: no elements");
        if (!all.all()) {
            auto missing = (~all).find_first();
            throw ValidationError("cover: point '" + base->point_name(missing) + "' is not covered");
        }
        return Cover(std::move(base), std::move(elements), true);
    }

    /// Convenience: elements as lists of point indices.
    static Cover from_indices(ModelPtr base, const std::vector<std::pair<std::string, std::vector<std::size_t>>>& elems) {
        std::vector<CoverElement> out;
        for (const auto& [name, idx] : elems) {
            PointSet s(base->size());
            for (auto i : idx) {
                if (i >= base->size()) throw ValidationError("cover: element '" + name + "' references a missing point");
                s.set(i);
            }
            out.push_back({name, std::move(s)});
        }
        return create(std::move(base), std::move(out));
    }

    /// Family that skips the covering check and records whether it covers.
    static Cover family(ModelPtr base, std::vector<CoverElement> elements) {
        PointSet all(base->size());
        for (const auto& e : elements) all |= e.points;
        const bool covers = !elements.empty() && all.all();
        return Cover(std::move(base), std::move(elements), covers);
    }

    const ModelPtr& base() const noexcept { return base_; }
    const std::vector<CoverElement>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const CoverElement& operator[](std::size_t i) const { return elements_.at(i); }
    bool is_cover() const noexcept { return is_cover_; }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i].name == name) return i;
        return std::nullopt;
    }

    /// Element subsets as a set, ignoring names and order.
    std::set<PointSet> element_set() const {
        std::set<PointSet> s;
        for (const auto& e : elements_) s.insert(e.points);
        return s;
    }

private:
    Cover(ModelPtr base, std::vector<CoverElement> elements, bool is_cover)
        : base_(std::move(base)), elements_(std::move(elements)), is_cover_(is_cover) {}

    ModelPtr base_;
    std::vector<CoverElement> elements_;
    bool is_cover_ = false;
};

inline bool same_elements(const Cover& a, const Cover& b) { return a.element_set() == b.element_set(); }

inline void require_same_base(const Cover& a, const Cover& b) {
    if (a.base() != b.base())
        throw ModelMismatchError("covers are defined on different models ('" + a.base()->label() + "' vs '" +
                                 b.base()->label() + "')");
}

namespace detail {

// Keeps the first occurrence of each subset; drops empty sets.
inline std::vector<CoverElement> dedupe(std::vector<CoverElement> in) {
    std::set<PointSet> seen;
    std::vector<CoverElement> out;
    out.reserve(in.size());
    for (auto& e : in) {
        if (e.points.none()) continue;
        if (!seen.insert(e.points).second) continue;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace detail

/// All nonempty pairwise intersections, named "A∧B" in input order.
inline Cover join(const Cover& a, const Cover& b) {
    require_same_base(a, b);
    std::vector<CoverElement> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.elements())
        for (const auto& y : b.elements()) {
            PointSet s = x.points & y.points;
            if (s.any()) out.push_back({x.name + "∧" + y.name, std::move(s)});
        }
    return Cover::family(a.base(), detail::dedupe(std::move(out)));
}

/// Each element replaced by its existential preimage; empty preimages are
/// dropped. The result is flagged when it fails to cover the model.
inline Cover preimage_cover(const Model& m, const Cover& a) {
    std::vector<CoverElement> out;
    out.reserve(a.size());
    for (const auto& e : a.elements()) out.push_back({"f⁻¹(" + e.name + ")", m.preimage(e.points)});
    return Cover::family(a.base(), detail::dedupe(std::move(out)));
}

/// Result of iterating joins with preimages: level n (1-based) is
/// alpha ∨ f^-1(level n-1), which for single-valued maps equals
/// alpha ∨ f^-1 alpha ∨ ... ∨ f^-(n-1) alpha.
struct JoinSequence {
    std::vector<Cover> levels;
    /// First n with levels[n-1] equal (as a family) to levels[n-2]; once
    /// that happens every later level is the same family.
    std::optional<std::size_t> stabilized_at;
    bool truncated = false;
};

inline JoinSequence iterated_join_sequence(const Model& m, const Cover& a, std::size_t n_max,
                                           std::size_t element_cap = 4096) {
    if (n_max < 1) throw ValidationError("iterated_join: n must be at least 1");
    JoinSequence seq;
    seq.levels.push_back(a);
    for (std::size_t n = 2; n <= n_max; ++n) {
        const Cover& prev = seq.levels.back();
        if (seq.stabilized_at) {
            seq.levels.push_back(prev);
            continue;
        }
        Cover pre = preimage_cover(m, prev);
        Cover next = join(a, pre);
        if (next.size() > element_cap) {
            seq.truncated = true;
            break;
        }
        if (same_elements(next, prev)) seq.stabilized_at = n;
        seq.levels.push_back(std::move(next));
    }
    return seq;
}

inline Cover iterated_join(const Model& m, const Cover& a, std::size_t n) {
    auto seq = iterated_join_sequence(m, a, n, static_cast<std::size_t>(-1));
    return seq.levels.back();
}

/// True iff every element of `b` lies inside some element of `a`
/// (b is the larger cover in the refinement order).
inline bool refines(const Cover& a, const Cover& b) {
    require_same_base(a, b);
    for (const auto& y : b.elements()) {
        bool inside = false;
        for (const auto& x : a.elements())
            if (y.points.is_subset_of(x.points)) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    return true;
}

/// Complements of all elements. Generally not a cover.
inline std::vector<PointSet> complement_cover(const Cover& a) {
    std::vector<PointSet> out;
    out.reserve(a.size());
    for (const auto& e : a.elements()) out.push_back(~e.points);
    return out;
}

using Rational = boost::rational<long long>;

/// Piecewise-linear self-map of [0,1]: piece i is slope*x + intercept on
/// [breakpoints[i], breakpoints[i+1]].
struct PLIntervalSpec {
    struct Piece {
        Rational slope;
        Rational intercept;
    };
    std::vector<Rational> breakpoints;
    std::vector<Piece> pieces;
    int resolution = 16;

    /// f(x) = k x on the whole interval.
    static PLIntervalSpec linear(Rational k, int resolution) {
        return PLIntervalSpec{{Rational(0), Rational(1)}, {{k, Rational(0)}}, resolution};
    }
};

/// Grid-cell model of a PL interval map plus the cover by windows of two
/// consecutive cells. Cell c stands for [c/R, (c+1)/R); it maps to every
/// cell whose interior meets the interior of f(cell), or to the cell
/// holding f(cell) when a piece is constant there.
inline std::pair<ModelPtr, Cover> discretize_interval_map(const PLIntervalSpec& spec, const std::string& label = "interval") {
    const int R = spec.resolution;
    if (R < 4) throw ValidationError("interval: resolution must be at least 4");
    const auto& bp = spec.breakpoints;
    if (bp.size() < 2 || bp.front() != Rational(0) || bp.back() != Rational(1))
        throw ValidationError("interval: breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < bp.size(); ++i)
        if (!(bp[i - 1] < bp[i])) throw ValidationError("interval: breakpoints must be strictly ascending");
    if (spec.pieces.size() + 1 != bp.size()) throw ValidationError("interval: need one piece per breakpoint gap");

    auto eval = [&](std::size_t piece, Rational x) { return spec.pieces[piece].slope * x + spec.pieces[piece].intercept; };
    for (std::size_t i = 0; i < spec.pieces.size(); ++i)
        for (Rational x : {bp[i], bp[i + 1]}) {
            Rational y = eval(i, x);
            if (y < Rational(0) || y > Rational(1))
                throw DomainError("interval: image of x=" + std::to_string(boost::rational_cast<double>(x)) +
                                  " lies outside [0,1]");
        }

    auto floor_cell = [R](Rational y) {
        Rational s = y * Rational(R);
        long long f = s.numerator() / s.denominator();
        return std::clamp<long long>(f, 0, R - 1);
    };
    auto ceil_cell = [R](Rational y) {
        Rational s = y * Rational(R);
        long long f = s.numerator() / s.denominator();
        if (Rational(f) < s) ++f;
        return f;
    };

    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> succ(R);
    for (int c = 0; c < R; ++c) names.push_back("c" + std::to_string(c));
    for (int c = 0; c < R; ++c) {
        const Rational lo(c, R), hi(c + 1, R);
        std::set<std::size_t> targets;
        for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
            Rational a = std::max(lo, bp[i]), b = std::min(hi, bp[i + 1]);
            if (!(a < b)) continue;
            Rational ya = eval(i, a), yb = eval(i, b);
            Rational ymin = std::min(ya, yb), ymax = std::max(ya, yb);
            if (ymin == ymax) {
                targets.insert(static_cast<std::size_t>(floor_cell(ymin)));
                continue;
            }
            for (long long j = floor_cell(ymin); j < ceil_cell(ymax) && j < R; ++j) targets.insert(static_cast<std::size_t>(j));
        }
        succ[c].assign(targets.begin(), targets.end());
    }
    auto model = Model::from_successors(label, names, succ);
    std::vector<std::pair<std::string, std::vector<std::size_t>>> windows;
    for (int i = 0; i + 1 < R; ++i)
        windows.push_back({"w" + std::to_string(i), {static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)}});
    return {model, Cover::from_indices(model, windows)};
}

} // namespace cechent
