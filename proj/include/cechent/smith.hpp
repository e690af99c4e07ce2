#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace cechent {

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... .
/// The inverses are carried along so callers can change coordinates
/// in both directions without a second elimination.
struct SmithForm {
    IntMatrix D;
    IntMatrix U;
    IntMatrix V;
    IntMatrix U_inv;
    IntMatrix V_inv;
    std::size_t rank = 0;

    /// Nonzero diagonal entries in order.
    std::vector<Integer> invariant_factors() const {
        std::vector<Integer> out;
        out.reserve(rank);
        for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
        return out;
    }

    /// Columns of V spanning ker A; the basis is saturated in Z^n.
    IntMatrix kernel_basis() const { return V.block(0, V.rows(), rank, V.cols()); }
};

namespace detail {

class SmithReducer {
public:
    explicit SmithReducer(const IntMatrix& a)
        : D_(a),
          U_(IntMatrix::identity(a.rows())),
          V_(IntMatrix::identity(a.cols())),
          U_inv_(IntMatrix::identity(a.rows())),
          V_inv_(IntMatrix::identity(a.cols())) {}

    SmithForm run() {
        const std::size_t m = D_.rows(), n = D_.cols();
        std::size_t t = 0;
        for (; t < std::min(m, n); ++t) {
            auto pivot = smallest_entry(t, t, t, t, /*whole_block=*/true);
            if (!pivot) break;
            swap_rows(t, pivot->first);
            swap_cols(t, pivot->second);
            reduce_pivot(t);
            if (D_(t, t) < 0) negate_row(t);
        }
        return SmithForm{std::move(D_), std::move(U_), std::move(V_), std::move(U_inv_), std::move(V_inv_), t};
    }

private:
    using Pos = std::pair<std::size_t, std::size_t>;

    // Smallest nonzero |entry|, ties broken row-major. With whole_block
    // false only row t and column t (beyond the pivot) are scanned.
    std::optional<Pos> smallest_entry(std::size_t r0, std::size_t c0, std::size_t pr, std::size_t pc,
                                      bool whole_block) const {
        std::optional<Pos> best;
        Integer best_abs;
        auto consider = [&](std::size_t i, std::size_t j) {
            const Integer& v = D_(i, j);
            if (v == 0) return;
            Integer av = abs(v);
            if (!best || av < best_abs) {
                best = Pos{i, j};
                best_abs = av;
            }
        };
        if (whole_block) {
            for (std::size_t i = r0; i < D_.rows(); ++i)
                for (std::size_t j = c0; j < D_.cols(); ++j) consider(i, j);
        } else {
            for (std::size_t j = pc; j < D_.cols(); ++j) consider(pr, j);
            for (std::size_t i = pr + 1; i < D_.rows(); ++i) consider(i, pc);
        }
        return best;
    }

    void reduce_pivot(std::size_t t) {
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < D_.rows(); ++i) {
                if (D_(i, t) == 0) continue;
                Integer q = D_(i, t) / D_(t, t);
                add_row(i, t, -q);
                if (D_(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < D_.cols(); ++j) {
                if (D_(t, j) == 0) continue;
                Integer q = D_(t, j) / D_(t, t);
                add_col(j, t, -q);
                if (D_(t, j) != 0) clean = false;
            }
            if (!clean) {
                auto p = smallest_entry(t, t, t, t, /*whole_block=*/false);
                swap_rows(t, p->first);
                swap_cols(t, p->second);
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            std::optional<std::size_t> bad_row;
            for (std::size_t i = t + 1; i < D_.rows() && !bad_row; ++i)
                for (std::size_t j = t + 1; j < D_.cols(); ++j)
                    if (D_(i, j) % D_(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
            if (!bad_row) return;
            add_row(t, *bad_row, 1);
        }
    }

    void add_row(std::size_t dst, std::size_t src, const Integer& c) {
        if (c == 0) return;
        D_.add_row(dst, src, c);
        U_.add_row(dst, src, c);
        U_inv_.add_col(src, dst, -c);
    }
    void add_col(std::size_t dst, std::size_t src, const Integer& c) {
        if (c == 0) return;
        D_.add_col(dst, src, c);
        V_.add_col(dst, src, c);
        V_inv_.add_row(src, dst, -c);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        D_.swap_rows(a, b);
        U_.swap_rows(a, b);
        U_inv_.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        D_.swap_cols(a, b);
        V_.swap_cols(a, b);
        V_inv_.swap_rows(a, b);
    }
    void negate_row(std::size_t r) {
        D_.negate_row(r);
        U_.negate_row(r);
        U_inv_.negate_col(r);
    }

    IntMatrix D_, U_, V_, U_inv_, V_inv_;
};

} // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& a) { return detail::SmithReducer(a).run(); }

inline std::size_t integer_rank(const IntMatrix& a) { return smith_normal_form(a).rank; }

/// Integer solution X of A X = B, or nullopt when none exists over Z.
/// Free coordinates are set to zero, so the result is deterministic.
inline std::optional<IntMatrix> solve_integer(const IntMatrix& a, const IntMatrix& b) {
    assert(a.rows() == b.rows());
    const SmithForm s = smith_normal_form(a);
    const IntMatrix ub = s.U * b;
    IntMatrix y(a.cols(), b.cols());
    for (std::size_t i = 0; i < ub.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (i < s.rank) {
                if (ub(i, j) % s.D(i, i) != 0) return std::nullopt;
                y(i, j) = ub(i, j) / s.D(i, i);
            } else if (ub(i, j) != 0) {
                return std::nullopt;
            }
        }
    return s.V * y;
}

} // namespace cechent
