#pragma once

#include <string>
#include <vector>

#include "nerve.hpp"
#include "smith.hpp"

namespace cechent {

/// Free rank plus torsion divisors (> 1, each dividing the next).
struct HomologyGroup {
    std::size_t rank = 0;
    std::vector<Integer> torsion;

    friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;

    std::string to_string() const {
        std::string s = "Z^" + std::to_string(rank);
        for (const auto& t : torsion) s += " + Z/" + t.str();
        return s;
    }
};

/// Homology of one degree together with an adapted basis of the cycles.
///
/// Cycles Z = ker(out). In the basis `generators()` (columns), the
/// boundaries are spanned by d_i * g_i for i < boundary_rank; columns with
/// d_i > 1 carry torsion and columns from boundary_rank on are free.
class DegreeHomology {
public:
    /// `out` : C -> C_next (kernel side), `in` : C_prev -> C (image side).
    DegreeHomology(const IntMatrix& out, const IntMatrix& in) : out_snf_(smith_normal_form(out)) {
        dim_ = out.cols();
        kernel_dim_ = dim_ - out_snf_.rank;
        // in-image in kernel coordinates: rows rank.. of V^-1 * in vanish
        // above, because im(in) lies in ker(out).
        IntMatrix w = (out_snf_.V_inv * in).block(out_snf_.rank, dim_, 0, in.cols());
        rel_snf_ = smith_normal_form(w);
        for (std::size_t i = 0; i < rel_snf_.rank; ++i)
            if (rel_snf_.D(i, i) > 1) group_.torsion.push_back(rel_snf_.D(i, i));
        group_.rank = kernel_dim_ - rel_snf_.rank;
    }

    const HomologyGroup& group() const noexcept { return group_; }
    std::size_t chain_rank() const noexcept { return dim_; }
    std::size_t kernel_dim() const noexcept { return kernel_dim_; }
    std::size_t boundary_rank() const noexcept { return rel_snf_.rank; }
    const Integer& divisor(std::size_t i) const { return rel_snf_.D(i, i); }

    /// Basis of the cycle group (saturated in the chain group).
    IntMatrix kernel_basis() const { return out_snf_.kernel_basis(); }

    /// Coordinates of cycles (columns of z) in kernel_basis().
    IntMatrix kernel_coords(const IntMatrix& z) const { return (out_snf_.V_inv * z).block(out_snf_.rank, dim_, 0, z.cols()); }

    /// Adapted basis of the cycle group, one column per cycle.
    IntMatrix generators() const { return kernel_basis() * rel_snf_.U_inv; }

    /// Coordinates of cycles in generators().
    IntMatrix adapted_coords(const IntMatrix& z) const { return rel_snf_.U * kernel_coords(z); }

    /// Chains representing the free homology generators.
    IntMatrix free_generators() const {
        IntMatrix g = generators();
        return g.block(0, g.rows(), rel_snf_.rank, g.cols());
    }

    /// Indices (into generators()) of the torsion generators.
    std::vector<std::size_t> torsion_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rel_snf_.rank; ++i)
            if (rel_snf_.D(i, i) > 1) out.push_back(i);
        return out;
    }

    /// True iff every column of z is a cycle.
    bool are_cycles(const IntMatrix& z) const {
        return (out_snf_.V_inv * z).block(0, out_snf_.rank, 0, z.cols()).is_zero();
    }

private:
    SmithForm out_snf_;
    SmithForm rel_snf_;
    std::size_t dim_ = 0;
    std::size_t kernel_dim_ = 0;
    HomologyGroup group_;
};

inline void check_degree(const ChainComplex& c, int p) {
    if (p < 0 || p > c.top_dimension())
        throw DimensionError("homology: dimension " + std::to_string(p) + " outside 0.." + std::to_string(c.top_dimension()));
}

inline DegreeHomology degree_homology(const ChainComplex& c, int p) {
    check_degree(c, p);
    return DegreeHomology(c.boundary(p), c.boundary(p + 1));
}

/// Cochain degree p: kernel of d_{p+1}^T modulo image of d_p^T.
inline DegreeHomology degree_cohomology(const ChainComplex& c, int p) {
    check_degree(c, p);
    return DegreeHomology(c.boundary(p + 1).transpose(), c.boundary(p).transpose());
}

inline HomologyGroup homology(const ChainComplex& c, int p) { return degree_homology(c, p).group(); }
inline HomologyGroup cohomology(const ChainComplex& c, int p) { return degree_cohomology(c, p).group(); }

inline HomologyGroup homology(const NerveComplex& k, int p) { return homology(k.chain_complex(), p); }
inline HomologyGroup cohomology(const NerveComplex& k, int p) { return cohomology(k.chain_complex(), p); }

/// H_0 .. H_top.
inline std::vector<HomologyGroup> homology_table(const ChainComplex& c) {
    std::vector<HomologyGroup> out;
    for (int p = 0; p <= c.top_dimension(); ++p) out.push_back(homology(c, p));
    return out;
}

/// Coefficients in Z^r: the integral groups repeated r-fold.
inline HomologyGroup with_coefficient_rank(const HomologyGroup& g, std::size_t r) {
    HomologyGroup out;
    out.rank = g.rank * r;
    for (const auto& t : g.torsion)
        for (std::size_t i = 0; i < r; ++i) out.torsion.push_back(t);
    std::sort(out.torsion.begin(), out.torsion.end());
    return out;
}

struct DualityRow {
    int p = 0;
    HomologyGroup homology;          // H_p
    HomologyGroup cohomology;        // H^{n-p}
    bool holds = false;
};

struct DualityReport {
    int n = -1;
    std::vector<DualityRow> rows;
    bool holds() const {
        for (const auto& r : rows)
            if (!r.holds) return false;
        return true;
    }
};

/// Compares H_p with H^{n-p} for n the top dimension. This is an audit:
/// the identification fails on most complexes that are not manifolds.
inline DualityReport duality_audit(const NerveComplex& k) {
    DualityReport r;
    r.n = partial_dimension(k);
    const ChainComplex c = k.chain_complex();
    for (int p = 0; p <= r.n; ++p) {
        DualityRow row;
        row.p = p;
        row.homology = homology(c, p);
        row.cohomology = cohomology(c, r.n - p);
        row.holds = row.homology == row.cohomology;
        r.rows.push_back(std::move(row));
    }
    return r;
}

} // namespace cechent
