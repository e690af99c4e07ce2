#pragma once
// Independent reference computations used only by the test suites.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <cechent/matrix.hpp>
#include <cechent/model.hpp>

namespace oracle {

using cechent::Integer;
using cechent::IntMatrix;

// Cofactor expansion; independent of the Bareiss routine.
inline Integer cofactor_det(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Integer det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        Integer term = m(0, j) * cofactor_det(minor);
        det += (j % 2 == 0) ? term : Integer(-term);
    }
    return det;
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n) return;
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1},
// D_k = gcd of all k x k minors.
inline std::vector<Integer> invariant_factors(const IntMatrix& a) {
    std::vector<Integer> out;
    Integer prev = 1;
    const std::size_t kmax = std::min(a.rows(), a.cols());
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        combinations(a.rows(), k, rs);
        combinations(a.cols(), k, cs);
        Integer g = 0;
        for (const auto& r : rs)
            for (const auto& c : cs) {
                IntMatrix m(k, k);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) m(i, j) = a(r[i], c[j]);
                g = boost::multiprecision::gcd(g, Integer(abs(cofactor_det(m))));
            }
        if (g == 0) break;
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// Smallest number of sets whose union is `universe`, by enumerating all
// subfamilies in order of size.
inline std::size_t exhaustive_min_cover(const std::vector<cechent::PointSet>& sets, const cechent::PointSet& universe) {
    const std::size_t n = sets.size();
    std::size_t best = n + 1;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size >= best) continue;
        cechent::PointSet u(universe.size());
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) u |= sets[i];
        if (universe.is_subset_of(u)) best = size;
    }
    return best;
}

// Berkowitz-free reference: Faddeev-LeVerrier over exact integers.
// Returns coefficients c_0..c_n of det(xI - A), c_n = 1.
inline std::vector<Integer> faddeev_leverrier(const IntMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<Integer> c(n + 1);
    c[n] = 1;
    IntMatrix m = IntMatrix(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        IntMatrix next = a * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        m = next;
        IntMatrix am = a * m;
        Integer tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / Integer(k);
    }
    return c;
}

// Random cover: each element draws points with probability 1/2; points
// left uncovered are assigned to a random element.
inline cechent::Cover random_cover(std::mt19937& rng, std::size_t points, std::size_t elements) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < points; ++i) names.push_back("p" + std::to_string(i));
    auto m = cechent::Model::from_successors("random", names, std::vector<std::vector<std::size_t>>(points, std::vector<std::size_t>{}));
    std::vector<cechent::PointSet> sets(elements, cechent::PointSet(points));
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> pick(0, elements - 1);
    for (auto& s : sets)
        for (std::size_t p = 0; p < points; ++p)
            if (coin(rng)) s.set(p);
    for (std::size_t p = 0; p < points; ++p) {
        bool hit = false;
        for (const auto& s : sets) hit = hit || s.test(p);
        if (!hit) sets[pick(rng)].set(p);
    }
    std::vector<cechent::CoverElement> out;
    for (std::size_t i = 0; i < elements; ++i) {
        if (sets[i].none()) sets[i].set(std::uniform_int_distribution<std::size_t>(0, points - 1)(rng));
        out.push_back({"U" + std::to_string(i), sets[i]});
    }
    return cechent::Cover::create(m, std::move(out));
}

// Nerve by brute force over every subset of elements.
inline std::set<std::vector<std::size_t>> brute_nerve(const cechent::Cover& a) {
    std::set<std::vector<std::size_t>> out;
    const std::size_t n = a.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        cechent::PointSet acc = a.base()->full_set();
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                acc &= a[i].points;
                s.push_back(i);
            }
        if (acc.any()) out.insert(s);
    }
    return out;
}

// Rank by fraction-free elimination with row-content reduction.
inline std::size_t rank_oracle(IntMatrix a) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && a(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0) continue;
            const Integer f = a(i, c), p = a(r, c);
            Integer g = 0;
            for (std::size_t j = 0; j < a.cols(); ++j) {
                a(i, j) = p * a(i, j) - f * a(r, j);
                g = boost::multiprecision::gcd(g, Integer(abs(a(i, j))));
            }
            if (g > 1)
                for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) /= g;
        }
        ++r;
    }
    return r;
}

} // namespace oracle
