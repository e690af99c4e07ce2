#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matrix.hpp"

namespace cechent {

/// Integer polynomial, coefficients from the constant term upward.
/// The zero polynomial is the empty vector.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(std::size_t degree) {
        std::vector<Integer> c(degree + 1);
        c[degree] = 1;
        return Polynomial(std::move(c));
    }
    /// x - r
    static Polynomial linear_root(const Integer& r) { return Polynomial({-r, 1}); }

    const std::vector<Integer>& coefficients() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const Integer& leading() const { return c_.back(); }
    Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Integer> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Integer(i);
        return Polynomial(std::move(d));
    }

    Integer content() const {
        Integer g = 0;
        for (const auto& v : c_) g = boost::multiprecision::gcd(g, Integer(abs(v)));
        return g;
    }

    /// Divided by its content, with positive leading coefficient.
    Polynomial primitive() const {
        if (is_zero()) return {};
        Integer g = content();
        if (leading() < 0) g = -g;
        std::vector<Integer> out(c_);
        for (auto& v : out) v /= g;
        return Polynomial(std::move(out));
    }

    Integer evaluate(const Integer& x) const {
        Integer acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    template <class C>
    C evaluate_as(const C& x) const {
        C acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + C(static_cast<long double>(*it));
        return acc;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Integer> out(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(out));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Integer> out(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// Quotient and remainder when the division is exact over Z, i.e. the
    /// divisor's leading coefficient divides every step (always for monic).
    std::optional<std::pair<Polynomial, Polynomial>> divmod(const Polynomial& d) const {
        if (d.is_zero()) return std::nullopt;
        std::vector<Integer> r(c_);
        if (degree() < d.degree()) return std::make_pair(Polynomial(), *this);
        std::vector<Integer> q(c_.size() - d.c_.size() + 1);
        for (int i = degree(); i >= d.degree(); --i) {
            const Integer& top = r[static_cast<std::size_t>(i)];
            if (top == 0) continue;
            if (top % d.leading() != 0) return std::nullopt;
            Integer f = top / d.leading();
            q[static_cast<std::size_t>(i - d.degree())] = f;
            for (int j = 0; j <= d.degree(); ++j) r[static_cast<std::size_t>(i - d.degree() + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return std::make_pair(Polynomial(std::move(q)), Polynomial(std::move(r)));
    }

    bool divides(const Polynomial& p) const {
        auto qr = p.divmod(*this);
        return qr && qr->second.is_zero();
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Integer& v = c_[static_cast<std::size_t>(i)];
            if (v == 0) continue;
            Integer av = abs(v);
            s += (v < 0) ? (s.empty() ? "-" : " - ") : (s.empty() ? "" : " + ");
            if (av != 1 || i == 0) s += av.str();
            if (i >= 1) s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Integer> c_;
};

/// Primitive gcd over Q, normalised to positive leading coefficient.
inline Polynomial polynomial_gcd(Polynomial a, Polynomial b) {
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
        // pseudo-remainder: scale a so the division by b stays integral
        Polynomial r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Integer lb = b.leading();
            Integer lr = r.leading();
            std::vector<Integer> scaled(r.coefficients());
            for (auto& v : scaled) v *= lb;
            std::vector<Integer> sub(static_cast<std::size_t>(r.degree()) + 1);
            const int shift = r.degree() - b.degree();
            for (int j = 0; j <= b.degree(); ++j) sub[static_cast<std::size_t>(j + shift)] = lr * b.coeff(static_cast<std::size_t>(j));
            r = (Polynomial(std::move(scaled)) - Polynomial(std::move(sub))).primitive();
        }
        a = b;
        b = r;
    }
    return a.primitive();
}

/// Characteristic polynomial det(xI - A), exact.
///
/// det(tI - A) is evaluated at t = 0..n by fraction-free elimination and
/// the values are interpolated in the falling-factorial basis, whose
/// coefficients are integral for integer polynomials.
inline Polynomial characteristic_polynomial(const IntMatrix& a) {
    assert(a.square());
    const std::size_t n = a.rows();
    if (n == 0) return Polynomial({1});
    std::vector<Integer> values(n + 1);
    for (std::size_t t = 0; t <= n; ++t) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? Integer(t) : Integer(0)) - a(i, j);
        values[t] = determinant(std::move(m));
    }
    // forward differences: diff[k] = Δ^k p(0)
    std::vector<Integer> diff;
    std::vector<Integer> row = values;
    for (std::size_t k = 0; k <= n; ++k) {
        diff.push_back(row[0]);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
        row.pop_back();
    }
    Polynomial result;
    Polynomial falling({1}); // x (x-1) ... (x-k+1)
    Integer factorial = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            factorial *= Integer(k);
            falling = falling * Polynomial::linear_root(Integer(k - 1));
        }
        Integer ck = diff[k] / factorial;
        std::vector<Integer> scaled(falling.coefficients());
        for (auto& v : scaled) v *= ck;
        std::vector<Integer> sum(std::max(result.coefficients().size(), scaled.size()));
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = result.coeff(i) + (i < scaled.size() ? scaled[i] : Integer(0));
        result = Polynomial(std::move(sum));
    }
    return result;
}

/// Roots of an integer polynomial with per-root inclusion radii.
struct RootReport {
    std::vector<std::complex<double>> roots; // distinct roots
    std::vector<Integer> integer_roots;      // the exact subset
    double error_bound = 0.0;                // max inclusion radius over numeric roots
    double cauchy_bound = 0.0;               // 1 + max |a_i / a_n|
    bool within_cauchy = true;
};

namespace detail {

inline long double to_ld(const Integer& v) { return static_cast<long double>(v); }

inline std::vector<Integer> divisors_of(Integer v, std::size_t limit = 200000) {
    v = abs(v);
    std::vector<Integer> out;
    // trial division only for moderate constants; larger ones fall back
    // to the numeric path
    if (v == 0 || v > Integer(1000000000000LL)) return out;
    for (Integer d = 1; d * d <= v; ++d) {
        if (out.size() > limit) break;
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v) out.push_back(v / d);
        }
    }
    return out;
}

} // namespace detail

/// Distinct roots. Repeated factors are removed exactly first, so the
/// numeric step only sees simple roots; integer roots are exact.
inline RootReport polynomial_roots(const Polynomial& p) {
    RootReport rep;
    if (p.degree() <= 0) return rep;
    {
        long double lead = std::fabs(detail::to_ld(p.leading()));
        long double mx = 0;
        for (int i = 0; i < p.degree(); ++i) mx = std::max(mx, std::fabs(detail::to_ld(p.coeff(static_cast<std::size_t>(i)))) / lead);
        rep.cauchy_bound = static_cast<double>(1 + mx);
    }
    Polynomial g = polynomial_gcd(p, p.derivative());
    Polynomial q = p.primitive();
    if (g.degree() > 0) q = q.divmod(g)->first.primitive();

    // exact zero and integer roots
    if (q.coeff(0) == 0) {
        rep.integer_roots.push_back(0);
        q = q.divmod(Polynomial::monomial(1))->first;
    }
    if (q.degree() > 0) {
        for (const auto& d : detail::divisors_of(q.coeff(0))) {
            for (Integer r : {d, Integer(-d)}) {
                if (q.degree() <= 0) break;
                if (q.evaluate(r) == 0) {
                    rep.integer_roots.push_back(r);
                    q = q.divmod(Polynomial::linear_root(r))->first;
                }
            }
        }
    }
    std::sort(rep.integer_roots.begin(), rep.integer_roots.end());
    for (const auto& r : rep.integer_roots) rep.roots.emplace_back(static_cast<double>(r), 0.0);

    const int m = q.degree();
    if (m >= 1) {
        const long double lead = detail::to_ld(q.leading());
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
        for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) companion(i, m - 1) = static_cast<double>(-detail::to_ld(q.coeff(static_cast<std::size_t>(i))) / lead);
        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
        const Polynomial dq = q.derivative();
        using C = std::complex<long double>;
        for (int i = 0; i < m; ++i) {
            C z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
            for (int it = 0; it < 50; ++it) {
                C fz = q.evaluate_as<C>(z), dz = dq.evaluate_as<C>(z);
                if (std::abs(dz) == 0) break;
                C step = fz / dz;
                z -= step;
                if (std::abs(step) <= 1e-18L * std::max<long double>(1, std::abs(z))) break;
            }
            C fz = q.evaluate_as<C>(z), dz = dq.evaluate_as<C>(z);
            // some root lies within m |q(z)| / |q'(z)| of z
            long double radius = std::abs(dz) == 0 ? std::numeric_limits<long double>::infinity()
                                                   : static_cast<long double>(m) * std::abs(fz) / std::abs(dz);
            rep.error_bound = std::max(rep.error_bound, static_cast<double>(radius));
            rep.roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        }
    }
    for (const auto& r : rep.roots)
        if (std::abs(r) > rep.cauchy_bound * (1 + 1e-12)) rep.within_cauchy = false;
    return rep;
}

/// Spectrum of an integer endomorphism given as diagonal blocks
/// (one per homology degree).
struct SpectralSummary {
    IntMatrix matrix;
    Polynomial char_poly;
    std::vector<std::complex<double>> eigenvalues;
    std::vector<double> eigen_moduli;
    double error_bound = 0.0;
    double cauchy_bound = 0.0;
    double rho = 0.0;
    /// -inf when rho = 0 (nilpotent or empty).
    double log_rho = -std::numeric_limits<double>::infinity();
    /// Numeric roots are within the stated tolerance and inside the
    /// Cauchy bound.
    bool certified = true;
    /// rho is attained by an exact integer root.
    bool rho_exact = false;
};

inline constexpr double kEigenTolerance = 1e-9;

inline SpectralSummary spectral_summary(const std::vector<IntMatrix>& blocks, double tolerance = kEigenTolerance) {
    SpectralSummary s;
    s.matrix = block_diagonal(blocks);
    s.char_poly = Polynomial({1});
    for (const auto& b : blocks) {
        assert(b.square());
        s.char_poly = s.char_poly * characteristic_polynomial(b);
    }
    RootReport roots = polynomial_roots(s.char_poly);
    s.eigenvalues = roots.roots;
    s.error_bound = roots.error_bound;
    s.cauchy_bound = roots.cauchy_bound;
    s.certified = roots.within_cauchy && roots.error_bound <= tolerance;
    double best_numeric = 0.0;
    double best_exact = 0.0;
    for (const auto& r : roots.integer_roots) best_exact = std::max(best_exact, std::fabs(static_cast<double>(r)));
    for (std::size_t i = roots.integer_roots.size(); i < roots.roots.size(); ++i)
        best_numeric = std::max(best_numeric, std::abs(roots.roots[i]));
    for (const auto& r : s.eigenvalues) s.eigen_moduli.push_back(std::abs(r));
    std::sort(s.eigen_moduli.begin(), s.eigen_moduli.end(), std::greater<>());
    s.rho_exact = best_exact >= best_numeric && !roots.integer_roots.empty();
    s.rho = std::max(best_exact, best_numeric);
    s.log_rho = s.rho > 0 ? std::log(s.rho) : -std::numeric_limits<double>::infinity();
    return s;
}

inline SpectralSummary spectral_summary(const IntMatrix& m, double tolerance = kEigenTolerance) {
    return spectral_summary(std::vector<IntMatrix>{m}, tolerance);
}

} // namespace cechent
