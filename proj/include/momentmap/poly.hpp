#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace momentmap {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense univariate polynomial over C, coefficients in ascending powers.
/// The degree is declared, never inferred: trailing zero coefficients are
/// kept because band layouts (Sylvester, mirror) depend on the formal degree.
class Poly {
public:
    Poly() : coeffs_(1) {}

    explicit Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.resize(1);
        check_finite();
    }

    /// Pads with zeros up to declared_degree. Rejects a coefficient list
    /// longer than the declared degree allows.
    Poly(std::vector<Complex> coeffs, int declared_degree) : coeffs_(std::move(coeffs)) {
        if (declared_degree < 0)
            throw std::invalid_argument("Poly: negative degree");
        if (static_cast<int>(coeffs_.size()) > declared_degree + 1)
            throw std::invalid_argument("Poly: more coefficients than declared degree allows");
        coeffs_.resize(static_cast<size_t>(declared_degree) + 1);
        check_finite();
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    /// Coefficient of z^s; zero outside [0, degree].
    Complex coeff(int s) const {
        if (s < 0 || s > degree()) return Complex{};
        return coeffs_[static_cast<size_t>(s)];
    }

    std::span<const Complex> coeffs() const { return coeffs_; }

    /// Largest s with a nonzero coefficient (0 for the zero polynomial).
    int actual_degree() const {
        for (int s = degree(); s > 0; --s)
            if (coeffs_[static_cast<size_t>(s)] != Complex{}) return s;
        return 0;
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](Complex c) { return c == Complex{}; });
    }

private:
    void check_finite() const {
        for (Complex c : coeffs_)
            if (!is_finite(c)) throw std::invalid_argument("Poly: non-finite coefficient");
    }

    std::vector<Complex> coeffs_;
};

inline Complex coefficient_of(const Poly& p, int s) { return p.coeff(s); }

inline Poly derivative(const Poly& p) {
    if (p.degree() == 0) return Poly{};
    std::vector<Complex> d(static_cast<size_t>(p.degree()));
    for (int s = 1; s <= p.degree(); ++s)
        d[static_cast<size_t>(s - 1)] = static_cast<double>(s) * p.coeff(s);
    return Poly(std::move(d));
}

/// Convolution; result degree is the sum of the declared degrees.
inline Poly multiply(const Poly& a, const Poly& b) {
    std::vector<Complex> c(static_cast<size_t>(a.degree() + b.degree()) + 1);
    for (int i = 0; i <= a.degree(); ++i) {
        if (a.coeff(i) == Complex{}) continue;
        for (int j = 0; j <= b.degree(); ++j)
            c[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
    }
    return Poly(std::move(c));
}

inline Poly add(const Poly& a, const Poly& b) {
    std::vector<Complex> c(static_cast<size_t>(std::max(a.degree(), b.degree())) + 1);
    for (int s = 0; s < static_cast<int>(c.size()); ++s)
        c[static_cast<size_t>(s)] = a.coeff(s) + b.coeff(s);
    return Poly(std::move(c));
}

inline Poly scale(const Poly& p, Complex factor) {
    std::vector<Complex> c(p.coeffs().begin(), p.coeffs().end());
    for (Complex& x : c) x *= factor;
    return Poly(std::move(c));
}

inline Poly power(const Poly& p, int k) {
    if (k < 0) throw std::invalid_argument("power: negative exponent");
    Poly result(std::vector<Complex>{Complex{1.0, 0.0}});
    for (int i = 0; i < k; ++i) result = multiply(result, p);
    return result;
}

/// A*(z) = z^m conj(A)(1/z): coefficient j of the result is conj(coeff m-j).
/// m is the formal degree the mirror is taken at; it must cover the input.
inline Poly mirror_conjugate(const Poly& p, int m) {
    if (m < p.degree())
        throw std::invalid_argument("mirror_conjugate: formal degree below declared degree");
    std::vector<Complex> c(static_cast<size_t>(m) + 1);
    for (int j = 0; j <= m; ++j)
        c[static_cast<size_t>(j)] = std::conj(p.coeff(m - j));
    return Poly(std::move(c));
}

inline Complex evaluate(const Poly& p, Complex z) {
    Complex acc{};
    for (int s = p.degree(); s >= 0; --s) acc = acc * z + p.coeff(s);
    return acc;
}

/// P(z) = a_1 z + ... + a_n z^n with a_1 real positive and a_n != 0.
/// The constructor owns the normalization checks; everything downstream
/// can rely on them.
class NormalizedPoly {
public:
    NormalizedPoly(int n, std::vector<Complex> a) : n_(n), a_(std::move(a)) { validate(); }

    // Members initialize in declaration order (n_ before a_), so the size is
    // read before the vector is moved from.
    explicit NormalizedPoly(std::vector<Complex> a)
        : n_(static_cast<int>(a.size())), a_(std::move(a)) {
        validate();
    }

    int n() const { return n_; }

    /// 1-based: a(1) = a_1, ..., a(n) = a_n.
    Complex a(int j) const {
        if (j < 1 || j > n_) throw std::invalid_argument("NormalizedPoly: coefficient index out of range");
        return a_[static_cast<size_t>(j) - 1];
    }

    double a1() const { return a_[0].real(); }

    const std::vector<Complex>& coefficients() const { return a_; }

    /// Degree-n Poly with zero constant term.
    Poly to_poly() const {
        std::vector<Complex> c(static_cast<size_t>(n_) + 1);
        for (int j = 1; j <= n_; ++j) c[static_cast<size_t>(j)] = a_[static_cast<size_t>(j) - 1];
        return Poly(std::move(c));
    }

    /// Q = P', declared degree n-1; q_{j-1} = j a_j, so q_0 = a_1 > 0 and
    /// q_{n-1} = n a_n != 0.
    Poly derivative_poly() const { return derivative(to_poly()); }

private:
    void validate() const {
        if (n_ < 1) throw std::invalid_argument("NormalizedPoly: n must be >= 1");
        if (static_cast<int>(a_.size()) != n_)
            throw std::invalid_argument("NormalizedPoly: expected exactly n coefficients a_1..a_n");
        for (Complex c : a_)
            if (!is_finite(c)) throw std::invalid_argument("NormalizedPoly: non-finite coefficient");
        if (a_[0].imag() != 0.0)
            throw std::invalid_argument("NormalizedPoly: a_1 must be real");
        if (!(a_[0].real() > 0.0))
            throw std::invalid_argument("NormalizedPoly: a_1 must be positive");
        if (a_[static_cast<size_t>(n_) - 1] == Complex{})
            throw std::invalid_argument("NormalizedPoly: a_n must be nonzero");
    }

    int n_;
    std::vector<Complex> a_;
};

inline bool all_coefficients_real(const NormalizedPoly& p) {
    for (Complex c : p.coefficients())
        if (c.imag() != 0.0) return false;
    return true;
}

}  // namespace momentmap
