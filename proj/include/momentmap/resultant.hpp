#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "momentmap/critical.hpp"
#include "momentmap/linalg.hpp"
#include "momentmap/poly.hpp"

namespace momentmap {

/// Sylvester matrix of A (formal degree m) and B (formal degree k), size
/// (m+k) x (m+k). Rows carry the coefficients in descending order, shifted
/// right one column per row: k rows of A bands, then m rows of B bands.
/// This is the layout whose determinant equals the root-product resultant
///     Res(A, B) = lc(A)^k lc(B)^m prod_{i,j} (alpha_i - beta_j),
/// which fixes the orientation; laying the bands in ascending order flips
/// the sign for odd mk. m = k = 0 yields the empty matrix (determinant 1).
inline DenseMatrix sylvester_matrix(const Poly& a, int m, const Poly& b, int k) {
    if (m < 0 || k < 0) throw std::invalid_argument("sylvester_matrix: negative formal degree");
    if (a.actual_degree() > m)
        throw std::invalid_argument("sylvester_matrix: formal degree of A below its actual degree");
    if (b.actual_degree() > k)
        throw std::invalid_argument("sylvester_matrix: formal degree of B below its actual degree");

    DenseMatrix s(m + k, m + k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c <= m; ++c) s(r, r + c) = a.coeff(m - c);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= k; ++c) s(k + r, r + c) = b.coeff(k - c);
    return s;
}

inline Complex resultant_det(const Poly& a, int m, const Poly& b, int k) {
    return determinant(sylvester_matrix(a, m, b, k));
}

/// Root-product oracle for Res(A, B) at the declared degrees. Needs both
/// leading coefficients to be numerically meaningful (polynomial_roots
/// rejects the rest).
inline Complex resultant_from_roots(const Poly& a, const Poly& b) {
    const int m = a.degree(), k = b.degree();
    std::vector<Complex> alphas = m > 0 ? polynomial_roots(a) : std::vector<Complex>{};
    std::vector<Complex> betas = k > 0 ? polynomial_roots(b) : std::vector<Complex>{};
    Complex result = std::pow(a.coeff(m), static_cast<double>(k)) *
                     std::pow(b.coeff(k), static_cast<double>(m));
    for (Complex alpha : alphas)
        for (Complex beta : betas) result *= alpha - beta;
    return result;
}

/// Res(P', P'*), both at formal degree n-1. Vanishes exactly on the critical
/// set (pairs of P' roots with alpha_i conj(alpha_j) = 1).
inline Complex mirror_resultant(const NormalizedPoly& p) {
    Poly q = p.derivative_poly();
    Poly qstar = mirror_conjugate(q, p.n() - 1);
    return resultant_det(q, p.n() - 1, qstar, p.n() - 1);
}

enum class HurwitzDirection { ascending, descending };

/// Leading principal block of the Hurwitz pattern H_ij = c_{2j-i} (1-based,
/// zero outside range), where c_s reads the coefficients of q ascending or
/// descending. order = 0 gives the empty matrix.
inline DenseMatrix hurwitz_matrix(const Poly& q, int order, HurwitzDirection direction) {
    if (order < 0 || order > q.degree())
        throw std::invalid_argument("hurwitz_matrix: order must lie in [0, degree]");
    const int deg = q.degree();
    auto c = [&](int s) -> Complex {
        if (s < 0 || s > deg) return Complex{};
        return direction == HurwitzDirection::ascending ? q.coeff(s) : q.coeff(deg - s);
    };
    DenseMatrix h(order, order);
    for (int i = 1; i <= order; ++i)
        for (int j = 1; j <= order; ++j) h(i - 1, j - 1) = c(2 * j - i);
    return h;
}

}  // namespace momentmap
