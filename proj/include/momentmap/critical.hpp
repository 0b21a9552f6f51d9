#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "momentmap/linalg.hpp"
#include "momentmap/poly.hpp"

namespace momentmap {

class RootFindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllPosedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct GivensRotation {
    double c;   // real by construction
    Complex s;
};

// Unitary G = [[c, s], [-conj(s), c]] with G [f; g]^T = [r; 0]^T.
inline GivensRotation make_givens(Complex f, Complex g) {
    if (g == Complex{}) return {1.0, Complex{}};
    if (f == Complex{}) return {0.0, std::conj(g) / std::abs(g)};
    double af = std::abs(f);
    double d = std::hypot(af, std::abs(g));
    return {af / d, (f / af) * (std::conj(g) / d)};
}

// Eigenvalue of the trailing 2x2 of h closest to the corner entry.
inline Complex wilkinson_shift(const DenseMatrix& h, int hi) {
    Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
    Complex c = h(hi, hi - 1), d = h(hi, hi);
    Complex tr = a + d;
    Complex disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

// One explicit shifted QR sweep on the active block [lo, hi] of an upper
// Hessenberg matrix: H - sI = QR, H <- RQ + sI via Givens rotations.
inline void qr_sweep(DenseMatrix& h, int lo, int hi, Complex shift) {
    std::vector<GivensRotation> rots;
    rots.reserve(static_cast<size_t>(hi - lo));
    for (int k = lo; k <= hi; ++k) h(k, k) -= shift;
    for (int k = lo; k < hi; ++k) {
        GivensRotation g = make_givens(h(k, k), h(k + 1, k));
        rots.push_back(g);
        for (int j = k; j <= hi; ++j) {
            Complex x = h(k, j), y = h(k + 1, j);
            h(k, j) = g.c * x + g.s * y;
            h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
        }
    }
    for (int k = lo; k < hi; ++k) {
        GivensRotation g = rots[static_cast<size_t>(k - lo)];
        for (int i = lo; i <= std::min(k + 2, hi); ++i) {
            Complex x = h(i, k), y = h(i, k + 1);
            h(i, k) = g.c * x + std::conj(g.s) * y;
            h(i, k + 1) = -g.s * x + g.c * y;
        }
    }
    for (int k = lo; k <= hi; ++k) h(k, k) += shift;
}

// Shifted QR with bottom-up deflation on a complex upper Hessenberg matrix.
inline std::vector<Complex> hessenberg_eigenvalues(DenseMatrix h) {
    const int n = h.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(h.max_abs(), 1e-300);
    std::vector<Complex> eig(static_cast<size_t>(n));

    int hi = n - 1;
    int sweeps = 0;
    while (hi >= 0) {
        int lo = hi;
        while (lo > 0) {
            double off = std::abs(h(lo, lo - 1));
            double local = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (off <= eps * (local > 0.0 ? local : scale)) {
                h(lo, lo - 1) = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[static_cast<size_t>(hi)] = h(hi, hi);
            --hi;
            sweeps = 0;
            continue;
        }
        if (++sweeps > 40 * (hi - lo + 1))
            throw RootFindingError("hessenberg_eigenvalues: QR iteration failed to deflate");
        Complex shift;
        if (sweeps % 11 == 0) {
            // exceptional shift to break rare limit cycles
            double kick = std::abs(h(hi, hi - 1));
            if (hi - 1 > lo) kick += std::abs(h(hi - 1, hi - 2));
            shift = h(hi, hi) + Complex{1.5 * kick, 0.0};
        } else {
            shift = wilkinson_shift(h, hi);
        }
        qr_sweep(h, lo, hi, shift);
    }
    return eig;
}

}  // namespace detail

/// Roots of p, found as eigenvalues of the monic companion matrix and then
/// polished with Newton steps on p itself. The leading coefficient must be
/// numerically meaningful; roots are returned sorted by real part, then
/// imaginary part.
inline std::vector<Complex> polynomial_roots(const Poly& p) {
    const int deg = p.degree();
    double max_coeff = 0.0;
    for (int s = 0; s <= deg; ++s) max_coeff = std::max(max_coeff, std::abs(p.coeff(s)));
    if (max_coeff == 0.0) throw IllPosedError("polynomial_roots: zero polynomial");
    if (deg == 0) return {};
    Complex lead = p.coeff(deg);
    if (std::abs(lead) <= 1e-12 * max_coeff)
        throw IllPosedError("polynomial_roots: leading coefficient numerically zero");

    DenseMatrix companion(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = Complex{1.0, 0.0};
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p.coeff(i) / lead;
    std::vector<Complex> roots = detail::hessenberg_eigenvalues(std::move(companion));

    const Poly dp = derivative(p);
    for (Complex& r : roots) {
        double bound = 1e-10 * max_coeff * std::pow(1.0 + std::abs(r), deg);
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            Complex v = evaluate(p, r);
            if (std::abs(v) <= bound) { ok = true; break; }
            Complex d = evaluate(dp, r);
            if (d == Complex{}) break;
            r -= v / d;
            bound = 1e-10 * max_coeff * std::pow(1.0 + std::abs(r), deg);
        }
        if (!ok && std::abs(evaluate(p, r)) > bound)
            throw RootFindingError("polynomial_roots: Newton polishing did not meet residual bound");
    }

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

/// Roots of P' (empty for n = 1; P' is then a nonzero constant).
inline std::vector<Complex> derivative_roots(const NormalizedPoly& p) {
    if (p.n() == 1) return {};
    return polynomial_roots(p.derivative_poly());
}

/// All critical-set structure in one report: the pairwise products
/// alpha_i conj(alpha_j) over roots of P', their minimum distance to 1,
/// and the closed-disk univalence flag (every root strictly outside the
/// closed unit disk).
struct CriticalReport {
    std::vector<Complex> roots;
    DenseMatrix pair_products;
    double min_distance;             // min |alpha_i conj(alpha_j) - 1|, +inf when no roots
    bool degenerate;                 // min_distance <= tolerance
    bool locally_univalent;          // all |alpha| > 1 + 1e-12
    double tolerance;
};

inline CriticalReport degeneracy_report(const NormalizedPoly& p, double tolerance = 1e-9) {
    if (!(tolerance > 0.0) || tolerance > 0.1)
        throw std::invalid_argument("degeneracy_report: tolerance must lie in (0, 0.1]");
    std::vector<Complex> roots = derivative_roots(p);
    const int m = static_cast<int>(roots.size());
    CriticalReport rep{std::move(roots), DenseMatrix(m, m),
                       std::numeric_limits<double>::infinity(), false, true, tolerance};
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Complex prod = rep.roots[static_cast<size_t>(i)] * std::conj(rep.roots[static_cast<size_t>(j)]);
            rep.pair_products(i, j) = prod;
            rep.min_distance = std::min(rep.min_distance, std::abs(prod - 1.0));
        }
        if (!(std::abs(rep.roots[static_cast<size_t>(i)]) > 1.0 + 1e-12)) rep.locally_univalent = false;
    }
    rep.degenerate = rep.min_distance <= tolerance;
    return rep;
}

/// True when every root of P' lies strictly outside the closed unit disk,
/// i.e. P' does not vanish on |z| <= 1 and the map is locally injective there.
inline bool local_univalence_check(const NormalizedPoly& p) {
    for (Complex r : derivative_roots(p))
        if (!(std::abs(r) > 1.0 + 1e-12)) return false;
    return true;
}

}  // namespace momentmap
