#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "momentmap/critical.hpp"
#include "momentmap/linalg.hpp"
#include "momentmap/poly.hpp"
#include "momentmap/resultant.hpp"
#include "momentmap/rng.hpp"

namespace momentmap {

/// Two supposedly-equal internal computations disagreed. Always a bug (or
/// an input far outside the numerical design range), never user error.
class InternalConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// mu_k as the Richardson sum over index tuples:
///   mu_k = sum s_1 a_{s_1} ... a_{s_{k+1}} conj(a_{s_1 + ... + s_{k+1}})
/// with every s_i >= 1 and the total sum at most n. The weight is the first
/// index only. Exact zero for k >= n (no admissible tuple).
inline Complex moment_richardson(const NormalizedPoly& p, int k) {
    if (k < 0) throw std::invalid_argument("moment_richardson: negative moment index");
    const int n = p.n();
    if (k >= n) return Complex{};

    double tuples = 1.0;  // C(n, k+1)
    for (int i = 1; i <= k + 1; ++i) tuples *= static_cast<double>(n - i + 1) / i;
    if (tuples > 1e8)
        throw std::invalid_argument("moment_richardson: tuple enumeration exceeds budget, use moment_laurent");

    Complex total{};
    auto walk = [&](auto&& self, int depth, int sum, Complex prod) -> void {
        if (depth == k + 1) {
            total += prod * std::conj(p.a(sum));
            return;
        }
        // indices still to place after this one each contribute at least 1
        for (int v = 1; sum + v + (k - depth) <= n; ++v) {
            Complex f = p.a(v);
            if (depth == 0) f *= static_cast<double>(v);
            self(self, depth + 1, sum + v, prod * f);
        }
    };
    walk(walk, 0, 0, Complex{1.0, 0.0});
    return total;
}

/// mu_k by Laurent coefficient extraction, computed both ways:
///   (k+1) mu_k = [z^n] P^{k+1} Q*      and      mu_k = [z^{n-1}] Q P^k P*
/// with Q = P', Q* and P* the mirror conjugates at degrees n-1 and n.
/// The two extractions must agree to 1e-11 relative; the first is returned.
inline Complex moment_laurent(const NormalizedPoly& p, int k) {
    if (k < 0) throw std::invalid_argument("moment_laurent: negative moment index");
    const int n = p.n();
    if (k >= n) return Complex{};

    const Poly P = p.to_poly();
    const Poly Q = p.derivative_poly();
    const Poly Qstar = mirror_conjugate(Q, n - 1);
    const Poly Pstar = mirror_conjugate(P, n);
    const Poly Pk = power(P, k);

    Complex first = coefficient_of(multiply(multiply(Pk, P), Qstar), n) / static_cast<double>(k + 1);
    Complex second = coefficient_of(multiply(multiply(Q, Pk), Pstar), n - 1);
    if (std::abs(first - second) > 1e-11 * (1.0 + std::max(std::abs(first), std::abs(second))))
        throw InternalConsistencyError("moment_laurent: the two coefficient extractions disagree");
    return first;
}

/// Node counts for the polar quadrature. The defaults are generous: the
/// integrand P^k |P'|^2 has angular frequencies up to n(k+1)-1 (trapezoid
/// is exact past that) and radial degree below 2(n(k+1)+2)-1.
struct QuadratureRule {
    int radial_nodes;
    int angular_nodes;

    static QuadratureRule for_moment(int n, int k) {
        return {n * (k + 1) + 2, 2 * n * (k + 1) + 1};
    }
};

namespace detail {

// Gauss-Legendre nodes and weights on [0, 1]: Newton iteration on P_g with
// the usual cosine initial guesses, symmetric pairs filled together.
inline void gauss_legendre_01(int g, std::vector<double>& nodes, std::vector<double>& weights) {
    if (g < 1) throw std::invalid_argument("gauss_legendre_01: need at least one node");
    nodes.assign(static_cast<size_t>(g), 0.0);
    weights.assign(static_cast<size_t>(g), 0.0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (g + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (g + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < g; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = g * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = 0.5 - 0.5 * z;
        nodes[static_cast<size_t>(g - 1 - i)] = 0.5 + 0.5 * z;
        double w = 1.0 / ((1.0 - z * z) * pp * pp);
        weights[static_cast<size_t>(i)] = w;
        weights[static_cast<size_t>(g - 1 - i)] = w;
    }
}

}  // namespace detail

/// mu_k = (1/pi) integral over the unit disk of P(z)^k |P'(z)|^2 dA,
/// by Gauss-Legendre in r times the periodic trapezoid rule in theta:
///   mu_k ~= (2/M) sum_i w_i r_i sum_j P^k |P'|^2 at z = r_i e^{i theta_j}.
/// Deliberately independent of the coefficient formulas: no convolutions,
/// no mirror conjugates, just evaluation. This is the oracle route.
/// Internal arithmetic runs in long double: for k >= n the angular sums
/// cancel to zero analytically, and the extended mantissa keeps the
/// floating-point residue of that cancellation near 1e-15 even when the
/// integrand itself is large.
inline Complex moment_quadrature(const NormalizedPoly& p, int k, const QuadratureRule& rule) {
    if (k < 0) throw std::invalid_argument("moment_quadrature: negative moment index");
    const int n = p.n();
    if (rule.radial_nodes < n * (k + 1) + 2 || rule.angular_nodes < 2 * n * (k + 1) + 1)
        throw std::invalid_argument("moment_quadrature: rule too coarse for exact integration");

    using LComplex = std::complex<long double>;
    std::vector<double> nodes, weights;
    detail::gauss_legendre_01(rule.radial_nodes, nodes, weights);

    std::vector<LComplex> pc(static_cast<size_t>(n) + 1), qc(static_cast<size_t>(n));
    for (int s = 0; s <= n; ++s) {
        Complex c = (s == 0) ? Complex{} : p.a(s);
        pc[static_cast<size_t>(s)] = LComplex{c.real(), c.imag()};
        if (s >= 1) qc[static_cast<size_t>(s) - 1] = static_cast<long double>(s) * pc[static_cast<size_t>(s)];
    }
    auto horner = [](const std::vector<LComplex>& c, LComplex z) {
        LComplex acc{};
        for (size_t s = c.size(); s-- > 0;) acc = acc * z + c[s];
        return acc;
    };

    const long double pi = std::acos(-1.0L);
    const int M = rule.angular_nodes;

    LComplex total{};
    for (int i = 0; i < rule.radial_nodes; ++i) {
        const long double r = nodes[static_cast<size_t>(i)];
        LComplex ring{};
        for (int j = 0; j < M; ++j) {
            const long double theta = 2.0L * pi * j / M;
            const LComplex z{r * std::cos(theta), r * std::sin(theta)};
            LComplex pk{1.0L, 0.0L};
            const LComplex pv = horner(pc, z);
            for (int t = 0; t < k; ++t) pk *= pv;
            const LComplex qv = horner(qc, z);
            ring += pk * (qv.real() * qv.real() + qv.imag() * qv.imag());
        }
        total += static_cast<long double>(weights[static_cast<size_t>(i)]) * r * ring;
    }
    total *= 2.0L / M;
    return Complex{static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

/// mu_0 (real, positive) and mu_1..mu_{n-1}; mu[k-1] holds mu_k.
struct MomentVector {
    int n;
    double mu0;
    std::vector<Complex> mu;
};

inline MomentVector moment_vector(const NormalizedPoly& p) {
    const int n = p.n();
    MomentVector mv{n, 0.0, {}};
    Complex m0 = moment_laurent(p, 0);
    if (std::abs(m0.imag()) > 1e-12 * (1.0 + std::abs(m0)))
        throw InternalConsistencyError("moment_vector: mu_0 came out non-real");
    mv.mu0 = m0.real();
    if (!(mv.mu0 > 0.0))
        throw InternalConsistencyError("moment_vector: mu_0 must be positive");
    mv.mu.reserve(static_cast<size_t>(n) - 1);
    for (int k = 1; k < n; ++k) mv.mu.push_back(moment_laurent(p, k));
    return mv;
}

/// d mu_k / d a_j = lambda_{n-j}(Q* P^k). The (k, j) = (0, 1) slot is the
/// special entry 2 a_1 of the Jacobian and is rejected here.
inline Complex wirtinger_partial_a(const NormalizedPoly& p, int k, int j) {
    const int n = p.n();
    if (k < 0 || k >= n) throw std::invalid_argument("wirtinger_partial_a: moment index out of range");
    if (j < 1 || j > n) throw std::invalid_argument("wirtinger_partial_a: coefficient index out of range");
    if (k == 0 && j == 1)
        throw std::invalid_argument("wirtinger_partial_a: (0, 1) is the special 2 a_1 entry, not a Wirtinger partial");
    const Poly Qstar = mirror_conjugate(p.derivative_poly(), n - 1);
    return coefficient_of(multiply(Qstar, power(p.to_poly(), k)), n - j);
}

/// d mu_k / d conj(a_j) = lambda_{j-1}(Q P^k), defined for j >= 2 only
/// (a_1 is kept real, it has no independent conjugate).
inline Complex wirtinger_partial_abar(const NormalizedPoly& p, int k, int j) {
    const int n = p.n();
    if (k < 0 || k >= n) throw std::invalid_argument("wirtinger_partial_abar: moment index out of range");
    if (j < 2 || j > n) throw std::invalid_argument("wirtinger_partial_abar: coefficient index must be in [2, n]");
    return coefficient_of(multiply(p.derivative_poly(), power(p.to_poly(), k)), j - 1);
}

/// Full (2n-1) x (2n-1) Wirtinger matrix. Rows are ordered
/// (conj mu_{n-1}, ..., conj mu_1, mu_0, mu_1, ..., mu_{n-1}) and columns
/// (conj a_n, ..., conj a_2, a_1, a_2, ..., a_n). The conjugate-moment rows
/// are filled by the mirror rule: entry(conj mu_k, conj a_j) is the
/// conjugate of entry(mu_k, a_j), and symmetrically.
inline DenseMatrix jacobian_matrix(const NormalizedPoly& p) {
    const int n = p.n();
    const int N = 2 * n - 1;
    const Poly P = p.to_poly();
    const Poly Q = p.derivative_poly();
    const Poly Qstar = mirror_conjugate(Q, n - 1);

    DenseMatrix J(N, N);
    Poly QstarPk = Qstar;
    Poly QPk = Q;
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            QstarPk = multiply(QstarPk, P);
            QPk = multiply(QPk, P);
        }
        const int row = n - 1 + k;
        for (int j = 1; j <= n; ++j) {
            Complex v = (k == 0 && j == 1) ? Complex{2.0 * p.a1(), 0.0}
                                           : coefficient_of(QstarPk, n - j);
            J(row, j == 1 ? n - 1 : n - 2 + j) = v;
        }
        for (int j = 2; j <= n; ++j) J(row, n - j) = coefficient_of(QPk, j - 1);
    }
    for (int k = 1; k < n; ++k) {
        const int row = n - 1 - k;
        const int src = n - 1 + k;
        J(row, n - 1) = std::conj(J(src, n - 1));
        for (int j = 2; j <= n; ++j) {
            J(row, n - j) = std::conj(J(src, n - 2 + j));
            J(row, n - 2 + j) = std::conj(J(src, n - j));
        }
    }
    return J;
}

/// Route 1: determinant of the Wirtinger matrix. Real-valued up to rounding.
inline Complex jacobian_analytic(const NormalizedPoly& p) {
    return determinant(jacobian_matrix(p));
}

/// Route 2: J = 2 a_1^{n^2 - n + 1} Res(P', P'*).
inline Complex jacobian_closed_form(const NormalizedPoly& p) {
    const int n = p.n();
    return 2.0 * std::pow(p.a1(), n * n - n + 1) * mirror_resultant(p);
}

/// The structured coefficient matrix behind route 3, built column by
/// column from q_j = (j+1) a_{j+1} (coefficients of P'): the first n-1
/// columns carry (q_0, conj q_1, ..., conj q_{n-1}) bands, the middle
/// column peaks at 2 q_0, the last n-1 columns carry plain q bands.
inline DenseMatrix y_matrix(const NormalizedPoly& p) {
    const int n = p.n();
    const int N = 2 * n - 1;
    const Poly Q = p.derivative_poly();
    auto q = [&](int i) { return Q.coeff(i); };

    DenseMatrix Y(N, N);
    for (int j = 1; j <= N; ++j) {
        if (j < n) {
            for (int i = j; i <= j + n - 1; ++i)
                Y(i - 1, j - 1) = (i == j) ? q(0) : std::conj(q(i - j));
        } else if (j == n) {
            for (int i = 1; i <= N; ++i) {
                if (i < n) Y(i - 1, j - 1) = q(n - i);
                else if (i == n) Y(i - 1, j - 1) = 2.0 * q(0);
                else Y(i - 1, j - 1) = std::conj(q(i - n));
            }
        } else {
            for (int i = j - n + 1; i <= j; ++i) Y(i - 1, j - 1) = q(j - i);
        }
    }
    return Y;
}

/// Route 3: J = (-1)^{n-1} a_1^{n^2 - n} det Y. The sign is the parity of
/// reversing all 2n-1 columns between the gradient ordering
/// (a_n..a_2, a_1, conj a_2..conj a_n) and the Jacobian ordering above;
/// the wedge substitution itself is unitriangular and sign-free.
inline Complex jacobian_y_matrix(const NormalizedPoly& p) {
    const int n = p.n();
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(p.a1(), n * n - n) * determinant(y_matrix(p));
}

/// Route 4: central finite differences of the moment map in the real
/// embedding (a_1, Re a_2, Im a_2, ...) -> (mu_0, Re mu_1, Im mu_1, ...).
/// Returns the signed real determinant; its absolute value matches the
/// complex routes. Step is clamped to a range where the quadratic error
/// term still beats cancellation.
inline double jacobian_finite_difference(const NormalizedPoly& p, double step = 1e-6) {
    if (!(step >= 1e-8 && step <= 1e-3))
        throw std::invalid_argument("jacobian_finite_difference: step must lie in [1e-8, 1e-3]");
    const int n = p.n();
    if (p.a1() <= step)
        throw std::invalid_argument("jacobian_finite_difference: step would drive a_1 nonpositive");
    const int N = 2 * n - 1;

    auto moments_embedded = [n, N](const std::vector<Complex>& coeffs) {
        NormalizedPoly q(n, coeffs);
        std::vector<double> out(static_cast<size_t>(N));
        out[0] = moment_laurent(q, 0).real();
        for (int k = 1; k < n; ++k) {
            Complex mk = moment_laurent(q, k);
            out[static_cast<size_t>(2 * k - 1)] = mk.real();
            out[static_cast<size_t>(2 * k)] = mk.imag();
        }
        return out;
    };

    const std::vector<Complex>& base = p.coefficients();
    DenseMatrix Jr(N, N);
    for (int col = 0; col < N; ++col) {
        std::vector<Complex> plus = base, minus = base;
        if (col == 0) {
            plus[0] += step;
            minus[0] -= step;
        } else {
            const size_t j = static_cast<size_t>((col + 1) / 2);  // perturbs a_{j+1}
            const Complex delta = (col % 2 == 1) ? Complex{step, 0.0} : Complex{0.0, step};
            plus[j] += delta;
            minus[j] -= delta;
        }
        std::vector<double> mp = moments_embedded(plus);
        std::vector<double> mm = moments_embedded(minus);
        for (int r = 0; r < N; ++r)
            Jr(r, col) = Complex{(mp[static_cast<size_t>(r)] - mm[static_cast<size_t>(r)]) / (2.0 * step), 0.0};
    }
    return determinant(Jr).real();
}

inline double relative_gap(double a, double b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline double relative_gap(Complex a, Complex b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// All four routes side by side, with their pairwise gaps. Construction
/// fails if the analytic determinant develops a non-negligible imaginary
/// part; that would mean the matrix assembly itself is wrong.
struct JacobianReport {
    int n;
    Complex analytic;
    Complex closed_form;
    Complex y_route;
    double finite_difference;
    double rel_analytic_closed;
    double rel_analytic_y;
    double rel_closed_y;
    double rel_abs_fd;
};

inline JacobianReport jacobian_report(const NormalizedPoly& p, double fd_step = 1e-6) {
    JacobianReport r{};
    r.n = p.n();
    r.analytic = jacobian_analytic(p);
    if (std::abs(r.analytic.imag()) > 1e-9 * (1.0 + std::abs(r.analytic)))
        throw InternalConsistencyError("jacobian_report: analytic determinant is not real");
    r.closed_form = jacobian_closed_form(p);
    r.y_route = jacobian_y_matrix(p);
    r.finite_difference = jacobian_finite_difference(p, fd_step);
    r.rel_analytic_closed = relative_gap(r.analytic, r.closed_form);
    r.rel_analytic_y = relative_gap(r.analytic, r.y_route);
    r.rel_closed_y = relative_gap(r.closed_form, r.y_route);
    r.rel_abs_fd = relative_gap(std::abs(r.analytic), std::abs(r.finite_difference));
    return r;
}

/// n x n Jacobian of the restriction to real coefficients,
/// d mu_k / d a_j = (partial wrt a_j) + (partial wrt conj a_j), with the
/// 2 a_1 special entry at (0, 1). Real output for real input.
inline double real_jacobian(const NormalizedPoly& p) {
    if (!all_coefficients_real(p))
        throw std::invalid_argument("real_jacobian: all coefficients must be real");
    const int n = p.n();
    DenseMatrix J(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 1; j <= n; ++j) {
            Complex v;
            if (j == 1)
                v = (k == 0) ? Complex{2.0 * p.a1(), 0.0} : wirtinger_partial_a(p, k, 1);
            else
                v = wirtinger_partial_a(p, k, j) + wirtinger_partial_abar(p, k, j);
            J(k, j - 1) = v;
        }
    return determinant(J).real();
}

/// Both sides of the squared-Jacobian identity for real coefficients:
///   J_R^2 = 4 (-1)^{n-1} a_1^{n(n-1)} Res(P', P'*) P'(-1) P'(1).
/// Returned as (lhs, rhs) so callers can decide the comparison tolerance.
inline std::pair<double, double> real_square_identity(const NormalizedPoly& p) {
    if (!all_coefficients_real(p))
        throw std::invalid_argument("real_square_identity: all coefficients must be real");
    const int n = p.n();
    const double jr = real_jacobian(p);
    const Poly Q = p.derivative_poly();
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    Complex rhs = 4.0 * sign * std::pow(p.a1(), n * (n - 1)) * mirror_resultant(p) *
                  evaluate(Q, Complex{-1.0, 0.0}) * evaluate(Q, Complex{1.0, 0.0});
    return {jr * jr, rhs.real()};
}

/// Candidate reading of "the principal Hurwitz determinant of P'*": which
/// order the leading principal block is taken at (a fixed order, or the
/// degree minus a fixed offset) and which way the coefficients are read.
struct HurwitzConvention {
    enum class Order { absolute, relative_to_degree };
    Order kind = Order::absolute;
    int value = 0;
    HurwitzDirection direction = HurwitzDirection::descending;

    int order_for(int degree) const {
        return kind == Order::absolute ? value : degree - value;
    }
};

/// J_R = 2^{-n(n-3)/2} a_1^{n(n-1)/2} P'(1) P'(-1) Delta(P'*), where Delta
/// is the Hurwitz determinant under the given convention. Only meaningful
/// once a convention has been calibrated; see calibrate_hurwitz.
inline double ullemar_real_formula(const NormalizedPoly& p, const HurwitzConvention& convention) {
    if (!all_coefficients_real(p))
        throw std::invalid_argument("ullemar_real_formula: all coefficients must be real");
    const int n = p.n();
    const Poly Q = p.derivative_poly();
    const Poly Qstar = mirror_conjugate(Q, n - 1);
    const int order = convention.order_for(n - 1);
    if (order < 0 || order > n - 1)
        throw std::invalid_argument("ullemar_real_formula: convention order out of range for this degree");
    Complex delta = determinant(hurwitz_matrix(Qstar, order, convention.direction));
    double lead = std::pow(2.0, -0.5 * n * (n - 3)) * std::pow(p.a1(), 0.5 * n * (n - 1));
    Complex result = lead * evaluate(Q, Complex{1.0, 0.0}) * evaluate(Q, Complex{-1.0, 0.0}) * delta;
    return result.real();
}

struct HurwitzCandidateResult {
    HurwitzConvention convention;
    bool matches_n2 = false;
    bool matches_n3 = false;
    double worst_gap_n2 = 0.0;
    double worst_gap_n3 = 0.0;
};

/// One sample of what the Hurwitz factor would have to be: jacobian is the
/// exact real Jacobian, prefactor is the formula without Delta, and
/// delta_required their ratio.
struct HurwitzMismatchSample {
    int n;
    double jacobian;
    double prefactor;
    double delta_required;
};

struct HurwitzCalibration {
    bool calibrated = false;
    HurwitzConvention convention{};
    std::vector<HurwitzCandidateResult> candidates;
    std::vector<HurwitzMismatchSample> samples;
};

/// Tries every candidate convention against the exact real Jacobian on
/// random real polynomials at n = 2 and n = 3 and keeps one only if it
/// matches both. Whatever the outcome, a few required-factor samples per
/// degree (n = 2..5) are recorded so a failed calibration still documents
/// exactly which factor the formula is missing.
inline HurwitzCalibration calibrate_hurwitz(uint64_t seed = 0x5eedULL) {
    HurwitzCalibration cal;
    for (HurwitzDirection dir : {HurwitzDirection::ascending, HurwitzDirection::descending}) {
        cal.candidates.push_back({{HurwitzConvention::Order::absolute, 0, dir}, false, false, 0.0, 0.0});
        cal.candidates.push_back({{HurwitzConvention::Order::relative_to_degree, 1, dir}, false, false, 0.0, 0.0});
        cal.candidates.push_back({{HurwitzConvention::Order::relative_to_degree, 0, dir}, false, false, 0.0, 0.0});
    }

    constexpr int kSamples = 20;
    for (auto& cand : cal.candidates) {
        for (int n : {2, 3}) {
            Rng rng(derive_stream(seed, static_cast<uint64_t>(n)));
            double worst = 0.0;
            for (int t = 0; t < kSamples; ++t) {
                NormalizedPoly p = random_normalized_poly(rng, n, true);
                double jr = real_jacobian(p);
                double formula = ullemar_real_formula(p, cand.convention);
                worst = std::max(worst, relative_gap(jr, formula));
            }
            if (n == 2) {
                cand.worst_gap_n2 = worst;
                cand.matches_n2 = worst <= 1e-6;
            } else {
                cand.worst_gap_n3 = worst;
                cand.matches_n3 = worst <= 1e-6;
            }
        }
    }

    for (const auto& cand : cal.candidates)
        if (cand.matches_n2 && cand.matches_n3 && !cal.calibrated) {
            cal.calibrated = true;
            cal.convention = cand.convention;
        }

    for (int n = 2; n <= 5; ++n) {
        Rng rng(derive_stream(seed, 100 + static_cast<uint64_t>(n)));
        int kept = 0;
        while (kept < 3) {
            NormalizedPoly p = random_normalized_poly(rng, n, true);
            const Poly Q = p.derivative_poly();
            double prefactor = std::pow(2.0, -0.5 * n * (n - 3)) *
                               std::pow(p.a1(), 0.5 * n * (n - 1)) *
                               evaluate(Q, Complex{1.0, 0.0}).real() *
                               evaluate(Q, Complex{-1.0, 0.0}).real();
            if (std::abs(prefactor) < 1e-9) continue;
            double jr = real_jacobian(p);
            cal.samples.push_back({n, jr, prefactor, jr / prefactor});
            ++kept;
        }
    }
    return cal;
}

}  // namespace momentmap
