#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "momentmap/critical.hpp"
#include "momentmap/linalg.hpp"
#include "momentmap/moments.hpp"
#include "momentmap/poly.hpp"

namespace momentmap {

/// Coefficients flattened to 2n-1 reals: (a_1, Re a_2, Im a_2, ..., Im a_n).
inline std::vector<double> embed_real(const NormalizedPoly& p) {
    std::vector<double> x(static_cast<size_t>(2 * p.n() - 1));
    x[0] = p.a1();
    for (int j = 2; j <= p.n(); ++j) {
        x[static_cast<size_t>(2 * j - 3)] = p.a(j).real();
        x[static_cast<size_t>(2 * j - 2)] = p.a(j).imag();
    }
    return x;
}

/// Inverse of embed_real. Normalization (a_1 > 0, a_n != 0) is re-checked
/// by the NormalizedPoly constructor.
inline NormalizedPoly restore_from_embedding(int n, std::span<const double> x) {
    if (static_cast<int>(x.size()) != 2 * n - 1)
        throw std::invalid_argument("restore_from_embedding: expected 2n-1 values");
    std::vector<Complex> a(static_cast<size_t>(n));
    a[0] = Complex{x[0], 0.0};
    for (int j = 2; j <= n; ++j)
        a[static_cast<size_t>(j) - 1] = Complex{x[static_cast<size_t>(2 * j - 3)],
                                                x[static_cast<size_t>(2 * j - 2)]};
    return NormalizedPoly(n, std::move(a));
}

/// Moments flattened the same way: (mu_0, Re mu_1, Im mu_1, ..., Im mu_{n-1}).
inline std::vector<double> embed_moments(const MomentVector& mv) {
    if (static_cast<int>(mv.mu.size()) != mv.n - 1)
        throw std::invalid_argument("embed_moments: moment vector has wrong length");
    std::vector<double> m(static_cast<size_t>(2 * mv.n - 1));
    m[0] = mv.mu0;
    for (int k = 1; k < mv.n; ++k) {
        m[static_cast<size_t>(2 * k - 1)] = mv.mu[static_cast<size_t>(k) - 1].real();
        m[static_cast<size_t>(2 * k)] = mv.mu[static_cast<size_t>(k) - 1].imag();
    }
    return m;
}

/// Real Jacobian of the embedded map, assembled from the Wirtinger matrix.
/// For j >= 2 with A = d mu_k/d a_j and B = d mu_k/d conj(a_j):
///   du/dx = Re(A+B),  du/dy = -Im(A-B),  dv/dx = Im(A+B),  dv/dy = Re(A-B);
/// the a_1 column comes straight from the matrix (that entry is already the
/// total derivative, a_1 being real). Entries are real; the matrix is kept
/// complex so the shared LU can run on it.
inline DenseMatrix wirtinger_to_real(const DenseMatrix& w, int n) {
    const int N = 2 * n - 1;
    if (w.rows() != N || w.cols() != N)
        throw std::invalid_argument("wirtinger_to_real: matrix size does not match n");
    const int col_a1 = n - 1;
    DenseMatrix r(N, N);
    for (int k = 0; k < n; ++k) {
        const int src = n - 1 + k;
        const int row_u = k == 0 ? 0 : 2 * k - 1;
        const Complex t = w(src, col_a1);
        r(row_u, 0) = Complex{t.real(), 0.0};
        if (k > 0) r(2 * k, 0) = Complex{t.imag(), 0.0};
        for (int j = 2; j <= n; ++j) {
            const Complex a = w(src, n - 2 + j);
            const Complex b = w(src, n - j);
            const Complex sum = a + b, diff = a - b;
            const int cx = 2 * j - 3, cy = 2 * j - 2;
            r(row_u, cx) = Complex{sum.real(), 0.0};
            r(row_u, cy) = Complex{-diff.imag(), 0.0};
            if (k > 0) {
                r(2 * k, cx) = Complex{sum.imag(), 0.0};
                r(2 * k, cy) = Complex{diff.real(), 0.0};
            }
        }
    }
    return r;
}

struct NewtonOptions {
    int max_iterations = 25;
    double residual_tol = 1e-10;
    double step_damping = 1.0;
    double min_jacobian_modulus = 1e-12;
};

enum class NewtonFailure { none, singular_jacobian, no_convergence, a1_collapse };

inline const char* to_string(NewtonFailure f) {
    switch (f) {
        case NewtonFailure::none: return "none";
        case NewtonFailure::singular_jacobian: return "singular_jacobian";
        case NewtonFailure::no_convergence: return "no_convergence";
        case NewtonFailure::a1_collapse: return "a1_collapse";
    }
    return "unknown";
}

/// Full iteration history: one entry per residual evaluation, so a run that
/// converges after s steps carries s+1 iterates.
struct NewtonTrace {
    std::vector<NormalizedPoly> iterates;
    std::vector<double> residual_norms;     // max-norm over embedded moments
    std::vector<double> jacobian_moduli;    // |det W| at each iterate
    bool converged = false;
    NewtonFailure failure = NewtonFailure::none;

    const NormalizedPoly& result() const {
        if (iterates.empty()) throw std::logic_error("NewtonTrace: empty trace");
        return iterates.back();
    }
};

/// Damped Newton on the embedded moment map. Steps that would push a_1
/// nonpositive (or land exactly on a_n = 0) are re-tried with halved
/// damping; if damping collapses below 1e-6 the run is tagged a1_collapse.
inline NewtonTrace newton_invert(const MomentVector& target, const NormalizedPoly& initial,
                                 const NewtonOptions& options = {}) {
    const int n = initial.n();
    if (target.n != n) throw std::invalid_argument("newton_invert: target and initial n differ");
    if (!(target.mu0 > 0.0)) throw std::invalid_argument("newton_invert: target mu_0 must be positive");
    if (static_cast<int>(target.mu.size()) != n - 1)
        throw std::invalid_argument("newton_invert: target moment vector has wrong length");
    if (options.max_iterations < 1 || !(options.residual_tol > 0.0) ||
        !(options.step_damping > 0.0) || options.step_damping > 1.0 ||
        !(options.min_jacobian_modulus >= 0.0))
        throw std::invalid_argument("newton_invert: bad options");

    const int N = 2 * n - 1;
    const std::vector<double> goal = embed_moments(target);

    NewtonTrace trace;
    NormalizedPoly current = initial;
    for (int iter = 0;; ++iter) {
        const std::vector<double> m = embed_moments(moment_vector(current));
        double residual = 0.0;
        for (int i = 0; i < N; ++i)
            residual = std::max(residual, std::abs(m[static_cast<size_t>(i)] - goal[static_cast<size_t>(i)]));
        const DenseMatrix w = jacobian_matrix(current);
        const double modulus = std::abs(determinant(w));

        trace.iterates.push_back(current);
        trace.residual_norms.push_back(residual);
        trace.jacobian_moduli.push_back(modulus);

        if (residual <= options.residual_tol) {
            trace.converged = true;
            return trace;
        }
        if (iter >= options.max_iterations) {
            trace.failure = NewtonFailure::no_convergence;
            return trace;
        }
        if (modulus <= options.min_jacobian_modulus) {
            trace.failure = NewtonFailure::singular_jacobian;
            return trace;
        }

        std::vector<Complex> rhs(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i)
            rhs[static_cast<size_t>(i)] = Complex{goal[static_cast<size_t>(i)] - m[static_cast<size_t>(i)], 0.0};
        std::vector<Complex> delta;
        try {
            delta = solve(wirtinger_to_real(w, n), rhs);
        } catch (const SingularMatrixError&) {
            trace.failure = NewtonFailure::singular_jacobian;
            return trace;
        }

        const std::vector<double> x = embed_real(current);
        double damping = options.step_damping;
        bool stepped = false;
        while (damping >= 1e-6) {
            std::vector<double> next(x);
            for (int i = 0; i < N; ++i)
                next[static_cast<size_t>(i)] += damping * delta[static_cast<size_t>(i)].real();
            if (next[0] > 0.0) {
                try {
                    current = restore_from_embedding(n, next);
                    stepped = true;
                    break;
                } catch (const std::invalid_argument&) {
                    // a_n landed exactly on zero; treat like a bad step
                }
            }
            damping *= 0.5;
        }
        if (!stepped) {
            trace.failure = NewtonFailure::a1_collapse;
            return trace;
        }
    }
}

enum class HeleShawFailure { none, newton, lost_univalence };

inline const char* to_string(HeleShawFailure f) {
    switch (f) {
        case HeleShawFailure::none: return "none";
        case HeleShawFailure::newton: return "newton";
        case HeleShawFailure::lost_univalence: return "lost_univalence";
    }
    return "unknown";
}

/// States at t_i = i t_end / steps, t_0 = 0 included. On failure the trace
/// keeps everything computed so far, tagged with the time that broke.
struct HeleShawTrace {
    std::vector<double> times;
    std::vector<NormalizedPoly> states;
    std::vector<double> areas;                 // pi mu_0(t), exact area of the image domain
    std::vector<double> conservation_errors;   // max_k>=1 |mu_k(t) - mu_k(0)|
    bool completed = false;
    double failed_at_time = 0.0;
    HeleShawFailure failure = HeleShawFailure::none;
    NewtonFailure newton_failure = NewtonFailure::none;
};

/// Injection-driven evolution: mu_1..mu_{n-1} frozen, mu_0 grows linearly
/// at the given rate (rate 0 holds the domain still). Each step is a Newton
/// inversion seeded with the previous state.
inline HeleShawTrace heleshaw_evolve(const NormalizedPoly& initial, double rate, double t_end,
                                     int steps, const NewtonOptions& options = {}) {
    if (!(rate >= 0.0)) throw std::invalid_argument("heleshaw_evolve: rate must be nonnegative");
    if (!(t_end > 0.0)) throw std::invalid_argument("heleshaw_evolve: t_end must be positive");
    if (steps < 1) throw std::invalid_argument("heleshaw_evolve: need at least one step");
    CriticalReport crit = degeneracy_report(initial);
    if (crit.degenerate || !crit.locally_univalent)
        throw std::invalid_argument("heleshaw_evolve: initial polynomial is degenerate or not locally univalent");

    const double pi = std::acos(-1.0);
    const MomentVector base = moment_vector(initial);

    HeleShawTrace trace;
    trace.times.push_back(0.0);
    trace.states.push_back(initial);
    trace.areas.push_back(pi * base.mu0);
    trace.conservation_errors.push_back(0.0);

    NormalizedPoly current = initial;
    for (int i = 1; i <= steps; ++i) {
        const double t = t_end * i / steps;
        MomentVector target{base.n, base.mu0 + rate * t, base.mu};
        NewtonTrace nt = newton_invert(target, current, options);
        if (!nt.converged) {
            trace.failed_at_time = t;
            trace.failure = HeleShawFailure::newton;
            trace.newton_failure = nt.failure;
            return trace;
        }
        current = nt.result();
        if (!local_univalence_check(current)) {
            trace.failed_at_time = t;
            trace.failure = HeleShawFailure::lost_univalence;
            return trace;
        }
        const MomentVector mv = moment_vector(current);
        double err = 0.0;
        for (size_t k = 0; k < mv.mu.size(); ++k)
            err = std::max(err, std::abs(mv.mu[k] - base.mu[k]));
        trace.times.push_back(t);
        trace.states.push_back(current);
        trace.areas.push_back(pi * mv.mu0);
        trace.conservation_errors.push_back(err);
    }
    trace.completed = true;
    return trace;
}

struct BoundaryPoint {
    double theta, x, y;
};

/// Image of the unit circle under P, sampled at equal angles.
inline std::vector<BoundaryPoint> boundary_samples(const NormalizedPoly& p, int count) {
    if (count < 3) throw std::invalid_argument("boundary_samples: need at least 3 samples");
    const Poly P = p.to_poly();
    const double pi = std::acos(-1.0);
    std::vector<BoundaryPoint> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double theta = 2.0 * pi * i / count;
        const Complex w = evaluate(P, Complex{std::cos(theta), std::sin(theta)});
        pts.push_back({theta, w.real(), w.imag()});
    }
    return pts;
}

}  // namespace momentmap
