#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "momentmap/critical.hpp"
#include "momentmap/poly.hpp"
#include "momentmap/resultant.hpp"

namespace momentmap {

/// splitmix64 mix of (seed, index): gives every trial its own stream so
/// report contents depend only on (seed, trial index), not on how many
/// draws earlier trials consumed.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 with a hand-rolled uniform mapping (top 53 bits scaled by
/// 2^-53). std::uniform_real_distribution is not specified bit-for-bit
/// across standard libraries; this is.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("Rng::uniform: empty interval");
        return lo + (hi - lo) * unit();
    }

    /// Uniform over the closed disk of the given radius (rejection-free:
    /// sqrt of the radial cdf).
    Complex unit_disk(double radius = 1.0) {
        double r = radius * std::sqrt(unit());
        double theta = 2.0 * std::acos(-1.0) * unit();
        return Complex{r * std::cos(theta), r * std::sin(theta)};
    }

private:
    std::mt19937_64 gen_;
};

/// a_1 ~ U[0.5, 2]; a_j centered on 2^{1-j} with a unit-disk perturbation,
/// resampled until |a_n| stays clear of zero (finite differences and root
/// finding both need a meaningful top coefficient).
inline NormalizedPoly random_normalized_poly(Rng& rng, int n, bool real_coefficients = false) {
    if (n < 1) throw std::invalid_argument("random_normalized_poly: n must be >= 1");
    std::vector<Complex> a(static_cast<size_t>(n));
    a[0] = Complex{rng.uniform(0.5, 2.0), 0.0};
    for (int j = 2; j <= n; ++j) {
        const double center = std::pow(2.0, 1.0 - j);
        Complex c;
        do {
            Complex jitter = real_coefficients ? Complex{rng.uniform(-1.0, 1.0), 0.0}
                                               : rng.unit_disk();
            c = center + jitter;
        } while (j == n && std::abs(c) < 1e-3);
        a[static_cast<size_t>(j) - 1] = c;
    }
    return NormalizedPoly(n, std::move(a));
}

/// Locally univalent sample suitable as a Newton inversion target or seed:
/// every root of P' ends at modulus 1 + margin or more (a_2..a_n shrink
/// geometrically until they do; with a small enough tail P' approaches the
/// constant a_1 and its roots leave every bounded set), and the Jacobian
/// stays comfortably clear of the singularity floor the inversion
/// preconditions demand. At larger n a small a_1 alone pushes
/// 2 a_1^{n^2-n+1} Res(P', P'*) under that floor, so such draws are
/// rejected wholesale.
///
/// The default margin is sized for round-trip inversion from a 5 percent
/// coefficient perturbation: the nearest second preimage of the same
/// moments sits roughly margin-deep across the fold at the critical set,
/// so a thin margin lets a perturbed start converge to the wrong sheet.
inline NormalizedPoly random_locally_univalent_poly(Rng& rng, int n, double margin = 0.1,
                                                    double min_jacobian = 1e-8) {
    if (!(margin > 0.0)) throw std::invalid_argument("random_locally_univalent_poly: margin must be positive");
    for (int draw = 0; draw < 200; ++draw) {
        NormalizedPoly p = random_normalized_poly(rng, n);
        if (n == 1) return p;
        std::vector<Complex> a = p.coefficients();
        for (int attempt = 0; attempt < 200; ++attempt) {
            NormalizedPoly candidate(n, a);
            std::vector<Complex> roots = derivative_roots(candidate);
            double min_mod = std::numeric_limits<double>::infinity();
            for (Complex r : roots) min_mod = std::min(min_mod, std::abs(r));
            if (min_mod >= 1.0 + margin) {
                double jac = std::abs(2.0 * std::pow(candidate.a1(), n * n - n + 1) *
                                      mirror_resultant(candidate));
                if (jac >= min_jacobian) return candidate;
                break;  // scale too small for an invertible instance, redraw
            }
            for (int j = 2; j <= n; ++j) a[static_cast<size_t>(j) - 1] *= 0.7;
        }
    }
    throw std::runtime_error("random_locally_univalent_poly: no admissible sample found");
}

/// Multiplies each coefficient by (1 + relative * u_j), u_j in the unit
/// disk (real for a_1 so normalization survives).
inline NormalizedPoly perturb(Rng& rng, const NormalizedPoly& p, double relative) {
    if (!(relative >= 0.0) || relative >= 1.0)
        throw std::invalid_argument("perturb: relative size must lie in [0, 1)");
    std::vector<Complex> a = p.coefficients();
    a[0] *= 1.0 + relative * rng.uniform(-1.0, 1.0);
    for (size_t j = 1; j < a.size(); ++j) a[j] *= 1.0 + relative * rng.unit_disk();
    return NormalizedPoly(p.n(), std::move(a));
}

/// Plain random polynomial (for resultant property checks); leading
/// coefficient kept away from zero.
inline Poly random_poly(Rng& rng, int degree) {
    if (degree < 0) throw std::invalid_argument("random_poly: negative degree");
    std::vector<Complex> c(static_cast<size_t>(degree) + 1);
    for (auto& x : c) x = rng.unit_disk(2.0);
    while (std::abs(c.back()) < 0.1) c.back() = rng.unit_disk(2.0);
    return Poly(std::move(c));
}

}  // namespace momentmap
