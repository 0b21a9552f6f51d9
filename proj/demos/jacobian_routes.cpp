// Computes the Jacobian of the moment map for one polynomial by all four
// routes and prints how far apart they land, then shows what the
// degeneracy report says as the polynomial is pushed toward the critical
// set.

#include <cstdio>

#include "momentmap/moments.hpp"
#include "momentmap/critical.hpp"

using namespace momentmap;

int main() {
    // P(z) = z + 0.15 z^2 + (0.05 + 0.1i) z^3
    const NormalizedPoly p(3, {Complex{1, 0}, Complex{0.15, 0}, Complex{0.05, 0.1}});

    const JacobianReport rep = jacobian_report(p);
    std::printf("analytic           % .15f\n", rep.analytic.real());
    std::printf("closed form        % .15f\n", rep.closed_form.real());
    std::printf("Y-matrix route     % .15f\n", rep.y_route.real());
    std::printf("finite differences % .15f\n", rep.finite_difference);
    std::printf("largest relative spread: %.2e\n\n",
                std::max({rep.rel_analytic_closed, rep.rel_analytic_y, rep.rel_abs_fd}));

    // Scale the top coefficient up until a pair of critical points collides
    // with the reflected grid alpha_i conj(alpha_j) = 1.
    for (double s : {1.0, 2.0, 3.0, 3.3}) {
        const NormalizedPoly q(3, {p.a(1), p.a(2), s * p.a(3)});
        const CriticalReport cr = degeneracy_report(q);
        std::printf("scale %.1f: min |alpha_i conj(alpha_j) - 1| = %-10.3e degenerate=%s  |J|=%.3e\n",
                    s, cr.min_distance, cr.degenerate ? "yes" : "no",
                    std::abs(jacobian_analytic(q)));
    }
    return 0;
}
