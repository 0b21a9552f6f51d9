// momentmap: moments, Jacobians, critical sets, Newton inversion and
// Hele-Shaw evolution for normalized polynomials, plus a batch verifier.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure,
// 3 verification failure. Nothing else.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentmap/io.hpp"
#include "momentmap/verify.hpp"

namespace {

using namespace momentmap;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << dump_json(j);
    else
        save_json_atomic(out_path, j);
}

MomentVector moments_by_method(const NormalizedPoly& p, const std::string& method) {
    if (method == "laurent") return moment_vector(p);
    MomentVector m;
    m.n = p.n();
    for (int k = 0; k < p.n(); ++k) {
        const Complex v = method == "richardson"
                              ? moment_richardson(p, k)
                              : moment_quadrature(p, k, QuadratureRule::for_moment(p.n(), k));
        if (k == 0) {
            if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
                throw InternalConsistencyError("mu_0 came out non-real");
            m.mu0 = v.real();
        } else {
            m.mu.push_back(v);
        }
    }
    if (!(m.mu0 > 0.0)) throw InternalConsistencyError("mu_0 came out non-positive");
    return m;
}

int cmd_moments(const std::string& input, const std::string& method,
                const std::string& out_path) {
    const NormalizedPoly p = load_poly_file(input);
    emit(moments_to_json(moments_by_method(p, method)), out_path);
    return kExitOk;
}

int cmd_jacobian(const std::string& input, const std::string& method, bool all,
                 const std::string& out_path) {
    const NormalizedPoly p = load_poly_file(input);
    if (all) {
        emit(jacobian_report_to_json(jacobian_report(p)), out_path);
        return kExitOk;
    }
    Complex value;
    if (method == "analytic") value = jacobian_analytic(p);
    else if (method == "closed") value = jacobian_closed_form(p);
    else if (method == "ymatrix") value = jacobian_y_matrix(p);
    else value = Complex{jacobian_finite_difference(p), 0.0};
    emit(Json{{"value", complex_to_json(value)}}, out_path);
    return kExitOk;
}

int cmd_critical(const std::string& input, double tol, const std::string& out_path) {
    const NormalizedPoly p = load_poly_file(input);
    emit(critical_report_to_json(degeneracy_report(p, tol)), out_path);
    return kExitOk;
}

int cmd_verify(int n_max, int trials, uint64_t seed, bool inject_fault,
               const std::string& out_path) {
    VerifyOptions opt;
    opt.n_max = n_max;
    opt.trials = trials;
    opt.seed = seed;
    opt.inject_fault = inject_fault;
    VerifyOutcome outcome;
    if (out_path.empty()) {
        outcome = run_verify(opt, std::cout);
    } else {
        std::ostringstream buf;
        outcome = run_verify(opt, buf);
        write_text_atomic(out_path, buf.str());
    }
    if (!outcome.pass) {
        for (const std::string& f : outcome.failures) std::cerr << "failed: " << f << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_invert(const std::string& target_path, const std::string& init_path,
               const std::string& out_path) {
    const MomentVector target = load_moment_file(target_path);
    const NormalizedPoly init = load_poly_file(init_path);
    if (init.n() != target.n)
        throw InputError("invert: target and initial guess have different n");
    const NewtonTrace trace = newton_invert(target, init);
    Json out{{"trace", newton_trace_to_json(trace)}};
    if (!trace.iterates.empty()) out["polynomial"] = poly_to_json(trace.result());
    emit(out, out_path);
    if (!trace.converged) {
        std::cerr << "inversion failed: " << to_string(trace.failure) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_heleshaw(const std::string& input, double rate, double t_end, int steps,
                 int samples_per_curve, const std::string& out_dir, bool svg) {
    const NormalizedPoly p = load_poly_file(input);
    if (svg && out_dir.empty()) throw InputError("heleshaw: --svg needs --out");
    const HeleShawTrace trace = heleshaw_evolve(p, rate, t_end, steps);

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw InputError("heleshaw: cannot create " + out_dir);
        std::vector<std::vector<BoundaryPoint>> curves;
        for (size_t i = 0; i < trace.states.size(); ++i) {
            const auto points = boundary_samples(trace.states[i], samples_per_curve);
            char name[32];
            std::snprintf(name, sizeof name, "boundary_%04zu.csv", i);
            write_text_atomic((fs::path(out_dir) / name).string(), boundary_csv(points));
            curves.push_back(points);
        }
        if (svg)
            write_text_atomic((fs::path(out_dir) / "overlay.svg").string(),
                              boundary_svg(curves));
        save_json_atomic((fs::path(out_dir) / "trace.json").string(),
                         heleshaw_trace_to_json(trace));
    }
    std::cout << dump_json(heleshaw_trace_to_json(trace));
    if (!trace.completed) {
        std::cerr << "evolution failed at t = " << trace.failed_at_time << ": "
                  << to_string(trace.failure) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_random(int n, uint64_t seed, bool real_coefficients, const std::string& out_path) {
    Rng rng(derive_stream(seed, 0));
    emit(poly_to_json(random_normalized_poly(rng, n, real_coefficients)), out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment map toolkit for normalized polynomials on the unit disk"};
    app.require_subcommand(1);

    std::string input, out_path, method;
    double tol = 1e-9, rate = 1.0, t_end = 1.0;
    int n = 2, steps = 10, samples = 256, trials = 100, n_max = 6;
    uint64_t seed = 0;
    bool all = false, inject_fault = false, svg = false, real_coeffs = false;

    auto* moments = app.add_subcommand("moments", "Moments of the image domain");
    moments->add_option("input", input, "polynomial JSON file")->required();
    moments->add_option("--method", method, "richardson|laurent|quadrature")
        ->default_val("laurent")
        ->check(CLI::IsMember({"richardson", "laurent", "quadrature"}));
    moments->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* jacobian = app.add_subcommand("jacobian", "Jacobian of the moment map");
    jacobian->add_option("input", input, "polynomial JSON file")->required();
    jacobian->add_option("--method", method, "analytic|closed|ymatrix|fd")
        ->default_val("analytic")
        ->check(CLI::IsMember({"analytic", "closed", "ymatrix", "fd"}));
    jacobian->add_flag("--all", all, "all four routes plus their discrepancies");
    jacobian->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* critical = app.add_subcommand("critical", "Critical-set proximity report");
    critical->add_option("input", input, "polynomial JSON file")->required();
    critical->add_option("--tol", tol, "degeneracy tolerance")->default_val(1e-9);
    critical->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Randomized identity battery (JSON Lines)");
    verify->add_option("--trials", trials, "random trials")->default_val(100);
    verify->add_option("--n-max", n_max, "degrees cycle through 1..n-max")->default_val(6);
    verify->add_option("--seed", seed, "RNG seed")->default_val(0);
    verify->add_flag("--inject-fault", inject_fault,
                     "self-test: corrupt the harness's closed-form exponent");
    verify->add_option("--out", out_path, "write the report here instead of stdout");

    auto* invert = app.add_subcommand("invert", "Recover a polynomial from its moments");
    invert->add_option("target", input, "moment JSON file")->required();
    std::string init_path;
    invert->add_option("--init", init_path, "initial-guess polynomial JSON file")->required();
    invert->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* heleshaw = app.add_subcommand("heleshaw", "Evolve under constant injection");
    heleshaw->add_option("input", input, "polynomial JSON file")->required();
    heleshaw->add_option("--rate", rate, "d(mu_0)/dt, >= 0")->default_val(1.0);
    heleshaw->add_option("--t-end", t_end, "final time")->default_val(1.0);
    heleshaw->add_option("--steps", steps, "number of time steps")->default_val(10);
    heleshaw->add_option("--boundary-samples", samples, "points per boundary curve")
        ->default_val(256);
    heleshaw->add_option("--out", out_path, "directory for trace.json and per-step CSV");
    heleshaw->add_flag("--svg", svg, "also write overlay.svg (needs --out)");

    auto* random = app.add_subcommand("random", "Emit a seeded random polynomial");
    random->add_option("--n", n, "degree")->default_val(2);
    random->add_option("--seed", seed, "RNG seed")->default_val(0);
    random->add_flag("--real", real_coeffs, "real coefficients only");
    random->add_option("--out", out_path, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (moments->parsed()) return cmd_moments(input, method, out_path);
        if (jacobian->parsed()) return cmd_jacobian(input, method, all, out_path);
        if (critical->parsed()) return cmd_critical(input, tol, out_path);
        if (verify->parsed()) return cmd_verify(n_max, trials, seed, inject_fault, out_path);
        if (invert->parsed()) return cmd_invert(input, init_path, out_path);
        if (heleshaw->parsed())
            return cmd_heleshaw(input, rate, t_end, steps, samples, out_path, svg);
        if (random->parsed()) return cmd_random(n, seed, real_coeffs, out_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitInput;
}
