#pragma once

// File formats and serializers. JSON carries structured data (polynomials,
// moment vectors, reports), CSV carries sampled boundary curves, and a tiny
// SVG writer overlays several curves as polylines. Every floating-point
// value is written in shortest round-trip decimal, so load(save(x)) is
// bitwise exact and output bytes are reproducible across runs.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "momentmap/critical.hpp"
#include "momentmap/inverse.hpp"
#include "momentmap/moments.hpp"
#include "momentmap/poly.hpp"

namespace momentmap {

using Json = nlohmann::json;

/// Malformed or out-of-range input: unreadable files, wrong JSON shape,
/// values that violate the documented invariants. The CLI maps this to
/// exit code 1, as opposed to numerical failures (exit 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline Json complex_to_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(what + ": expected a [re, im] pair of numbers");
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

// ---- polynomial files: {"n": int, "a": [[re, im], ...]} with a_1..a_n ----

inline Json poly_to_json(const NormalizedPoly& p) {
    Json a = Json::array();
    for (int j = 1; j <= p.n(); ++j) a.push_back(complex_to_json(p.a(j)));
    return Json{{"n", p.n()}, {"a", std::move(a)}};
}

inline NormalizedPoly poly_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("a"))
        throw InputError("polynomial: expected an object with \"n\" and \"a\"");
    if (!j["n"].is_number_integer())
        throw InputError("polynomial: \"n\" must be an integer");
    const auto n = j["n"].get<int64_t>();
    if (n < 1 || n > 10000) throw InputError("polynomial: \"n\" out of range");
    const Json& a = j["a"];
    if (!a.is_array() || static_cast<int64_t>(a.size()) != n)
        throw InputError("polynomial: \"a\" must list exactly n coefficients a_1..a_n");
    std::vector<Complex> coeffs;
    coeffs.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        coeffs.push_back(complex_from_json(a[i], "polynomial: a[" + std::to_string(i) + "]"));
    try {
        return NormalizedPoly(std::move(coeffs));
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("polynomial: ") + e.what());
    }
}

// ---- moment files: {"n": int, "mu0": real, "mu": [[re, im], ...]} ----

inline Json moments_to_json(const MomentVector& m) {
    Json mu = Json::array();
    for (const Complex& v : m.mu) mu.push_back(complex_to_json(v));
    return Json{{"n", m.n}, {"mu0", m.mu0}, {"mu", std::move(mu)}};
}

inline MomentVector moments_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("mu0") || !j.contains("mu"))
        throw InputError("moments: expected an object with \"n\", \"mu0\" and \"mu\"");
    if (!j["n"].is_number_integer()) throw InputError("moments: \"n\" must be an integer");
    if (!j["mu0"].is_number()) throw InputError("moments: \"mu0\" must be a number");
    const auto n = j["n"].get<int64_t>();
    if (n < 1 || n > 10000) throw InputError("moments: \"n\" out of range");
    MomentVector m;
    m.n = static_cast<int>(n);
    m.mu0 = j["mu0"].get<double>();
    if (!(m.mu0 > 0.0)) throw InputError("moments: \"mu0\" must be positive");
    const Json& mu = j["mu"];
    if (!mu.is_array() || static_cast<int64_t>(mu.size()) != n - 1)
        throw InputError("moments: \"mu\" must list exactly n-1 entries mu_1..mu_{n-1}");
    for (size_t i = 0; i < mu.size(); ++i)
        m.mu.push_back(complex_from_json(mu[i], "moments: mu[" + std::to_string(i) + "]"));
    return m;
}

// ---- file plumbing ----

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline NormalizedPoly load_poly_file(const std::string& path) {
    return poly_from_json(load_json_file(path));
}

inline MomentVector load_moment_file(const std::string& path) {
    return moments_from_json(load_json_file(path));
}

/// Writes to a sibling temp file and renames it over the target, so readers
/// never observe a half-written file.
inline void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " -> " + path);
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline void save_json_atomic(const std::string& path, const Json& j) {
    write_text_atomic(path, dump_json(j));
}

// ---- report serializers ----

inline Json json_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

inline Json critical_report_to_json(const CriticalReport& r) {
    Json roots = Json::array();
    for (const Complex& z : r.roots) roots.push_back(complex_to_json(z));
    Json products = Json::array();
    for (size_t i = 0; i < r.roots.size(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < r.roots.size(); ++j)
            row.push_back(complex_to_json(r.pair_products(i, j)));
        products.push_back(std::move(row));
    }
    return Json{
        {"roots", std::move(roots)},
        {"pair_products", std::move(products)},
        {"min_distance", json_or_null(r.min_distance)},
        {"degenerate", r.degenerate},
        {"locally_univalent", r.locally_univalent},
        {"tolerance", r.tolerance},
    };
}

inline Json jacobian_report_to_json(const JacobianReport& r) {
    return Json{
        {"n", r.n},
        {"analytic", complex_to_json(r.analytic)},
        {"closed_form", complex_to_json(r.closed_form)},
        {"y_route", complex_to_json(r.y_route)},
        {"finite_difference", r.finite_difference},
        {"discrepancies",
         Json{{"analytic_closed", r.rel_analytic_closed},
              {"analytic_y", r.rel_analytic_y},
              {"closed_y", r.rel_closed_y},
              {"abs_fd", r.rel_abs_fd}}},
    };
}

inline Json newton_trace_to_json(const NewtonTrace& t) {
    Json iterates = Json::array();
    for (const NormalizedPoly& p : t.iterates) iterates.push_back(poly_to_json(p));
    return Json{
        {"converged", t.converged},
        {"failure", to_string(t.failure)},
        {"iterations", t.residual_norms.empty() ? 0 : t.residual_norms.size() - 1},
        {"residual_norms", t.residual_norms},
        {"jacobian_moduli", t.jacobian_moduli},
        {"iterates", std::move(iterates)},
    };
}

inline Json heleshaw_trace_to_json(const HeleShawTrace& t) {
    Json states = Json::array();
    for (const NormalizedPoly& p : t.states) states.push_back(poly_to_json(p));
    Json out{
        {"times", t.times},
        {"states", std::move(states)},
        {"areas", t.areas},
        {"conservation_errors", t.conservation_errors},
        {"completed", t.completed},
        {"failure", to_string(t.failure)},
    };
    if (!t.completed) {
        out["failed_at_time"] = t.failed_at_time;
        out["newton_failure"] = to_string(t.newton_failure);
    }
    return out;
}

inline const char* to_string(HurwitzDirection d) {
    return d == HurwitzDirection::ascending ? "ascending" : "descending";
}

inline Json hurwitz_convention_to_json(const HurwitzConvention& c) {
    return Json{
        {"order", c.kind == HurwitzConvention::Order::absolute
                      ? Json(c.value)
                      : Json("degree-" + std::to_string(c.value))},
        {"direction", to_string(c.direction)},
    };
}

inline Json hurwitz_calibration_to_json(const HurwitzCalibration& c) {
    Json candidates = Json::array();
    for (const auto& cand : c.candidates)
        candidates.push_back(Json{
            {"convention", hurwitz_convention_to_json(cand.convention)},
            {"matches_n2", cand.matches_n2},
            {"matches_n3", cand.matches_n3},
            {"worst_gap_n2", json_or_null(cand.worst_gap_n2)},
            {"worst_gap_n3", json_or_null(cand.worst_gap_n3)},
        });
    Json samples = Json::array();
    for (const auto& s : c.samples)
        samples.push_back(Json{
            {"n", s.n},
            {"jacobian", s.jacobian},
            {"prefactor", s.prefactor},
            {"delta_required", json_or_null(s.delta_required)},
        });
    Json out{{"calibrated", c.calibrated},
             {"candidates", std::move(candidates)},
             {"required_factor_samples", std::move(samples)}};
    if (c.calibrated) out["convention"] = hurwitz_convention_to_json(c.convention);
    return out;
}

// ---- curve output ----

inline std::string boundary_csv(const std::vector<BoundaryPoint>& points) {
    std::string out = "theta,x,y\n";
    for (const BoundaryPoint& p : points) {
        out += format_double(p.theta);
        out += ',';
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

/// All curves overlaid as polylines in one SVG, earliest drawn first.
/// Stroke colors cycle through a short palette; the viewport pads the
/// common bounding box by 5 percent.
inline std::string boundary_svg(const std::vector<std::vector<BoundaryPoint>>& curves,
                                int size_px = 640) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& curve : curves)
        for (const BoundaryPoint& p : curve) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    if (!(xmin <= xmax)) { xmin = ymin = -1.0; xmax = ymax = 1.0; }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double pad = 0.05 * span;
    const double scale = size_px / (span + 2 * pad);
    const auto px = [&](double x) { return (x - xmin + pad) * scale; };
    // SVG's y axis points down; flip so the plot reads like the plane.
    const auto py = [&](double y) { return (ymax - y + pad) * scale; };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
    const int height = static_cast<int>((ymax - ymin + 2 * pad) * scale + 0.5);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(size_px) + "\" height=\"" + std::to_string(height) +
                      "\" viewBox=\"0 0 " + std::to_string(size_px) + " " +
                      std::to_string(height) + "\">\n";
    for (size_t c = 0; c < curves.size(); ++c) {
        out += "  <polyline fill=\"none\" stroke=\"";
        out += palette[c % (sizeof palette / sizeof palette[0])];
        out += "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < curves[c].size(); ++i) {
            if (i) out += ' ';
            out += format_double(px(curves[c][i].x));
            out += ',';
            out += format_double(py(curves[c][i].y));
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace momentmap
