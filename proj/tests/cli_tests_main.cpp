// End-to-end tests for the command-line tool. Runs the real binary against
// the fixture files, checks stdout payloads, written files, and the exit
// code contract (0 ok, 1 bad input, 2 numerical failure, 3 verification
// failure). Usage: cli_tests <path-to-binary> <path-to-data-dir>.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

int g_failed = 0;
std::string g_cli;
fs::path g_data;
fs::path g_tmp;

void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("%s %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " | ", detail.c_str());
    if (!pass) ++g_failed;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string data(const std::string& name) { return (g_data / name).string(); }

void moments_golden() {
    const RunResult r = run("moments " + data("n2.json"));
    bool ok = r.code == 0;
    std::string detail;
    if (ok) {
        const Json j = Json::parse(r.out, nullptr, false);
        ok = !j.is_discarded() && j["n"] == 2 && near(j["mu0"], 1.18, 1e-12) &&
             near(j["mu"][0][0], 0.3, 1e-12) && near(j["mu"][0][1], 0.0, 1e-12);
        detail = ok ? "" : "payload " + r.out.substr(0, 80);
    }
    const RunResult r1 = run("moments " + data("n1double.json"));
    if (ok && r1.code == 0) {
        const Json j = Json::parse(r1.out);
        ok = j["n"] == 1 && near(j["mu0"], 4.0, 1e-12) && j["mu"].empty();
    } else {
        ok = false;
    }
    report("moments-golden", ok, detail);
}

void moments_methods_agree() {
    double mu0[3];
    bool ok = true;
    const char* methods[3] = {"richardson", "laurent", "quadrature"};
    Json parsed[3];
    for (int i = 0; i < 3; ++i) {
        const RunResult r =
            run("moments " + data("n3.json") + " --method " + methods[i]);
        ok = ok && r.code == 0;
        if (!ok) break;
        parsed[i] = Json::parse(r.out);
        mu0[i] = parsed[i]["mu0"];
    }
    if (ok) {
        ok = near(mu0[0], mu0[1], 1e-9) && near(mu0[1], mu0[2], 1e-9);
        for (int i = 1; ok && i < 3; ++i)
            for (size_t k = 0; k < parsed[0]["mu"].size(); ++k)
                ok = ok &&
                     near(parsed[i]["mu"][k][0], parsed[0]["mu"][k][0], 1e-9) &&
                     near(parsed[i]["mu"][k][1], parsed[0]["mu"][k][1], 1e-9);
    }
    report("moments-methods-agree", ok);
}

void jacobian_outputs() {
    const RunResult closed = run("jacobian " + data("n2.json") + " --method closed");
    bool ok = closed.code == 0;
    if (ok) {
        const Json j = Json::parse(closed.out);
        ok = near(j["value"][0], -1.28, 1e-12) && near(j["value"][1], 0.0, 1e-12);
    }
    const RunResult all = run("jacobian " + data("n3.json") + " --all");
    ok = ok && all.code == 0;
    if (ok) {
        const Json j = Json::parse(all.out);
        ok = near(j["analytic"][0], 0.8192, 1e-9) &&
             j["discrepancies"]["analytic_closed"].get<double>() < 1e-9 &&
             j["discrepancies"]["analytic_y"].get<double>() < 1e-9 &&
             j["discrepancies"]["abs_fd"].get<double>() < 1e-5;
    }
    const RunResult crit = run("jacobian " + data("n2half.json"));
    ok = ok && crit.code == 0;
    if (ok) {
        const Json j = Json::parse(crit.out);
        ok = std::abs(j["value"][0].get<double>()) <= 1e-9 &&
             std::abs(j["value"][1].get<double>()) <= 1e-9;
    }
    report("jacobian-outputs", ok);
}

void critical_outputs() {
    bool ok = true;
    for (const char* f : {"n2half.json", "n3third.json"}) {
        const RunResult r = run("critical " + data(f));
        ok = ok && r.code == 0 && Json::parse(r.out)["degenerate"] == true;
    }
    const RunResult clear = run("critical " + data("n2.json"));
    ok = ok && clear.code == 0;
    if (ok) {
        const Json j = Json::parse(clear.out);
        ok = j["degenerate"] == false &&
             near(j["min_distance"], 16.0 / 9.0, 1e-9);
    }
    report("critical-outputs", ok);
}

void input_rejection() {
    bool ok = run("moments " + data("malformed.json")).code == 1;
    ok = ok && run("critical " + data("malformed.json")).code == 1;
    ok = ok && run("jacobian " + (g_data / "does_not_exist.json").string()).code == 1;
    ok = ok && run("heleshaw " + data("n1unit.json") + " --rate -1").code == 1;
    ok = ok && run("moments " + data("n2.json") + " --method nonsense").code == 1;
    report("input-rejection", ok);
}

void verify_deterministic() {
    const std::string args = "verify --trials 4 --n-max 3 --seed 11";
    const RunResult a = run(args);
    const RunResult b = run(args);
    bool ok = a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out;
    if (ok) {
        std::istringstream lines(a.out);
        std::string line;
        int count = 0;
        while (std::getline(lines, line)) {
            ++count;
            if (Json::parse(line, nullptr, false).is_discarded()) ok = false;
        }
        ok = ok && count == 7;  // 2 fixed + 4 random + summary
    }
    report("verify-deterministic", ok);
}

void verify_zero_trials() {
    const RunResult r = run("verify --trials 0");
    bool ok = r.code == 0;
    if (ok) {
        const Json j = Json::parse(r.out);
        ok = j["summary"] == true && j["trials_run"] == 0 && j["pass"] == true;
    }
    report("verify-zero-trials", ok);
}

void verify_fault_injection() {
    const RunResult r = run("verify --trials 3 --seed 2 --inject-fault");
    bool ok = r.code == 3;
    ok = ok && r.out.find("\"name\":\"jacobian-closed-form\",\"pass\":false") !=
                   std::string::npos;
    ok = ok && r.out.find("jacobian-closed-form") != std::string::npos;
    report("verify-fault-injection", ok, "exit " + std::to_string(r.code));
}

void invert_roundtrip() {
    const std::string target = (g_tmp / "m2.json").string();
    bool ok = run("moments " + data("n2.json") + " --out " + target).code == 0;
    const RunResult r = run("invert " + target + " --init " + data("n2init.json"));
    ok = ok && r.code == 0;
    if (ok) {
        const Json j = Json::parse(r.out);
        ok = j["trace"]["converged"] == true &&
             near(j["polynomial"]["a"][0][0], 1.0, 1e-8) &&
             near(j["polynomial"]["a"][1][0], 0.3, 1e-8) &&
             near(j["polynomial"]["a"][1][1], 0.0, 1e-8);
    }
    report("invert-roundtrip", ok);
}

void invert_failures() {
    const std::string target = (g_tmp / "m2.json").string();
    const RunResult crit = run("invert " + target + " --init " + data("n2half.json"));
    bool ok = crit.code == 2;
    if (ok) {
        const Json j = Json::parse(crit.out);
        ok = j["trace"]["converged"] == false &&
             j["trace"]["failure"] == "singular_jacobian";
    }
    ok = ok && run("invert " + target + " --init " + data("n3.json")).code == 1;
    report("invert-failures", ok);
}

void heleshaw_run() {
    const std::string out = (g_tmp / "hs").string();
    const RunResult r = run("heleshaw " + data("n1unit.json") +
                            " --rate 1 --t-end 3 --steps 3 --boundary-samples 64 --out " +
                            out + " --svg");
    bool ok = r.code == 0;
    if (ok) {
        const Json j = Json::parse(r.out);
        const double pi = std::acos(-1.0);
        ok = j["completed"] == true && j["areas"].size() == 4;
        for (size_t i = 0; ok && i < 4; ++i)
            ok = near(j["areas"][i], pi * (1.0 + static_cast<double>(i)), 1e-9);
    }
    for (int i = 0; ok && i <= 3; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "boundary_%04d.csv", i);
        const std::string body = slurp(fs::path(out) / name);
        ok = body.rfind("theta,x,y\n", 0) == 0;
    }
    if (ok) {
        const std::string svg = slurp(fs::path(out) / "overlay.svg");
        ok = svg.find("<svg") != std::string::npos &&
             svg.find("<polyline") != std::string::npos;
        ok = ok && fs::exists(fs::path(out) / "trace.json");
    }
    report("heleshaw-run", ok);
}

void heleshaw_rate_zero() {
    const std::string out = (g_tmp / "hs0").string();
    const RunResult r = run("heleshaw " + data("n2.json") +
                            " --rate 0 --t-end 1 --steps 2 --boundary-samples 32 --out " + out);
    bool ok = r.code == 0;
    if (ok) {
        const std::string first = slurp(fs::path(out) / "boundary_0000.csv");
        ok = !first.empty() &&
             first == slurp(fs::path(out) / "boundary_0001.csv") &&
             first == slurp(fs::path(out) / "boundary_0002.csv");
    }
    report("heleshaw-rate-zero", ok);
}

void random_deterministic() {
    const RunResult a = run("random --n 3 --seed 5");
    const RunResult b = run("random --n 3 --seed 5");
    bool ok = a.code == 0 && a.out == b.out;
    if (ok) {
        const Json j = Json::parse(a.out);
        ok = j["n"] == 3 && j["a"].size() == 3 && j["a"][0][1] == 0.0 &&
             j["a"][0][0].get<double>() > 0.0;
    }
    const std::string f = (g_tmp / "r3.json").string();
    ok = ok && run("random --n 3 --seed 5 --out " + f).code == 0;
    ok = ok && run("jacobian " + f).code == 0;
    report("random-deterministic", ok);
}

void serialization_stable() {
    const std::string f = (g_tmp / "r4.json").string();
    bool ok = run("random --n 4 --seed 9 --out " + f).code == 0;
    if (ok) {
        const std::string bytes = slurp(f);
        const Json j = Json::parse(bytes, nullptr, false);
        ok = !j.is_discarded() && j.dump(2) + "\n" == bytes;
    }
    report("serialization-stable", ok);
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: cli_tests <binary> <data-dir>\n");
        return 64;
    }
    g_cli = argv[1];
    g_data = argv[2];
    g_tmp = fs::temp_directory_path() /
            ("momentmap_cli_" + std::to_string(static_cast<long>(getpid())));
    fs::create_directories(g_tmp);

    moments_golden();
    moments_methods_agree();
    jacobian_outputs();
    critical_outputs();
    input_rejection();
    verify_deterministic();
    verify_zero_trials();
    verify_fault_injection();
    invert_roundtrip();
    invert_failures();
    heleshaw_run();
    heleshaw_rate_zero();
    random_deterministic();
    serialization_stable();

    std::error_code ec;
    fs::remove_all(g_tmp, ec);
    std::printf("%d cli checks failed\n", g_failed);
    return g_failed;
}
