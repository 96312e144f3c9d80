// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "slfv/ancestral.hpp"
#include "slfv/config.hpp"
#include "slfv/experiment.hpp"
#include "slfv/express.hpp"
#include "slfv/forward.hpp"
#include "slfv/percolation.hpp"
#include "slfv/replicas.hpp"
#include "slfv/stats.hpp"
#include "slfv/twocolumn.hpp"

using namespace slfv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "!") + what;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome speed_vs_a() {
    Outcome o;
    for (double a : {0.5, 1.0, 2.0}) {
        const ShapeLaw law = ShapeLaw::unit_rate(a, 1.0 / a, 0.0);
        const SpeedEstimate e = estimate_speed(law, {10, 20, 30, 40}, 30, 2024);
        const double r = e.speed / a;
        o.check(r >= 2.3 && r <= 2.9, fmt("a=%g speed/a=%.4f r2=%.4f", a, r, e.r2));
    }
    return o;
}

Outcome express_bound() {
    Outcome o;
    const ShapeLaw law = ShapeLaw::unit_rate(1, 1);
    const auto v = run_replicas(30, 11, 1, [&](std::size_t, std::uint64_t s) { return express_speed(law, 1e4, s); });
    const Estimate e = estimate(v);
    const double lb = lower_bound_speed(law);
    o.check(std::abs(e.mean - lb) <= 0.02 * lb, fmt("speed %.5f vs bound %.5f", e.mean, lb));
    const auto hits = run_replicas(200, 12, 1, [&](std::size_t, std::uint64_t s) { return coupled_express_hit(law, 20, s); });
    std::size_t ok = 0;
    for (const auto& h : hits) ok += h.express_tau >= h.dual_tau;
    o.check(ok == hits.size(), fmt("coupled %zu/%zu", ok, hits.size()));
    return o;
}

Outcome domination() {
    Outcome o;
    for (const auto& r : domination_suite({5, 10}, 200, 31)) {
        o.check(r.fpp_below_discr && r.discr_below_tau4n && r.pointwise,
                fmt("n=%d fpp=%.4f discr=%.4f tau4n=%.4f pointwise=%d", r.n, r.fpp.mean, r.discr.mean, r.tau4n.mean,
                    int(r.pointwise)));
    }
    return o;
}

Outcome fpp_linear() {
    Outcome o;
    const auto lin = fpp_linearity({4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16}, 500, 41);
    o.check(lin.fit.r2 >= 0.99 && lin.fit.slope > 0.0, fmt("r2=%.5f slope=%.5f", lin.fit.r2, lin.fit.slope));
    return o;
}

// Truncated linear solve of the return time of the difference process.
double truncated_return_time(int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int d = 1; d <= n; ++d) {
        const int r = d - 1;
        M(r, r) += d + 2;
        if (d + 1 <= n) M(r, d) -= 1;
        if (d - 1 >= 1) M(r, d - 2) -= 2;
        for (int k = 2; k <= d; ++k)
            if (d - k >= 1) M(r, d - k - 1) -= 1;
    }
    const Eigen::VectorXd h = M.partialPivLu().solve(Eigen::VectorXd::Ones(n));
    return 0.5 + h(0);
}

struct ReturnStats {
    Estimate T, M, diff;
};

ReturnStats continuous_returns() {
    const auto ret = run_replicas(1'000'000, 17, 1, [](std::size_t, std::uint64_t s) { return twocol::simulate_return(s); });
    std::vector<double> T(ret.size()), M(ret.size()), D(ret.size());
    for (std::size_t i = 0; i < ret.size(); ++i) {
        T[i] = ret[i].T;
        M[i] = double(ret[i].M);
        D[i] = M[i] - T[i];
    }
    return {estimate(T), estimate(M), estimate(D)};
}

Outcome twocol_exact(const ReturnStats& mc) {
    Outcome o;
    for (auto [N, eps] : {std::pair{10, 1e-2}, std::pair{40, 1e-3}, std::pair{80, 1e-4}}) {
        const twocol::Chain c = twocol::build_chain(N, eps, true);
        const double res = twocol::fixed_point_residual(c, twocol::invariant_distribution(c));
        o.check(res <= 1e-10, fmt("(a) N=%d residual=%.2e", N, res));
    }
    {
        const twocol::Chain c = twocol::build_chain(20, 1e-3, false);
        const double exact = twocol::expected_return_time(20, 1e-3);
        const auto t = run_replicas(100000, 19, 1, [&](std::size_t, std::uint64_t s) {
            Rng rng(s);
            return double(twocol::simulate_chain_return(c, rng));
        });
        const Estimate e = estimate(t);
        o.check(std::abs(e.mean - exact) <= e.ci95, fmt("(b) mc=%.3f+-%.3f exact=%.3f", e.mean, e.ci95, exact));
    }
    const twocol::Extrapolation ex = twocol::extrapolate(twocol::default_schedule());
    o.check(ex.speed >= 4.0 / 3 && ex.speed <= 2.0 && std::abs(ex.speed - 1.46) <= 0.02,
            fmt("(c) speed=%.5f", ex.speed));
    const double oracle = truncated_return_time(60);
    o.check(std::abs(ex.T_limit - mc.T.mean) <= 0.01 * mc.T.mean && std::abs(ex.T_limit - oracle) <= 0.01 * oracle,
            fmt("(d) T=%.6f mc=%.6f solve=%.6f", ex.T_limit, mc.T.mean, oracle));
    return o;
}

Outcome twocol_identities(const ReturnStats& mc) {
    Outcome o;
    o.check(std::abs(mc.diff.mean - 0.5) <= mc.diff.ci95, fmt("E[M-T]=%.5f+-%.5f", mc.diff.mean, mc.diff.ci95));
    o.check(mc.T.mean >= 0.5 && mc.T.mean <= 1.5, fmt("E[T]=%.5f", mc.T.mean));
    o.check(mc.M.mean <= 2.0, fmt("E[M]=%.5f", mc.M.mean));
    return o;
}

Outcome duality() {
    Outcome o;
    const ShapeLaw law = ShapeLaw::unit_rate(1, 1);
    const Primitive d0 = Ellipse{{0, 0}, 1, 1, 0};
    struct Case {
        const char* name;
        std::vector<Primitive> A, B;
        double t;
    };
    const Case cases[] = {
        {"disjoint", {d0}, {Ellipse{{4, 0}, 1, 1, 0}}, 2.0},
        {"overlap", {d0}, {Ellipse{{1.5, 0}, 1, 1, 0}}, 1.0},
        {"rect", {Rect{-2, 0, -1, 1}}, {Ellipse{{4, 0}, 1, 1, 0}}, 3.0},
    };
    std::uint64_t seed = 50;
    for (const auto& c : cases) {
        const DualityResult r = duality_check(c.A, c.B, law, c.t, 10000, seed++);
        o.check(std::abs(r.z) <= 3.0, fmt("%s p_fwd=%.4f p_dual=%.4f z=%.3f", c.name, r.p_forward, r.p_dual, r.z));
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "slfv_acceptance";
    fs::remove_all(root);
    std::vector<fs::path> recipes;
    for (const auto& e : fs::directory_iterator(SLFV_RECIPE_DIR))
        if (e.path().extension() == ".conf") recipes.push_back(e.path());
    std::sort(recipes.begin(), recipes.end());
    for (const auto& path : recipes) {
        const std::string name = path.stem().string();
        ExperimentConfig c = load_config(path, ExperimentConfig{});
        std::vector<fs::path> dirs;
        for (int w : {1, 8, 1}) {
            dirs.push_back(root / (name + "_" + std::to_string(dirs.size())));
            c.out = dirs.back().string();
            run(c, w);
        }
        std::size_t files = 0, same = 0;
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            const auto ext = e.path().extension();
            if (ext != ".csv" && ext != ".pgm" && ext != ".svg") continue;
            ++files;
            const std::string a = slurp(e.path());
            same += a == slurp(dirs[1] / e.path().filename()) && a == slurp(dirs[2] / e.path().filename());
        }
        o.check(files > 0 && same == files, fmt("%s %zu/%zu", name.c_str(), same, files));
    }
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const char* title, auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    };
    report(1, "speed against a", speed_vs_a);
    report(2, "express lower bound", express_bound);
    report(3, "domination sandwich", domination);
    report(4, "fpp linearity", fpp_linear);
    const ReturnStats mc = continuous_returns();
    report(5, "two-column exact pipeline", [&] { return twocol_exact(mc); });
    report(6, "two-column identities", [&] { return twocol_identities(mc); });
    report(7, "duality", duality);
    report(8, "determinism and worker invariance", determinism);
    return failed ? 1 : 0;
}
