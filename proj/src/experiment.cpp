#include "slfv/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "slfv/errors.hpp"
#include "slfv/express.hpp"
#include "slfv/forward.hpp"
#include "slfv/percolation.hpp"
#include "slfv/replicas.hpp"
#include "slfv/stats.hpp"
#include "slfv/twocolumn.hpp"

namespace slfv {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

SimulationOptions sim_options(const ExperimentConfig& c) {
    SimulationOptions o;
    o.max_jumps = c.max_jumps;
    return o;
}

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Output {
public:
    Output(const ExperimentConfig& c, RunResult& r) : dir_(c.out), result_(r) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& body) {
        std::ofstream os(dir_ / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
        os << body;
        result_.files.push_back(name);
    }
    const fs::path& dir() const { return dir_; }
    void note(const std::string& name) { result_.files.push_back(name); }

private:
    fs::path dir_;
    RunResult& result_;
};

json config_json(const ExperimentConfig& c) {
    json j;
    for (const auto& [k, v] : fields(c)) j[k] = v;
    return j;
}

void fail(RunResult& r, const std::string& msg) {
    r.status = kInvariantViolation;
    if (!r.message.empty()) r.message += "; ";
    r.message += msg;
}

json run_speed(const ExperimentConfig& c, int workers, Output& out, RunResult&) {
    struct Row {
        ShapeLaw law;
        double a, b, gamma;
    };
    std::vector<Row> rows;
    if (c.sweep_a.empty()) {
        const auto& at = c.law.atoms().front();
        rows.push_back({c.law, at.a, at.b, at.gamma});
    } else {
        for (double a : c.sweep_a) rows.push_back({ShapeLaw({{1.0 / std::numbers::pi, a, 1.0 / a, 0.0}}), a, 1.0 / a, 0.0});
    }
    std::ostringstream main, levels;
    main << "a,b,gamma,nu,speed,speed_over_a,r2,lower_bound\n";
    levels << "a,x,mean_tau,ci_tau\n";
    json res = json::array();
    SvgSeries svg;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        const SpeedEstimate e = estimate_speed(row.law, c.xs, c.reps, replica_seed(c.seed, k), workers, sim_options(c));
        const double lb = lower_bound_speed(row.law);
        main << g17(row.a) << ',' << g17(row.b) << ',' << g17(row.gamma) << ',' << g17(e.nu) << ',' << g17(e.speed)
             << ',' << g17(e.speed / row.a) << ',' << g17(e.r2) << ',' << g17(lb) << '\n';
        for (std::size_t i = 0; i < e.levels.size(); ++i)
            levels << g17(row.a) << ',' << g17(e.levels[i]) << ',' << g17(e.mean_tau[i]) << ',' << g17(e.ci_tau[i])
                   << '\n';
        res.push_back({{"a", row.a}, {"speed", e.speed}, {"nu", e.nu}, {"r2", e.r2}, {"lower_bound", lb}});
        svg.x.push_back(row.a);
        svg.y.push_back(e.speed);
    }
    out.write("speed.csv", main.str());
    out.write("speed_levels.csv", levels.str());
    json summary{{"rows", res}};
    if (svg.x.size() >= 2) {
        const LinearFit fit = ols(svg.x, svg.y);
        svg.slope = fit.slope;
        svg.intercept = fit.intercept;
        summary["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
        if (c.svg) out.write("speed.svg", scatter_svg(svg, "a", "speed"));
    }
    return summary;
}

json run_express(const ExperimentConfig& c, int workers, Output& out, RunResult& r) {
    const double lb = lower_bound_speed(c.law);
    const auto speeds = run_replicas(c.reps, c.seed, workers,
                                     [&](std::size_t, std::uint64_t s) { return express_speed(c.law, c.horizon, s, c.max_jumps); });
    const auto coupled = run_replicas(c.coupled_reps, splitmix64(c.seed), workers, [&](std::size_t, std::uint64_t s) {
        return coupled_express_hit(c.law, c.hit_x, s, sim_options(c));
    });
    std::ostringstream a, b;
    a << "replica,speed\n";
    for (std::size_t i = 0; i < speeds.size(); ++i) a << i << ',' << g17(speeds[i]) << '\n';
    b << "replica,express_tau,dual_tau,express_jumps\n";
    std::size_t ok = 0;
    for (std::size_t i = 0; i < coupled.size(); ++i) {
        b << i << ',' << g17(coupled[i].express_tau) << ',' << g17(coupled[i].dual_tau) << ','
          << coupled[i].express_jumps << '\n';
        ok += coupled[i].express_tau >= coupled[i].dual_tau;
    }
    out.write("express_speed.csv", a.str());
    out.write("express_coupled.csv", b.str());
    const Estimate e = estimate(speeds);
    if (ok != coupled.size()) fail(r, "express hit before the dual in " + std::to_string(coupled.size() - ok) + " replicas");
    return {{"lower_bound", lb},
            {"mean_speed", e.mean},
            {"ci_speed", e.ci95},
            {"relative_error", std::abs(e.mean - lb) / lb},
            {"coupled_dominated", ok},
            {"coupled_reps", coupled.size()}};
}

json run_fpp(const ExperimentConfig& c, int workers, Output& out, RunResult& r) {
    const auto rows = domination_suite(c.n_values, c.reps, c.seed, workers);
    std::ostringstream d;
    write_domination_csv(d, rows);
    out.write("domination.csv", d.str());
    json res = json::array();
    for (const auto& row : rows) {
        res.push_back({{"n", row.n},
                       {"pointwise", row.pointwise},
                       {"fpp_below_discr", row.fpp_below_discr},
                       {"discr_below_tau4n", row.discr_below_tau4n}});
        if (!row.pointwise) fail(r, "discretized time exceeded tau_4n at n=" + std::to_string(row.n));
    }
    json summary{{"domination", res}};
    if (!c.linearity_n.empty()) {
        const FppLinearity lin = fpp_linearity(c.linearity_n, c.linearity_reps, splitmix64(c.seed), workers);
        std::ostringstream l;
        l << "n,mean_fpp,ci_fpp\n";
        for (std::size_t i = 0; i < lin.n_values.size(); ++i)
            l << lin.n_values[i] << ',' << g17(lin.times[i].mean) << ',' << g17(lin.times[i].ci95) << '\n';
        out.write("fpp_linearity.csv", l.str());
        summary["linearity"] = {{"slope", lin.fit.slope}, {"intercept", lin.fit.intercept}, {"r2", lin.fit.r2}};
    }
    return summary;
}

json run_twocol_exact(const ExperimentConfig& c, Output& out, RunResult&) {
    const twocol::Extrapolation ex = twocol::extrapolate(c.schedule);
    std::ostringstream s;
    twocol::write_schedule_csv(s, ex);
    out.write("twocol_schedule.csv", s.str());
    if (!ex.monotone) std::fprintf(stderr, "warning: %s\n", ex.warning.c_str());
    return {{"T_square_limit", ex.T_limit}, {"speed", ex.speed}, {"monotone", ex.monotone}, {"warning", ex.warning}};
}

json run_twocol_mc(const ExperimentConfig& c, int workers, Output& out, RunResult&) {
    const auto ret = run_replicas(c.reps, c.seed, workers,
                                  [](std::size_t, std::uint64_t s) { return twocol::simulate_return(s); });
    std::vector<double> T(ret.size()), M(ret.size()), diff(ret.size());
    for (std::size_t i = 0; i < ret.size(); ++i) {
        T[i] = ret[i].T;
        M[i] = static_cast<double>(ret[i].M);
        diff[i] = M[i] - T[i];
    }
    const Estimate eT = estimate(T), eM = estimate(M), eD = estimate(diff);
    const twocol::LongRun lr = twocol::long_run_speed_mc(c.horizon, splitmix64(c.seed));
    std::ostringstream s;
    s << "quantity,mean,ci95\n";
    s << "T_square," << g17(eT.mean) << ',' << g17(eT.ci95) << '\n';
    s << "M_at_return," << g17(eM.mean) << ',' << g17(eM.ci95) << '\n';
    s << "M_minus_T," << g17(eD.mean) << ',' << g17(eD.ci95) << '\n';
    s << "long_run_speed_M," << g17(lr.speed_M) << ",\n";
    s << "long_run_speed_m," << g17(lr.speed_m) << ",\n";
    out.write("twocol_mc.csv", s.str());
    return {{"T_square", eT.mean},
            {"M_at_return", eM.mean},
            {"M_minus_T", eD.mean},
            {"M_minus_T_ci", eD.ci95},
            {"speed_from_ratio", eM.mean / eT.mean},
            {"long_run_speed_M", lr.speed_M},
            {"long_run_speed_m", lr.speed_m}};
}

json run_forward(const ExperimentConfig& c, Output& out, RunResult&) {
    const ForwardState s = forward_run(c.region_a, c.law, c.t_end, c.seed, sim_options(c));
    const auto paths = render_frames(s, c.view, c.resolution, c.frame_times, out.dir(), "frame");
    std::ostringstream f;
    f << "frame,time,occupied_fraction,file\n";
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const Raster r = rasterize(s, c.view, c.resolution, c.frame_times[k]);
        std::size_t black = 0;
        for (unsigned char px : r.pixels) black += px == 0;
        f << k << ',' << g17(c.frame_times[k]) << ',' << g17(static_cast<double>(black) / r.pixels.size()) << ','
          << paths[k].filename().string() << '\n';
        out.note(paths[k].filename().string());
    }
    out.write("frames.csv", f.str());
    return {{"accepted_events", s.occupied.accepted()}, {"frames", paths.size()}};
}

json run_duality(const ExperimentConfig& c, int workers, Output& out, RunResult&) {
    const DualityResult d = duality_check(c.region_a, c.region_b, c.law, c.t_end, c.reps, c.seed, c.mirrored, workers, sim_options(c));
    std::ostringstream s;
    s << "reps,empty_forward,empty_dual,p_forward,p_dual,z,mirrored\n";
    s << d.reps << ',' << d.empty_forward << ',' << d.empty_dual << ',' << g17(d.p_forward) << ',' << g17(d.p_dual)
      << ',' << g17(d.z) << ',' << (c.mirrored ? "true" : "false") << '\n';
    out.write("duality.csv", s.str());
    return {{"p_forward", d.p_forward}, {"p_dual", d.p_dual}, {"z", d.z}, {"within_3", std::abs(d.z) <= 3.0}};
}

}  // namespace

RunResult run(const ExperimentConfig& config, int workers) {
    validate(config);
    RunResult r;
    Output out(config, r);
    json results;
    switch (config.kind) {
        case Kind::SpeedSweep: results = run_speed(config, workers, out, r); break;
        case Kind::Express: results = run_express(config, workers, out, r); break;
        case Kind::FppDomination: results = run_fpp(config, workers, out, r); break;
        case Kind::TwocolExact: results = run_twocol_exact(config, out, r); break;
        case Kind::TwocolMc: results = run_twocol_mc(config, workers, out, r); break;
        case Kind::ForwardFrames: results = run_forward(config, out, r); break;
        case Kind::Duality: results = run_duality(config, workers, out, r); break;
    }
    json summary{{"version", kVersion}, {"config", config_json(config)}, {"results", results}, {"status", r.status}};
    if (!r.message.empty()) summary["message"] = r.message;
    out.write("summary.json", summary.dump(2) + "\n");
    return r;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return kConfigError;
    if (dynamic_cast<const BudgetExceeded*>(&e)) return kBudgetExceeded;
    if (dynamic_cast<const std::logic_error*>(&e)) return kInvariantViolation;
    return kConfigError;
}

std::string scatter_svg(const SvgSeries& s, const std::string& x_label, const std::string& y_label) {
    const double W = 480, H = 360, L = 56, R = 16, T = 16, B = 44;
    double xmax = 0, ymax = 0;
    for (double x : s.x) xmax = std::max(xmax, x);
    for (double y : s.y) ymax = std::max(ymax, y);
    xmax = xmax > 0 ? xmax * 1.1 : 1;
    ymax = ymax > 0 ? ymax * 1.1 : 1;
    auto px = [&](double x) { return L + x / xmax * (W - L - R); };
    auto py = [&](double y) { return H - B - y / ymax * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    const double x1 = 0, x2 = xmax;
    o << "<line x1=\"" << px(x1) << "\" y1=\"" << py(s.intercept + s.slope * x1) << "\" x2=\"" << px(x2)
      << "\" y2=\"" << py(s.intercept + s.slope * x2) << "\" stroke=\"grey\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
        o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"black\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    o << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "fit: %.3f x + %.3f", s.slope, s.intercept);
    o << "<text x=\"" << L + 8 << "\" y=\"" << T + 14 << "\">" << buf << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace slfv
