#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slfv/errors.hpp"
#include "slfv/experiment.hpp"

namespace {

int default_workers() {
    if (const char* env = std::getenv("SLFV_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::fprintf(stderr, "ignoring invalid SLFV_WORKERS='%s'\n", env);
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation toolkit for the infinite-parent SLFV and its bounds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", slfv::kVersion);

    struct Common {
        std::string config;
        std::uint64_t seed = 0;
        std::size_t reps = 0;
        std::string out;
        int workers = 1;
        std::vector<std::string> sets;
        std::string mode;
    };
    Common opt;
    opt.workers = default_workers();

    const std::map<std::string, std::pair<slfv::Kind, std::string>> subs{
        {"speed", {slfv::Kind::SpeedSweep, "Dual hitting times and growth-speed fit"}},
        {"express", {slfv::Kind::Express, "Express chain speed and coupled domination"}},
        {"fpp", {slfv::Kind::FppDomination, "Lattice FPP, cell discretization and domination sandwich"}},
        {"twocol", {slfv::Kind::TwocolExact, "Two-column growth process (exact chain or Monte Carlo)"}},
        {"forward", {slfv::Kind::ForwardFrames, "Forward process frames from a finite seed"}},
        {"duality", {slfv::Kind::Duality, "Monte Carlo check of the duality relation"}},
    };
    std::map<std::string, CLI::App*> handles;
    for (const auto& [name, info] : subs) {
        CLI::App* sub = app.add_subcommand(name, info.second);
        sub->add_option("--config", opt.config, "key = value experiment file");
        sub->add_option("--seed", opt.seed, "master seed");
        sub->add_option("--reps", opt.reps, "replica count");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--workers", opt.workers, "worker threads (default $SLFV_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--set", opt.sets, "extra key=value overrides");
        if (name == "twocol")
            sub->add_option("--mode", opt.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
        handles[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : slfv::kConfigError;
    }

    std::string which;
    for (const auto& [name, sub] : handles)
        if (sub->parsed()) which = name;

    try {
        slfv::Kind kind = subs.at(which).first;
        if (which == "twocol" && opt.mode == "mc") kind = slfv::Kind::TwocolMc;
        slfv::ExperimentConfig cfg = slfv::default_config(kind);
        if (!opt.config.empty()) cfg = slfv::load_config(opt.config, cfg);
        const bool twocol_ok = which == "twocol" && (cfg.kind == slfv::Kind::TwocolExact || cfg.kind == slfv::Kind::TwocolMc);
        if (cfg.kind != kind && !twocol_ok)
            throw slfv::ConfigError("config kind '" + slfv::to_string(cfg.kind) + "' does not match subcommand '" +
                                    which + "'");
        if (which == "twocol" && !opt.mode.empty() && cfg.kind != kind) cfg.kind = kind;
        // Flags win over the file.
        for (const auto& s : opt.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw slfv::ConfigError("--set expects key=value, got '" + s + "'");
            if (s.substr(0, eq).find("kind") != std::string::npos) throw slfv::ConfigError("--set cannot change kind");
            slfv::set_field(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (app.get_subcommand(which)->count("--seed")) cfg.seed = opt.seed;
        if (app.get_subcommand(which)->count("--reps")) cfg.reps = opt.reps;
        if (app.get_subcommand(which)->count("--out")) cfg.out = opt.out;

        const slfv::RunResult r = slfv::run(cfg, opt.workers);
        for (const auto& f : r.files) std::printf("%s/%s\n", cfg.out.c_str(), f.c_str());
        if (r.status != slfv::kOk) std::fprintf(stderr, "invariant violation: %s\n", r.message.c_str());
        return r.status;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return slfv::exit_code_for(e);
    }
}
