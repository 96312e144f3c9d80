#include "slfv/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "slfv/errors.hpp"

namespace slfv {

namespace {

const std::pair<Kind, const char*> kKindNames[] = {
    {Kind::SpeedSweep, "speed-sweep"},     {Kind::Express, "express"},     {Kind::FppDomination, "fpp-domination"},
    {Kind::TwocolExact, "twocol-exact"},   {Kind::TwocolMc, "twocol-mc"},  {Kind::ForwardFrames, "forward-frames"},
    {Kind::Duality, "duality"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    if (s == "pi") return std::numbers::pi;
    if (s == "1/pi") return 1.0 / std::numbers::pi;
    double x = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(x))
        throw ConfigError(key + ": not a finite number: '" + s + "'");
    return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    Int x{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& item : split(v, ',')) out.push_back(to_int<int>(key, item));
    return out;
}

ShapeLaw to_law(const std::string& key, const std::string& v) {
    std::vector<ShapeAtom> atoms;
    for (const auto& item : split(v, ';')) {
        const auto w = words(item);
        if (w.size() != 4) throw ConfigError(key + ": atom needs 'weight a b gamma' (or 'unit a b gamma')");
        ShapeAtom at;
        at.a = to_double(key, w[1]);
        at.b = to_double(key, w[2]);
        at.gamma = to_double(key, w[3]);
        at.weight = w[0] == "unit" ? 1.0 / (std::numbers::pi * at.a * at.b) : to_double(key, w[0]);
        atoms.push_back(at);
    }
    try {
        return ShapeLaw(std::move(atoms));
    } catch (const DomainError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::vector<Primitive> to_region(const std::string& key, const std::string& v) {
    std::vector<Primitive> out;
    for (const auto& item : split(v, ';')) {
        const auto w = words(item);
        auto num = [&](std::size_t i) { return to_double(key, w[i]); };
        if (w[0] == "disk" && w.size() == 4)
            out.push_back(Ellipse{{num(1), num(2)}, num(3), num(3), 0.0});
        else if (w[0] == "ellipse" && w.size() == 6)
            out.push_back(Ellipse{{num(1), num(2)}, num(3), num(4), num(5)});
        else if (w[0] == "rect" && w.size() == 5)
            out.push_back(Rect{num(1), num(2), num(3), num(4)});
        else
            throw ConfigError(key + ": expected 'disk x y r', 'ellipse x y a b gamma' or 'rect xmin xmax ymin ymax'");
    }
    return out;
}

std::vector<std::pair<int, double>> to_schedule(const std::string& key, const std::string& v) {
    std::vector<std::pair<int, double>> out;
    for (const auto& item : split(v, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(key + ": expected N:epsilon pairs");
        out.emplace_back(to_int<int>(key, item.substr(0, colon)), to_double(key, item.substr(colon + 1)));
    }
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += fmt(xs[i]);
        else
            s += std::to_string(xs[i]);
    }
    return s;
}

std::string law_text(const ShapeLaw& law) {
    std::string s;
    for (const auto& at : law.atoms()) {
        if (!s.empty()) s += "; ";
        s += fmt(at.weight) + " " + fmt(at.a) + " " + fmt(at.b) + " " + fmt(at.gamma);
    }
    return s;
}

std::string region_text(const std::vector<Primitive>& r) {
    std::string s;
    for (const auto& p : r) {
        if (!s.empty()) s += "; ";
        if (const auto* e = std::get_if<Ellipse>(&p))
            s += "ellipse " + fmt(e->center.x) + " " + fmt(e->center.y) + " " + fmt(e->a) + " " + fmt(e->b) + " " +
                 fmt(e->gamma);
        else {
            const auto& q = std::get<Rect>(p);
            s += "rect " + fmt(q.xmin) + " " + fmt(q.xmax) + " " + fmt(q.ymin) + " " + fmt(q.ymax);
        }
    }
    return s;
}

std::string schedule_text(const std::vector<std::pair<int, double>>& s) {
    std::string out;
    for (const auto& [N, eps] : s) {
        if (!out.empty()) out += ", ";
        out += std::to_string(N) + ":" + fmt(eps);
    }
    return out;
}

}  // namespace

std::string to_string(Kind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "unknown";
}

Kind kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kKindNames)
        if (s == name) return kind;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

ExperimentConfig default_config(Kind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
        case Kind::SpeedSweep:
            break;
        case Kind::Express:
            c.reps = 30;
            break;
        case Kind::FppDomination:
            c.reps = 200;
            break;
        case Kind::TwocolExact:
            for (int N : {16, 32, 64, 128}) c.schedule.emplace_back(N, 1.0 / (static_cast<double>(N) * N * N));
            break;
        case Kind::TwocolMc:
            c.reps = 1000000;
            c.horizon = 1e6;
            break;
        case Kind::ForwardFrames:
            c.region_a = {Rect{-40.0, 0.0, -20.0, 20.0}};
            c.t_end = 6.0;
            c.frame_times = {0.0, 2.0, 4.0, 6.0};
            c.view = {-4.0, 16.0, -20.0, 20.0};
            c.resolution = 8.0;
            break;
        case Kind::Duality:
            c.reps = 10000;
            c.region_a = {Ellipse{{0.0, 0.0}, 1.0, 1.0, 0.0}};
            c.region_b = {Ellipse{{4.0, 0.0}, 1.0, 1.0, 0.0}};
            c.t_end = 2.0;
            break;
    }
    return c;
}

void set_field(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in), v = trim(value_in);
    if (key == "kind")
        c = default_config(kind_from_string(v));
    else if (key == "seed")
        c.seed = to_int<std::uint64_t>(key, v);
    else if (key == "reps")
        c.reps = to_int<std::size_t>(key, v);
    else if (key == "max_jumps")
        c.max_jumps = to_int<std::uint64_t>(key, v);
    else if (key == "out")
        c.out = v;
    else if (key == "law")
        c.law = to_law(key, v);
    else if (key == "xs")
        c.xs = to_doubles(key, v);
    else if (key == "sweep_a")
        c.sweep_a = to_doubles(key, v);
    else if (key == "svg")
        c.svg = to_bool(key, v);
    else if (key == "horizon")
        c.horizon = to_double(key, v);
    else if (key == "hit_x")
        c.hit_x = to_double(key, v);
    else if (key == "coupled_reps")
        c.coupled_reps = to_int<std::size_t>(key, v);
    else if (key == "n_values")
        c.n_values = to_ints(key, v);
    else if (key == "linearity_n")
        c.linearity_n = to_ints(key, v);
    else if (key == "linearity_reps")
        c.linearity_reps = to_int<std::size_t>(key, v);
    else if (key == "schedule")
        c.schedule = to_schedule(key, v);
    else if (key == "region_a")
        c.region_a = to_region(key, v);
    else if (key == "region_b")
        c.region_b = to_region(key, v);
    else if (key == "t_end")
        c.t_end = to_double(key, v);
    else if (key == "frame_times")
        c.frame_times = to_doubles(key, v);
    else if (key == "view") {
        const auto r = to_doubles(key, v);
        if (r.size() != 4) throw ConfigError("view: expected xmin, xmax, ymin, ymax");
        c.view = {r[0], r[1], r[2], r[3]};
    } else if (key == "resolution")
        c.resolution = to_double(key, v);
    else if (key == "mirrored")
        c.mirrored = to_bool(key, v);
    else
        throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            set_field(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(ss.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::map<std::string, std::string> fields(const ExperimentConfig& c) {
    return {
        {"kind", to_string(c.kind)},
        {"seed", std::to_string(c.seed)},
        {"reps", std::to_string(c.reps)},
        {"out", c.out},
        {"max_jumps", std::to_string(c.max_jumps)},
        {"law", law_text(c.law)},
        {"xs", join(c.xs)},
        {"sweep_a", join(c.sweep_a)},
        {"svg", c.svg ? "true" : "false"},
        {"horizon", fmt(c.horizon)},
        {"hit_x", fmt(c.hit_x)},
        {"coupled_reps", std::to_string(c.coupled_reps)},
        {"n_values", join(c.n_values)},
        {"linearity_n", join(c.linearity_n)},
        {"linearity_reps", std::to_string(c.linearity_reps)},
        {"schedule", schedule_text(c.schedule)},
        {"region_a", region_text(c.region_a)},
        {"region_b", region_text(c.region_b)},
        {"t_end", fmt(c.t_end)},
        {"frame_times", join(c.frame_times)},
        {"view", fmt(c.view.xmin) + ", " + fmt(c.view.xmax) + ", " + fmt(c.view.ymin) + ", " + fmt(c.view.ymax)},
        {"resolution", fmt(c.resolution)},
        {"mirrored", c.mirrored ? "true" : "false"},
    };
}

std::string serialize(const ExperimentConfig& c) {
    const auto f = fields(c);
    // kind first: assigning it resets the other fields to that kind's defaults.
    std::string s = "kind = " + f.at("kind") + "\n";
    for (const auto& [k, v] : f)
        if (k != "kind") s += k + " = " + v + "\n";
    return s;
}

void validate(const ExperimentConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    need(!c.out.empty(), "out: output directory must be set");
    need(c.max_jumps >= 1, "max_jumps: must be at least 1");
    switch (c.kind) {
        case Kind::SpeedSweep: {
            need(c.reps >= 2, "reps: need at least 2");
            std::vector<double> xs = c.xs;
            std::sort(xs.begin(), xs.end());
            need(!xs.empty() && xs.front() > 0.0, "xs: levels must be positive");
            need(std::unique(xs.begin(), xs.end()) - xs.begin() >= 2, "xs: need at least 2 distinct levels");
            for (double a : c.sweep_a) need(a > 0.0, "sweep_a: values must be positive");
            break;
        }
        case Kind::Express:
            need(c.reps >= 2, "reps: need at least 2");
            need(c.horizon > 0.0, "horizon: must be positive");
            need(c.hit_x > 0.0, "hit_x: must be positive");
            need(c.coupled_reps >= 1, "coupled_reps: need at least 1");
            break;
        case Kind::FppDomination:
            need(c.reps >= 2, "reps: need at least 2");
            need(!c.n_values.empty(), "n_values: need at least one value");
            for (int n : c.n_values) need(n >= 1, "n_values: values must be >= 1");
            for (int n : c.linearity_n) need(n >= 1, "linearity_n: values must be >= 1");
            need(c.linearity_n.empty() || c.linearity_n.size() >= 2, "linearity_n: need 0 or at least 2 values");
            need(c.linearity_n.empty() || c.linearity_reps >= 2, "linearity_reps: need at least 2");
            break;
        case Kind::TwocolExact:
            need(!c.schedule.empty(), "schedule: need at least one N:epsilon pair");
            for (const auto& [N, eps] : c.schedule) need(N >= 3 && eps > 0.0, "schedule: need N >= 3 and epsilon > 0");
            break;
        case Kind::TwocolMc:
            need(c.reps >= 2, "reps: need at least 2");
            need(c.horizon > 0.0, "horizon: must be positive");
            break;
        case Kind::ForwardFrames:
            need(!c.region_a.empty(), "region_a: seed region must be non-empty");
            need(c.t_end >= 0.0, "t_end: must be non-negative");
            for (double t : c.frame_times) need(t >= 0.0 && t <= c.t_end, "frame_times: must lie in [0, t_end]");
            need(!c.view.degenerate(), "view: must be non-degenerate");
            need(c.resolution > 0.0, "resolution: must be positive");
            break;
        case Kind::Duality:
            need(c.reps >= 1, "reps: need at least 1");
            need(!c.region_a.empty() && !c.region_b.empty(), "region_a, region_b: both regions must be non-empty");
            need(c.t_end >= 0.0, "t_end: must be non-negative");
            break;
    }
    for (const auto* region : {&c.region_a, &c.region_b})
        for (const auto& p : *region) {
            if (const auto* e = std::get_if<Ellipse>(&p)) {
                try {
                    validate_shape(e->a, e->b, e->gamma);
                } catch (const DomainError& err) {
                    throw ConfigError(std::string("region: ") + err.what());
                }
            } else {
                need(std::get<Rect>(p).area() > 0.0, "region: rectangles must have positive area");
            }
        }
}

}  // namespace slfv
