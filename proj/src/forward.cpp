#include "slfv/forward.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "slfv/errors.hpp"
#include "slfv/replicas.hpp"
#include "slfv/stats.hpp"

namespace slfv {

namespace {

void check_seed(const std::vector<Primitive>& seed) {
    if (seed.empty()) throw DomainError("seed region must contain at least one primitive");
}

}  // namespace

ForwardState forward_run(const std::vector<Primitive>& seed_region, const ShapeLaw& law, double t_end,
                         std::uint64_t seed, SimulationOptions opts) {
    check_seed(seed_region);
    if (!(t_end >= 0.0)) throw DomainError("t_end must be non-negative");
    GrowthSimulation sim(AncestralState::from_region(seed_region, law.r_max()), law, seed, opts);
    sim.run_until(t_end, [](const Event&) { return false; });
    return {sim.state(), t_end, sim.source().window()};
}

bool occupied_at(const ForwardState& s, Point p, double t) { return s.occupied.region().contains_at(p, t); }

bool reaches(const std::vector<Primitive>& start, const std::vector<Primitive>& target, const ShapeLaw& law,
             double t, std::uint64_t seed, SimulationOptions opts) {
    check_seed(start);
    check_seed(target);
    for (const auto& p : start)
        for (const auto& q : target)
            if (intersects_positively(p, q)) return true;
    GrowthSimulation sim(AncestralState::from_region(start, law.r_max()), law, seed, opts);
    return sim.run_until(t, [&](const Event& ev) {
        const Ellipse e = ev.ellipse();
        for (const auto& q : target)
            if (intersects_positively(q, e)) return true;
        return false;
    });
}

DualityResult duality_check(const std::vector<Primitive>& A, const std::vector<Primitive>& B, const ShapeLaw& law,
                            double t, std::size_t reps, std::uint64_t seed, bool mirrored_dual, int workers,
                            SimulationOptions opts) {
    if (reps < 1) throw DomainError("duality check needs at least one replica");
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    const ShapeLaw dual_law = mirrored_dual ? mirror(law) : law;
    const auto fwd = run_replicas(reps, seed, workers, [&](std::size_t, std::uint64_t s) {
        return static_cast<int>(!reaches(A, B, law, t, s, opts));
    });
    const auto dual = run_replicas(reps, splitmix64(seed ^ 0xd1a1ULL), workers, [&](std::size_t, std::uint64_t s) {
        return static_cast<int>(!reaches(B, A, dual_law, t, s, opts));
    });
    DualityResult r;
    r.reps = reps;
    for (std::size_t i = 0; i < reps; ++i) {
        r.empty_forward += static_cast<std::size_t>(fwd[i]);
        r.empty_dual += static_cast<std::size_t>(dual[i]);
    }
    r.p_forward = static_cast<double>(r.empty_forward) / static_cast<double>(reps);
    r.p_dual = static_cast<double>(r.empty_dual) / static_cast<double>(reps);
    r.z = two_proportion_z(r.empty_forward, reps, r.empty_dual, reps);
    return r;
}

Raster rasterize(const ForwardState& s, const Rect& view, double pixels_per_unit, double t) {
    if (view.degenerate()) throw DomainError("view must be non-degenerate");
    if (!(pixels_per_unit > 0.0)) throw DomainError("resolution must be positive");
    Raster r;
    r.width = std::max(1, static_cast<int>(std::lround(view.width() * pixels_per_unit)));
    r.height = std::max(1, static_cast<int>(std::lround(view.height() * pixels_per_unit)));
    r.pixels.assign(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height), 255);
    const double dx = view.width() / r.width, dy = view.height() / r.height;
    for (int row = 0; row < r.height; ++row) {
        const double y = view.ymax - (row + 0.5) * dy;
        for (int col = 0; col < r.width; ++col) {
            const Point p{view.xmin + (col + 0.5) * dx, y};
            if (occupied_at(s, p, t)) r.pixels[static_cast<std::size_t>(row) * r.width + col] = 0;
        }
    }
    return r;
}

void write_pgm(const std::filesystem::path& path, const Raster& r) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "P5\n" << r.width << ' ' << r.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(r.pixels.data()), static_cast<std::streamsize>(r.pixels.size()));
}

std::vector<std::filesystem::path> render_frames(const ForwardState& s, const Rect& view, double pixels_per_unit,
                                                 const std::vector<double>& times,
                                                 const std::filesystem::path& dir, const std::string& prefix) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> out;
    char name[64];
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] > s.time) throw DomainError("frame time beyond the simulated horizon");
        std::snprintf(name, sizeof name, "%s_%03zu.pgm", prefix.c_str(), k);
        out.push_back(dir / name);
        write_pgm(out.back(), rasterize(s, view, pixels_per_unit, times[k]));
    }
    return out;
}

}  // namespace slfv
