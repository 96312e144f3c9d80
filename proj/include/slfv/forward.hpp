#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slfv/ancestral.hpp"

namespace slfv {

struct ForwardState {
    AncestralState occupied;  // seeds at time 0 plus accepted ellipses with their times
    double time = 0.0;
    Rect window;
};

/// Forward set-valued process from a finite seed, all events up to t_end.
ForwardState forward_run(const std::vector<Primitive>& seed_region, const ShapeLaw& law, double t_end,
                         std::uint64_t seed, SimulationOptions opts = {});

bool occupied_at(const ForwardState& s, Point p, double t);

/// True if the set started from `start` positively overlaps `target` at
/// some time in [0, t]. Stops at the first overlap.
bool reaches(const std::vector<Primitive>& start, const std::vector<Primitive>& target, const ShapeLaw& law,
             double t, std::uint64_t seed, SimulationOptions opts = {});

struct DualityResult {
    std::size_t reps = 0;
    std::size_t empty_forward = 0;
    std::size_t empty_dual = 0;
    double p_forward = 0.0;
    double p_dual = 0.0;
    double z = 0.0;
};

/// Forward runs from A under `law` against dual runs from B under `law`
/// (or its mirror image when `mirrored_dual`).
DualityResult duality_check(const std::vector<Primitive>& A, const std::vector<Primitive>& B, const ShapeLaw& law,
                            double t, std::size_t reps, std::uint64_t seed, bool mirrored_dual = false,
                            int workers = 1, SimulationOptions opts = {});

/// 8-bit grey image, row 0 at the top of the view.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> pixels;  // 0 occupied, 255 empty
};

Raster rasterize(const ForwardState& s, const Rect& view, double pixels_per_unit, double t);
void write_pgm(const std::filesystem::path& path, const Raster& r);

/// One binary PGM per time, named <prefix>_<k>.pgm. Returns the paths.
std::vector<std::filesystem::path> render_frames(const ForwardState& s, const Rect& view, double pixels_per_unit,
                                                 const std::vector<double>& times,
                                                 const std::filesystem::path& dir, const std::string& prefix = "frame");

}  // namespace slfv
