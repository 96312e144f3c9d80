#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slfv/ancestral.hpp"
#include "slfv/events.hpp"

namespace slfv {

enum class Kind { SpeedSweep, Express, FppDomination, TwocolExact, TwocolMc, ForwardFrames, Duality };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);

/// Flat experiment description. Every field has a default so a config file
/// only needs the keys it changes.
struct ExperimentConfig {
    Kind kind = Kind::SpeedSweep;
    std::uint64_t seed = 1;
    std::size_t reps = 30;
    std::string out = "out";
    ShapeLaw law = ShapeLaw::unit_rate(1.0, 1.0, 0.0);
    std::uint64_t max_jumps = 10'000'000;  // accepted events per replica

    // speed-sweep: if sweep_a is non-empty, one row per a with b = 1/a,
    // gamma = 0, total mass 1/pi; otherwise a single row for `law`.
    std::vector<double> xs{10.0, 20.0, 30.0, 40.0};
    std::vector<double> sweep_a;
    bool svg = false;

    // express
    double horizon = 1e4;
    double hit_x = 20.0;
    std::size_t coupled_reps = 200;

    // fpp-domination
    std::vector<int> n_values{5, 10};
    std::vector<int> linearity_n{4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::size_t linearity_reps = 500;

    // twocol-exact: (N, epsilon) pairs
    std::vector<std::pair<int, double>> schedule;

    // forward-frames and duality
    std::vector<Primitive> region_a;
    std::vector<Primitive> region_b;
    double t_end = 2.0;
    std::vector<double> frame_times;
    Rect view{-10.0, 10.0, -10.0, 10.0};
    double resolution = 10.0;  // pixels per unit length
    bool mirrored = false;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Defaults for a kind (schedule, regions, ...).
ExperimentConfig default_config(Kind kind);

/// Apply one `key = value` assignment. Throws ConfigError.
void set_field(ExperimentConfig& c, const std::string& key, const std::string& value);

/// Parse a key=value file on top of `base`. '#' starts a comment.
/// Errors carry the line number.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

/// Canonical serialization, one key per line; doubles printed with 17
/// significant digits so parse(serialize(c)) == c.
std::string serialize(const ExperimentConfig& c);
std::map<std::string, std::string> fields(const ExperimentConfig& c);

/// Range checks on every field relevant to the kind. Throws ConfigError.
void validate(const ExperimentConfig& c);

}  // namespace slfv
