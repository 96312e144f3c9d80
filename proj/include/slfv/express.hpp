#pragma once

#include <cstdint>

#include "slfv/ancestral.hpp"
#include "slfv/events.hpp"

namespace slfv {

struct ExpressState {
    Point position;
    double time = 0.0;
    std::uint64_t jumps = 0;
};

struct ExpressJump {
    ExpressState next;
    Point center;       // centre of the covering event
    std::size_t atom = 0;
    double holding = 0.0;
};

/// One jump of the standalone chain: wait Exp(jump_mass), pick an atom
/// proportionally to weight * area, place a covering event and move to its
/// rightmost point.
ExpressJump express_jump(const ExpressState& state, const ShapeLaw& law, Rng& rng);

/// jump_mass(law) * mean_extreme_offset(law).
double lower_bound_speed(const ShapeLaw& law);

/// First jump time at which position.x >= level. Returns 0 for level <= 0.
double express_hit(const ShapeLaw& law, double level, std::uint64_t seed, std::uint64_t max_jumps = 10'000'000);

/// X_t / t at t = horizon.
double express_speed(const ShapeLaw& law, double horizon, std::uint64_t seed,
                     std::uint64_t max_jumps = 100'000'000);

struct CoupledHit {
    double express_tau = 0.0;
    double dual_tau = 0.0;
    std::uint64_t express_jumps = 0;
};

/// Express chain and dual driven by one event stream. Throws
/// ContractViolation if an event covering the express position is not
/// accepted by the dual.
CoupledHit coupled_express_hit(const ShapeLaw& law, double level, std::uint64_t seed, SimulationOptions opts = {});

}  // namespace slfv
