#include "slfv/express.hpp"

#include <cmath>

#include "slfv/errors.hpp"

namespace slfv {

ExpressJump express_jump(const ExpressState& state, const ShapeLaw& law, Rng& rng) {
    ExpressJump j;
    j.holding = std::exponential_distribution<double>(jump_mass(law))(rng);
    j.atom = draw_atom_area_biased(law, rng);
    const ShapeAtom& at = law.atoms()[j.atom];
    // z covers p iff z - p lies in the origin-centred ellipse (central symmetry),
    // so a covering centre is p plus a uniform point of that ellipse.
    const Point u = sample_uniform(Ellipse{{0.0, 0.0}, at.a, at.b, at.gamma}, rng);
    j.center = state.position + u;
    const ExtremeOffset ext = max_horizontal_offset(at.a, at.b, at.gamma);
    j.next.position = j.center + ext.offset;
    j.next.time = state.time + j.holding;
    j.next.jumps = state.jumps + 1;
    return j;
}

double lower_bound_speed(const ShapeLaw& law) { return jump_mass(law) * mean_extreme_offset(law); }

double express_hit(const ShapeLaw& law, double level, std::uint64_t seed, std::uint64_t max_jumps) {
    if (level <= 0.0) return 0.0;
    Rng rng(seed);
    ExpressState s;
    while (s.position.x < level) {
        s = express_jump(s, law, rng).next;
        if (s.jumps > max_jumps) throw BudgetExceeded("express jump budget exceeded");
    }
    return s.time;
}

double express_speed(const ShapeLaw& law, double horizon, std::uint64_t seed, std::uint64_t max_jumps) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    Rng rng(seed);
    ExpressState s;
    for (;;) {
        const ExpressJump j = express_jump(s, law, rng);
        if (j.next.time > horizon) break;
        s = j.next;
        if (s.jumps > max_jumps) throw BudgetExceeded("express jump budget exceeded");
    }
    return s.position.x / horizon;
}

CoupledHit coupled_express_hit(const ShapeLaw& law, double level, std::uint64_t seed, SimulationOptions opts) {
    if (!(level > 0.0)) throw DomainError("hitting level must be positive");
    GrowthSimulation sim(AncestralState::from_point({0.0, 0.0}, law.r_max()), law, seed, opts);
    CoupledHit out;
    bool dual_done = false;
    Point pos{0.0, 0.0};
    while (pos.x < level) {
        const auto s = sim.step();
        if (!dual_done && sim.state().reach() >= level) {
            out.dual_tau = sim.state().time();
            dual_done = true;
        }
        const Ellipse e = s.event.ellipse();
        if (!contains(e, pos)) continue;
        if (!s.accepted) throw ContractViolation("event covering the express position was rejected by the dual");
        const ExtremeOffset ext = max_horizontal_offset(e.a, e.b, e.gamma);
        pos = e.center + ext.offset;
        ++out.express_jumps;
        if (!contains(e, pos)) throw ContractViolation("express position left its covering ellipse");
    }
    out.express_tau = sim.state().time();
    if (!dual_done) throw ContractViolation("express chain reached the level before the dual");
    return out;
}

}  // namespace slfv
