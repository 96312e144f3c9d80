#include "slfv/ancestral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "slfv/errors.hpp"
#include "slfv/replicas.hpp"
#include "slfv/stats.hpp"

namespace slfv {

bool intersects_positively(const Primitive& p, const Ellipse& e) {
    return std::visit([&](const auto& q) { return intersects_positively(e, q); }, p);
}

bool intersects_positively(const Primitive& p, const Primitive& q) {
    return std::visit(
        [](const auto& u, const auto& v) -> bool {
            using U = std::decay_t<decltype(u)>;
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<U, Rect> && std::is_same_v<V, Ellipse>)
                return intersects_positively(v, u);
            else
                return intersects_positively(u, v);
        },
        p, q);
}

Rect bounding_box(const Primitive& p) {
    return std::visit(
        [](const auto& q) -> Rect {
            if constexpr (std::is_same_v<std::decay_t<decltype(q)>, Rect>)
                return q;
            else
                return bounding_box(q);
        },
        p);
}

namespace {

bool primitive_contains(const Primitive& p, Point x) {
    return std::visit([&](const auto& q) { return contains(q, x); }, p);
}

}  // namespace

Region::Region(double cell_size) : cell_(cell_size) {
    if (!(cell_ > 0.0)) throw DomainError("region cell size must be positive");
}

long long Region::cell_of(double v) const { return static_cast<long long>(std::floor(v / cell_)); }

Region::Key Region::key(long long i, long long j) const {
    return (static_cast<Key>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
}

template <class F>
bool Region::any_near(Point p, F&& pred) const {
    const long long ci = cell_of(p.x), cj = cell_of(p.y);
    for (long long i = ci - 1; i <= ci + 1; ++i)
        for (long long j = cj - 1; j <= cj + 1; ++j) {
            const auto it = hash_.find(key(i, j));
            if (it == hash_.end()) continue;
            for (const std::uint32_t idx : it->second)
                if (pred(idx)) return true;
        }
    return false;
}

void Region::add(const Primitive& p, double time) {
    const Rect box = bounding_box(p);
    bounds_ = empty() ? box : bounding_union(bounds_, box);
    const Ellipse* e = std::get_if<Ellipse>(&p);
    if (e && std::max(e->a, e->b) <= 0.5 * cell_) {
        hash_[key(cell_of(e->center.x), cell_of(e->center.y))].push_back(
            static_cast<std::uint32_t>(ellipses_.size()));
        ellipses_.push_back(*e);
        ellipse_times_.push_back(time);
    } else {
        large_.push_back(p);
        large_times_.push_back(time);
    }
}

bool Region::overlaps(const Ellipse& e) const {
    if (empty() || !intersects_positively(bounding_box(e), bounds_)) return false;
    if (any_near(e.center, [&](std::uint32_t i) { return intersects_positively(ellipses_[i], e); })) return true;
    return std::any_of(large_.begin(), large_.end(),
                       [&](const Primitive& p) { return intersects_positively(p, e); });
}

bool Region::overlaps_at(const Ellipse& e, double t) const {
    if (any_near(e.center, [&](std::uint32_t i) {
            return ellipse_times_[i] <= t && intersects_positively(ellipses_[i], e);
        }))
        return true;
    for (std::size_t i = 0; i < large_.size(); ++i)
        if (large_times_[i] <= t && intersects_positively(large_[i], e)) return true;
    return false;
}

bool Region::contains(Point p) const { return contains_at(p, std::numeric_limits<double>::infinity()); }

bool Region::contains_at(Point p, double t) const {
    if (any_near(p, [&](std::uint32_t i) { return ellipse_times_[i] <= t && slfv::contains(ellipses_[i], p); }))
        return true;
    for (std::size_t i = 0; i < large_.size(); ++i)
        if (large_times_[i] <= t && primitive_contains(large_[i], p)) return true;
    return false;
}

AncestralState AncestralState::from_point(Point origin, double r_max) {
    AncestralState s(r_max);
    s.origin_ = origin;
    return s;
}

AncestralState AncestralState::from_region(const std::vector<Primitive>& seeds, double r_max) {
    if (seeds.empty()) throw DomainError("region seed must contain at least one primitive");
    AncestralState s(r_max);
    s.point_phase_ = false;
    for (const auto& p : seeds) {
        const Rect box = bounding_box(p);
        if (!(box.area() > 0.0)) throw DomainError("seed primitives must have positive area");
        s.region_.add(p, 0.0);
    }
    return s;
}

bool AncestralState::apply_event(const Event& ev) {
    if (ev.time < time_) throw ContractViolation("event out of time order");
    time_ = ev.time;
    const Ellipse e = ev.ellipse();
    bool accept = false;
    if (point_phase_) {
        accept = contains(e, origin_);
        if (accept) point_phase_ = false;
    } else {
        accept = region_.overlaps(e);
    }
    if (accept) {
        region_.add(e, ev.time);
        ++accepted_;
    }
    return accept;
}

Rect AncestralState::extent() const {
    if (point_phase_) return {origin_.x, origin_.x, origin_.y, origin_.y};
    return region_.bounds();
}

namespace {

Rect initial_window(const AncestralState& s, double r_max, const SimulationOptions& o) {
    if (!o.lazy_window) return o.static_window;
    return s.extent().dilated(o.margin_factor * r_max);
}

}  // namespace

GrowthSimulation::GrowthSimulation(AncestralState state, const ShapeLaw& law, std::uint64_t seed,
                                   SimulationOptions opts)
    : state_(std::move(state)),
      source_(law, initial_window(state_, law.r_max(), opts), Rng(seed), opts.slab),
      opts_(opts),
      r_max_(law.r_max()) {
    if (state_.region().cell_size() < 2.0 * r_max_ * (1.0 - 1e-12))
        throw DomainError("state hash cell is smaller than 2 r_max of the law");
    ensure_window();
}

void GrowthSimulation::ensure_window() {
    const Rect required = state_.extent().dilated(r_max_);
    if (opts_.lazy_window)
        source_.expand(required, opts_.margin_factor * r_max_, state_.time());
    else if (!source_.window().contains(required))
        throw ContractViolation("static window too small for the current state");
}

GrowthSimulation::Step GrowthSimulation::step() {
    Step s;
    s.event = source_.next();
    s.accepted = state_.apply_event(s.event);
    if (s.accepted) {
        if (state_.accepted() > opts_.max_jumps)
            throw BudgetExceeded("jump budget of " + std::to_string(opts_.max_jumps) + " exceeded");
        ensure_window();
    }
    return s;
}

bool GrowthSimulation::window_covers_state() const {
    return source_.window().contains(state_.extent().dilated(r_max_));
}

HitResult hit_halfplane(const ShapeLaw& law, double level, std::uint64_t seed, SimulationOptions opts) {
    if (!(level > 0.0)) throw DomainError("hitting level must be positive");
    GrowthSimulation sim(AncestralState::from_point({0.0, 0.0}, law.r_max()), law, seed, opts);
    while (sim.state().reach() < level) sim.step();
    return {sim.state().time(), sim.state().accepted()};
}

std::vector<double> hit_levels(const ShapeLaw& law, const std::vector<double>& levels, std::uint64_t seed,
                               SimulationOptions opts) {
    if (levels.empty()) throw DomainError("hit_levels needs at least one level");
    if (!(levels.front() > 0.0)) throw DomainError("hitting levels must be positive");
    if (!std::is_sorted(levels.begin(), levels.end())) throw DomainError("hitting levels must be increasing");
    GrowthSimulation sim(AncestralState::from_point({0.0, 0.0}, law.r_max()), law, seed, opts);
    std::vector<double> out;
    out.reserve(levels.size());
    for (const double x : levels) {
        while (sim.state().reach() < x) sim.step();
        out.push_back(sim.state().time());
    }
    return out;
}

SpeedEstimate estimate_speed(const ShapeLaw& law, const std::vector<double>& levels, std::size_t reps,
                             std::uint64_t seed, int workers, SimulationOptions opts) {
    std::vector<double> xs = levels;
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 2)
        throw DomainError("speed fit needs at least two distinct levels");
    if (reps < 2) throw DomainError("speed fit needs at least two replicas");
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const auto runs = run_replicas(reps, seed, workers,
                                   [&](std::size_t, std::uint64_t s) { return hit_levels(law, xs, s, opts); });

    SpeedEstimate out;
    out.levels = xs;
    std::vector<double> col(reps);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        for (std::size_t r = 0; r < reps; ++r) col[r] = runs[r][k];
        const Estimate e = estimate(col);
        out.mean_tau.push_back(e.mean);
        out.ci_tau.push_back(e.ci95);
    }
    const LinearFit fit = ols(out.levels, out.mean_tau);
    out.nu = fit.slope;
    out.speed = 1.0 / fit.slope;
    out.r2 = fit.r2;
    out.slope_se = fit.slope_se;
    return out;
}

std::vector<TrajectoryRow> record_trajectory(const ShapeLaw& law, double level, std::uint64_t seed,
                                             SimulationOptions opts) {
    if (!(level > 0.0)) throw DomainError("hitting level must be positive");
    GrowthSimulation sim(AncestralState::from_point({0.0, 0.0}, law.r_max()), law, seed, opts);
    std::vector<TrajectoryRow> rows;
    while (sim.state().reach() < level) {
        const auto s = sim.step();
        if (s.accepted)
            rows.push_back({s.event.time, s.event.center, s.event.a, s.event.b, s.event.gamma, sim.state().reach()});
    }
    return rows;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
    os << "t,center_x,center_y,a,b,gamma,reach\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.center.x, r.center.y,
                      r.a, r.b, r.gamma, r.reach);
        os << buf;
    }
}

}  // namespace slfv
