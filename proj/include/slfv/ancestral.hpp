#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <variant>
#include <vector>

#include "slfv/events.hpp"
#include "slfv/geometry.hpp"

namespace slfv {

using Primitive = std::variant<Rect, Ellipse>;

bool intersects_positively(const Primitive& p, const Ellipse& e);
bool intersects_positively(const Primitive& p, const Primitive& q);
Rect bounding_box(const Primitive& p);

/// Finite union of rectangles and ellipses. Ellipses no larger than
/// `cell / 2` are kept in a uniform hash over their centres; anything
/// larger is checked linearly.
class Region {
public:
    explicit Region(double cell_size = 2.0);

    void add(const Primitive& p, double time = 0.0);

    /// True if `e` has positive-area overlap with some primitive.
    /// `e` must have max(a, b) <= cell / 2.
    bool overlaps(const Ellipse& e) const;
    /// Same, only counting primitives added at or before `t`.
    bool overlaps_at(const Ellipse& e, double t) const;
    bool contains(Point p) const;
    bool contains_at(Point p, double t) const;

    bool empty() const { return ellipses_.empty() && large_.empty(); }
    std::size_t size() const { return ellipses_.size() + large_.size(); }
    const Rect& bounds() const { return bounds_; }
    double reach() const { return bounds_.xmax; }
    double cell_size() const { return cell_; }

    const std::vector<Ellipse>& ellipses() const { return ellipses_; }
    const std::vector<double>& ellipse_times() const { return ellipse_times_; }
    const std::vector<Primitive>& large() const { return large_; }

private:
    using Key = std::uint64_t;
    Key key(long long i, long long j) const;
    long long cell_of(double v) const;
    template <class F>
    bool any_near(Point p, F&& pred) const;

    double cell_;
    std::vector<Ellipse> ellipses_;
    std::vector<double> ellipse_times_;
    std::vector<Primitive> large_;
    std::vector<double> large_times_;
    std::unordered_map<Key, std::vector<std::uint32_t>> hash_;
    Rect bounds_{0.0, 0.0, 0.0, 0.0};
};

/// State of the dual process: a single point until the first event covers
/// it, then a growing region.
class AncestralState {
public:
    static AncestralState from_point(Point origin, double r_max);
    static AncestralState from_region(const std::vector<Primitive>& seeds, double r_max);

    /// Offer the next event. Returns true if it was accepted.
    /// Throws ContractViolation if events arrive out of time order.
    bool apply_event(const Event& ev);

    bool in_point_phase() const { return point_phase_; }
    Point origin() const { return origin_; }
    const Region& region() const { return region_; }
    double time() const { return time_; }
    double reach() const { return point_phase_ ? origin_.x : region_.reach(); }
    Rect extent() const;
    std::uint64_t accepted() const { return accepted_; }

private:
    AncestralState(double r_max) : region_(2.0 * r_max) {}

    bool point_phase_ = true;
    Point origin_;
    Region region_;
    double time_ = 0.0;
    std::uint64_t accepted_ = 0;
};

struct SimulationOptions {
    double slab = 1.0;
    double margin_factor = 8.0;
    std::uint64_t max_jumps = 10'000'000;
    /// If false, events come from `static_window` only and the simulation
    /// throws ContractViolation once the state gets within r_max of its edge.
    bool lazy_window = true;
    Rect static_window{};
};

/// Couples an AncestralState to an EventSource, growing the window as
/// needed.
class GrowthSimulation {
public:
    GrowthSimulation(AncestralState state, const ShapeLaw& law, std::uint64_t seed, SimulationOptions opts = {});

    struct Step {
        Event event;
        bool accepted = false;
    };

    Step step();
    /// Consume events up to time `t_end`. Stops early when `stop` returns true
    /// after an accepted event. Returns true if stopped early.
    template <class Stop>
    bool run_until(double t_end, Stop&& stop) {
        while (source_.peek().time <= t_end) {
            const Step s = step();
            if (s.accepted && stop(s.event)) return true;
        }
        return false;
    }

    const AncestralState& state() const { return state_; }
    const EventSource& source() const { return source_; }
    /// Every point within r_max of the current state lies inside the window.
    bool window_covers_state() const;

private:
    void ensure_window();

    AncestralState state_;
    EventSource source_;
    SimulationOptions opts_;
    double r_max_;
};

struct HitResult {
    double tau = 0.0;
    std::uint64_t jumps = 0;
};

/// First time the dual started at the origin reaches {x >= level}.
HitResult hit_halfplane(const ShapeLaw& law, double level, std::uint64_t seed, SimulationOptions opts = {});

/// Hitting times of several increasing levels along one trajectory.
std::vector<double> hit_levels(const ShapeLaw& law, const std::vector<double>& levels, std::uint64_t seed,
                               SimulationOptions opts = {});

struct SpeedEstimate {
    double nu = 0.0;     // fitted slope of E[tau_x] against x
    double speed = 0.0;  // 1 / nu
    double r2 = 0.0;
    double slope_se = 0.0;
    std::vector<double> levels;
    std::vector<double> mean_tau;
    std::vector<double> ci_tau;
};

SpeedEstimate estimate_speed(const ShapeLaw& law, const std::vector<double>& levels, std::size_t reps,
                             std::uint64_t seed, int workers = 1, SimulationOptions opts = {});

struct TrajectoryRow {
    double t;
    Point center;
    double a, b, gamma;
    double reach;
};

/// Accepted events of one dual run until it reaches `level`.
std::vector<TrajectoryRow> record_trajectory(const ShapeLaw& law, double level, std::uint64_t seed,
                                             SimulationOptions opts = {});
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);

}  // namespace slfv
