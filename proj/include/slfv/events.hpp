#pragma once

#include <cstddef>
#include <vector>

#include "slfv/geometry.hpp"
#include "slfv/rng.hpp"

namespace slfv {

/// One point mass of the shape measure: `weight` events per unit area per
/// unit time, all with shape (a, b, gamma).
struct ShapeAtom {
    double weight = 0.0;
    double a = 1.0;
    double b = 1.0;
    double gamma = 0.0;

    friend bool operator==(const ShapeAtom&, const ShapeAtom&) = default;
};

/// Finite atomic shape measure driving the reproduction events.
class ShapeLaw {
public:
    ShapeLaw() = default;
    explicit ShapeLaw(std::vector<ShapeAtom> atoms);

    /// Single shape hitting any fixed point at rate 1 (weight 1/(pi a b)).
    static ShapeLaw unit_rate(double a, double b, double gamma = 0.0);
    /// Balls of radius `radius` with total mass `mass`.
    static ShapeLaw balls(double radius, double mass);

    const std::vector<ShapeAtom>& atoms() const { return atoms_; }
    double total_mass() const { return total_mass_; }
    double r_max() const { return r_max_; }

    friend bool operator==(const ShapeLaw&, const ShapeLaw&) = default;

private:
    std::vector<ShapeAtom> atoms_;
    double total_mass_ = 0.0;
    double r_max_ = 0.0;
};

/// Reflection gamma -> -gamma of every atom.
ShapeLaw mirror(const ShapeLaw& law);

/// Rate at which a fixed point is covered: sum of weight * pi a b.
double jump_mass(const ShapeLaw& law);

/// Area-biased mean of the horizontal extreme offset D(a, b, gamma).
double mean_extreme_offset(const ShapeLaw& law);

struct Event {
    double time = 0.0;
    Point center;
    double a = 1.0;
    double b = 1.0;
    double gamma = 0.0;

    Ellipse ellipse() const { return {center, a, b, gamma}; }
    friend bool operator==(const Event&, const Event&) = default;
};

/// Index of an atom drawn with probability proportional to its weight.
std::size_t draw_atom(const ShapeLaw& law, Rng& rng);

/// Index of an atom drawn with probability proportional to weight * area.
std::size_t draw_atom_area_biased(const ShapeLaw& law, Rng& rng);

/// Poisson events on rect x [t0, t1), sorted by time.
std::vector<Event> poisson_window(const Rect& rect, double t0, double t1, const ShapeLaw& law, Rng& rng);

/// Time-ordered stream of Poisson events over a spatial window that can be
/// enlarged while the stream is being consumed.
///
/// Events are produced in time slabs [k*dt, (k+1)*dt) over the current
/// window. `expand` adds area to the window; the added area only receives
/// events strictly after the current time, so a consumer must expand before
/// its state can be influenced by events outside the old window.
class EventSource {
public:
    EventSource(ShapeLaw law, Rect window, Rng rng, double slab = 1.0);

    Event next();
    /// Next event without consuming it.
    const Event& peek();
    /// Grow the window to cover `required` (plus `margin` on every side) if
    /// it does not already. Events for new area are drawn on (now, slab_end).
    bool expand(const Rect& required, double margin, double now);

    const Rect& window() const { return window_; }
    double consumed_until() const { return now_; }
    const ShapeLaw& law() const { return law_; }
    std::size_t generated() const { return generated_; }

private:
    void fill_next_slab();
    void add_events(const Rect& rect, double t0, double t1, std::vector<Event>& out);

    ShapeLaw law_;
    Rect window_;
    Rng rng_;
    double slab_;
    double slab_end_ = 0.0;
    double now_ = 0.0;
    std::vector<Event> buffer_;
    std::size_t cursor_ = 0;
    std::size_t generated_ = 0;
};

}  // namespace slfv
