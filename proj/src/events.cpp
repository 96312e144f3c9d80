#include "slfv/events.hpp"

#include <algorithm>
#include <numbers>

#include "slfv/errors.hpp"

namespace slfv {

ShapeLaw::ShapeLaw(std::vector<ShapeAtom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("shape law needs at least one atom");
    for (const auto& at : atoms_) {
        if (!(at.weight > 0.0)) throw DomainError("shape law atom weights must be positive");
        validate_shape(at.a, at.b, at.gamma);
        total_mass_ += at.weight;
        r_max_ = std::max({r_max_, at.a, at.b});
    }
}

ShapeLaw ShapeLaw::unit_rate(double a, double b, double gamma) {
    validate_shape(a, b, gamma);
    return ShapeLaw({{1.0 / (std::numbers::pi * a * b), a, b, gamma}});
}

ShapeLaw ShapeLaw::balls(double radius, double mass) { return ShapeLaw({{mass, radius, radius, 0.0}}); }

ShapeLaw mirror(const ShapeLaw& law) {
    std::vector<ShapeAtom> atoms = law.atoms();
    for (auto& at : atoms) at.gamma = -at.gamma;
    return ShapeLaw(std::move(atoms));
}

double jump_mass(const ShapeLaw& law) {
    double j = 0.0;
    for (const auto& at : law.atoms()) j += at.weight * std::numbers::pi * at.a * at.b;
    return j;
}

double mean_extreme_offset(const ShapeLaw& law) {
    const double j = jump_mass(law);
    double m = 0.0;
    for (const auto& at : law.atoms())
        m += at.weight * std::numbers::pi * at.a * at.b / j * half_width(at.a, at.b, at.gamma);
    return m;
}

std::size_t draw_atom(const ShapeLaw& law, Rng& rng) {
    const auto& atoms = law.atoms();
    if (atoms.size() == 1) return 0;
    double u = uniform01(rng) * law.total_mass();
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        if (u < atoms[i].weight) return i;
        u -= atoms[i].weight;
    }
    return atoms.size() - 1;
}

std::size_t draw_atom_area_biased(const ShapeLaw& law, Rng& rng) {
    const auto& atoms = law.atoms();
    if (atoms.size() == 1) return 0;
    double u = uniform01(rng) * jump_mass(law);
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        const double w = atoms[i].weight * std::numbers::pi * atoms[i].a * atoms[i].b;
        if (u < w) return i;
        u -= w;
    }
    return atoms.size() - 1;
}

namespace {

void append_poisson(const Rect& rect, double t0, double t1, const ShapeLaw& law, Rng& rng,
                    std::vector<Event>& out) {
    if (t1 <= t0 || rect.degenerate()) return;
    const double mean = law.total_mass() * rect.area() * (t1 - t0);
    const auto count = std::poisson_distribution<long long>(mean)(rng);
    out.reserve(out.size() + static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        Event ev;
        ev.time = t0 + (t1 - t0) * uniform01(rng);
        ev.center = sample_uniform(rect, rng);
        const auto& at = law.atoms()[draw_atom(law, rng)];
        ev.a = at.a;
        ev.b = at.b;
        ev.gamma = at.gamma;
        out.push_back(ev);
    }
}

bool by_time(const Event& l, const Event& r) { return l.time < r.time; }

}  // namespace

std::vector<Event> poisson_window(const Rect& rect, double t0, double t1, const ShapeLaw& law, Rng& rng) {
    if (t1 < t0) throw DomainError("poisson_window: t1 < t0");
    if (rect.degenerate()) throw DomainError("poisson_window: degenerate rectangle");
    std::vector<Event> out;
    append_poisson(rect, t0, t1, law, rng, out);
    std::sort(out.begin(), out.end(), by_time);
    return out;
}

EventSource::EventSource(ShapeLaw law, Rect window, Rng rng, double slab)
    : law_(std::move(law)), window_(window), rng_(std::move(rng)), slab_(slab) {
    if (window_.degenerate()) throw DomainError("event window must be non-degenerate");
    if (!(slab_ > 0.0)) throw DomainError("slab length must be positive");
}

void EventSource::add_events(const Rect& rect, double t0, double t1, std::vector<Event>& out) {
    const std::size_t before = out.size();
    append_poisson(rect, t0, t1, law_, rng_, out);
    generated_ += out.size() - before;
}

void EventSource::fill_next_slab() {
    buffer_.clear();
    cursor_ = 0;
    add_events(window_, slab_end_, slab_end_ + slab_, buffer_);
    slab_end_ += slab_;
    std::sort(buffer_.begin(), buffer_.end(), by_time);
}

Event EventSource::next() {
    while (cursor_ == buffer_.size()) fill_next_slab();
    const Event ev = buffer_[cursor_++];
    now_ = ev.time;
    return ev;
}

const Event& EventSource::peek() {
    while (cursor_ == buffer_.size()) fill_next_slab();
    return buffer_[cursor_];
}

bool EventSource::expand(const Rect& required, double margin, double now) {
    if (window_.contains(required)) return false;
    const Rect old = window_;
    const Rect grown = bounding_union(old, required.dilated(margin));

    // Only the not-yet-consumed part of the current slab is affected.
    std::vector<Event> fresh;
    if (now < slab_end_) {
        const Rect strips[4] = {
            {grown.xmin, old.xmin, grown.ymin, grown.ymax},
            {old.xmax, grown.xmax, grown.ymin, grown.ymax},
            {old.xmin, old.xmax, grown.ymin, old.ymin},
            {old.xmin, old.xmax, old.ymax, grown.ymax},
        };
        for (const auto& s : strips) add_events(s, now, slab_end_, fresh);
    }
    window_ = grown;
    if (!fresh.empty()) {
        buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(cursor_));
        cursor_ = 0;
        buffer_.insert(buffer_.end(), fresh.begin(), fresh.end());
        std::sort(buffer_.begin(), buffer_.end(), by_time);
    }
    return true;
}

}  // namespace slfv
