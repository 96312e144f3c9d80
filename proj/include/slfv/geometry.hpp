#pragma once

#include <cmath>
#include <numbers>

#include "slfv/errors.hpp"
#include "slfv/rng.hpp"

namespace slfv {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
    friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
    friend bool operator==(Point, Point) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    bool degenerate() const { return !(xmax > xmin && ymax > ymin); }
    bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
    bool contains(const Rect& r) const {
        return r.xmin >= xmin && r.xmax <= xmax && r.ymin >= ymin && r.ymax <= ymax;
    }
    Rect dilated(double margin) const { return {xmin - margin, xmax + margin, ymin - margin, ymax + margin}; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

Rect bounding_union(const Rect& r1, const Rect& r2);

/// Oriented ellipse: center + R(gamma) * diag(a, b) * unit disk.
struct Ellipse {
    Point center;
    double a = 1.0;
    double b = 1.0;
    double gamma = 0.0;

    friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

/// Throws DomainError unless a > 0, b > 0 and |gamma| < pi/2.
void validate_shape(double a, double b, double gamma);
Ellipse make_ellipse(Point center, double a, double b, double gamma);

struct ExtremeOffset {
    double theta_max = 0.0;  ///< parametric angle of the rightmost point
    double D = 0.0;          ///< its horizontal distance to the center
    Point offset;            ///< rightmost point minus center
};

/// Rightmost point of the origin-centred ellipse with shape (a, b, gamma).
ExtremeOffset max_horizontal_offset(double a, double b, double gamma);

/// Half-extent along x: sqrt(a^2 cos^2 g + b^2 sin^2 g).
inline double half_width(double a, double b, double gamma) {
    const double c = std::cos(gamma), s = std::sin(gamma);
    return std::sqrt(a * a * c * c + b * b * s * s);
}
inline double half_height(double a, double b, double gamma) {
    const double c = std::cos(gamma), s = std::sin(gamma);
    return std::sqrt(a * a * s * s + b * b * c * c);
}

inline double area(const Ellipse& e) { return std::numbers::pi * e.a * e.b; }

/// Largest abscissa reached by any point of e.
inline double horizontal_reach(const Ellipse& e) { return e.center.x + half_width(e.a, e.b, e.gamma); }

Rect bounding_box(const Ellipse& e);

/// Membership in the closed ellipse. A relative slack of 1e-12 on the
/// normalized radius keeps constructed boundary points inside.
bool contains(const Ellipse& e, Point p);
inline bool contains(const Rect& r, Point p) { return r.contains(p); }

/// Vol(e1 ∩ e2) > 0. Exact up to a 1e-9 margin on the normalized quadratic form.
bool intersects_positively(const Ellipse& e1, const Ellipse& e2);
bool intersects_positively(const Ellipse& e, const Rect& r);
bool intersects_positively(const Rect& r1, const Rect& r2);

/// Uniform point in e (sqrt-radius disk sampling pushed through the affine map).
Point sample_uniform(const Ellipse& e, Rng& rng);

/// Uniform point in r.
Point sample_uniform(const Rect& r, Rng& rng);

/// Distance from p to the closed axis-aligned square of half-side h centred at c.
double distance_to_square(Point p, Point c, double h);

}  // namespace slfv
