#include "slfv/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

namespace slfv {

namespace {

constexpr double kContainSlack = 1e-12;
constexpr double kOverlapMargin = 1e-9;
constexpr int kFallbackSamples = 256;

// p expressed in the frame where e is the unit disk.
Point to_unit_frame(const Ellipse& e, Point p) {
    const double c = std::cos(e.gamma), s = std::sin(e.gamma);
    const double dx = p.x - e.center.x, dy = p.y - e.center.y;
    return {(c * dx + s * dy) / e.a, (-s * dx + c * dy) / e.b};
}

struct Sym2 {
    double p, r, s;  // [[p, r], [r, s]]
};

struct Eigen2 {
    double k1, k2;  // eigenvalues
    Point v1, v2;   // orthonormal eigenvectors
};

Eigen2 eigen_sym(const Sym2& m) {
    const double mean = 0.5 * (m.p + m.s);
    const double half = 0.5 * (m.p - m.s);
    const double rad = std::hypot(half, m.r);
    Eigen2 out{mean + rad, mean - rad, {1.0, 0.0}, {0.0, 1.0}};
    if (rad > 0.0) {
        // Pick the better-conditioned of the two eigenvector formulas.
        Point v = half >= 0.0 ? Point{rad + half, m.r} : Point{m.r, rad - half};
        const double n = norm(v);
        v = {v.x / n, v.y / n};
        out.v1 = v;
        out.v2 = {-v.y, v.x};
    }
    return out;
}

double dot(Point u, Point v) { return u.x * v.x + u.y * v.y; }

double segment_distance_sq(Point p, Point u, Point v) {
    const Point d = v - u;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(p - u, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point w = {u.x + t * d.x - p.x, u.y + t * d.y - p.y};
    return dot(w, w);
}

// Minimum of the quadratic form g(q) = (q-c)^T Q (q-c) over the closed unit
// disk, with Q given in its eigenbasis (k, c expressed in that basis) and
// |c| > 1. KKT: q_i = k_i c_i / (k_i + lambda), lambda >= 0, |q| = 1.
// Returns false if the safeguarded Newton iteration did not converge.
bool min_form_on_disk(double k1, double k2, double c1, double c2, double& g_min) {
    auto qnorm = [&](double lam, double& dn) {
        const double q1 = k1 * c1 / (k1 + lam), q2 = k2 * c2 / (k2 + lam);
        const double n = std::hypot(q1, q2);
        // derivative of 1/|q| with respect to lambda
        dn = (q1 * q1 / (k1 + lam) + q2 * q2 / (k2 + lam)) / (n * n * n);
        return n;
    };
    double lo = 0.0;
    double hi = std::max(k1, k2) * std::hypot(c1, c2);
    double lam = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        double dpsi = 0.0;
        const double n = qnorm(lam, dpsi);
        const double psi = 1.0 / n - 1.0;
        if (std::abs(psi) < 1e-15) {
            converged = true;
            break;
        }
        if (psi < 0.0)
            lo = lam;
        else
            hi = lam;
        double next = dpsi > 0.0 ? lam - psi / dpsi : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) {
            lam = next;
            converged = true;
            break;
        }
        lam = next;
    }
    if (!converged) return false;
    const double r1 = c1 * lam / (k1 + lam), r2 = c2 * lam / (k2 + lam);
    g_min = k1 * r1 * r1 + k2 * r2 * r2;
    return std::isfinite(g_min);
}

}  // namespace

Rect bounding_union(const Rect& r1, const Rect& r2) {
    return {std::min(r1.xmin, r2.xmin), std::max(r1.xmax, r2.xmax), std::min(r1.ymin, r2.ymin),
            std::max(r1.ymax, r2.ymax)};
}

void validate_shape(double a, double b, double gamma) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("ellipse semi-axes must be positive (a=" + std::to_string(a) +
                          ", b=" + std::to_string(b) + ")");
    if (!(std::abs(gamma) < std::numbers::pi / 2))
        throw DomainError("ellipse tilt must lie in (-pi/2, pi/2), got " + std::to_string(gamma));
}

Ellipse make_ellipse(Point center, double a, double b, double gamma) {
    validate_shape(a, b, gamma);
    return {center, a, b, gamma};
}

ExtremeOffset max_horizontal_offset(double a, double b, double gamma) {
    validate_shape(a, b, gamma);
    const double theta = std::atan(-(b / a) * std::tan(gamma));
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double ct = std::cos(theta), st = std::sin(theta);
    return {theta, half_width(a, b, gamma), {a * ct * cg - b * st * sg, a * ct * sg + b * st * cg}};
}

Rect bounding_box(const Ellipse& e) {
    const double w = half_width(e.a, e.b, e.gamma), h = half_height(e.a, e.b, e.gamma);
    return {e.center.x - w, e.center.x + w, e.center.y - h, e.center.y + h};
}

bool contains(const Ellipse& e, Point p) {
    const Point q = to_unit_frame(e, p);
    return q.x * q.x + q.y * q.y <= 1.0 + kContainSlack;
}

bool intersects_positively(const Ellipse& e1, const Ellipse& e2) {
    const double d = norm(e1.center - e2.center);
    if (d >= std::max(e1.a, e1.b) + std::max(e2.a, e2.b)) return false;
    if (d < std::min(e1.a, e1.b) + std::min(e2.a, e2.b)) return true;

    // Map e1 to the unit disk; e2 becomes {c + L u : |u| <= 1}.
    const Point c = to_unit_frame(e1, e2.center);
    if (c.x * c.x + c.y * c.y <= 1.0) return true;

    const double dg = e2.gamma - e1.gamma;
    const double cd = std::cos(dg), sd = std::sin(dg);
    // L = diag(1/a1, 1/b1) R(dg) diag(a2, b2)
    const double l11 = cd * e2.a / e1.a, l12 = -sd * e2.b / e1.a;
    const double l21 = sd * e2.a / e1.b, l22 = cd * e2.b / e1.b;
    // M = L L^T; the quadratic form of e2 is M^{-1}, sharing eigenvectors.
    const Sym2 m{l11 * l11 + l12 * l12, l11 * l21 + l12 * l22, l21 * l21 + l22 * l22};
    const Eigen2 eig = eigen_sym(m);
    const double k1 = 1.0 / eig.k1, k2 = 1.0 / eig.k2;
    const double c1 = dot(c, eig.v1), c2 = dot(c, eig.v2);

    double g_min = 0.0;
    if (!min_form_on_disk(k1, k2, c1, c2, g_min)) {
        g_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kFallbackSamples; ++i) {
            const double phi = 2.0 * std::numbers::pi * i / kFallbackSamples;
            const Point q{std::cos(phi), std::sin(phi)};
            const double r1 = dot(q, eig.v1) - c1, r2 = dot(q, eig.v2) - c2;
            g_min = std::min(g_min, k1 * r1 * r1 + k2 * r2 * r2);
        }
    }
    return g_min < 1.0 - kOverlapMargin;
}

bool intersects_positively(const Ellipse& e, const Rect& r) {
    if (!intersects_positively(bounding_box(e), r)) return false;
    if (r.contains(e.center)) return true;
    const std::array<Point, 4> quad{to_unit_frame(e, {r.xmin, r.ymin}), to_unit_frame(e, {r.xmax, r.ymin}),
                                    to_unit_frame(e, {r.xmax, r.ymax}), to_unit_frame(e, {r.xmin, r.ymax})};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i)
        best = std::min(best, segment_distance_sq({0.0, 0.0}, quad[i], quad[(i + 1) % 4]));
    return best < 1.0 - kOverlapMargin;
}

bool intersects_positively(const Rect& r1, const Rect& r2) {
    return r1.xmin < r2.xmax && r2.xmin < r1.xmax && r1.ymin < r2.ymax && r2.ymin < r1.ymax;
}

Point sample_uniform(const Ellipse& e, Rng& rng) {
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    const double r = std::sqrt(uniform01(rng));
    const double lx = e.a * r * std::cos(theta), ly = e.b * r * std::sin(theta);
    const double c = std::cos(e.gamma), s = std::sin(e.gamma);
    return {e.center.x + c * lx - s * ly, e.center.y + s * lx + c * ly};
}

Point sample_uniform(const Rect& r, Rng& rng) {
    const double x = r.xmin + r.width() * uniform01(rng);
    const double y = r.ymin + r.height() * uniform01(rng);
    return {x, y};
}

double distance_to_square(Point p, Point c, double h) {
    const double dx = std::max(std::abs(p.x - c.x) - h, 0.0);
    const double dy = std::max(std::abs(p.y - c.y) - h, 0.0);
    return std::hypot(dx, dy);
}

}  // namespace slfv
