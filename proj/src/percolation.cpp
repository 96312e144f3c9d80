#include "slfv/percolation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>

#include "slfv/ancestral.hpp"
#include "slfv/errors.hpp"
#include "slfv/replicas.hpp"

namespace slfv {

double fpp_edge_rate() { return 16.0 / std::numbers::pi; }

LatticeFPP::LatticeFPP(int n_max, int half_height, Rng& rng) : n_max_(n_max), h_(half_height) {
    if (n_max_ < 1) throw DomainError("lattice width must be at least 1");
    if (h_ < 1) throw DomainError("lattice half-height must be at least 1");
    const std::size_t nv = vertex_count();
    const double inf = std::numeric_limits<double>::infinity();
    east_.assign(nv, inf);
    north_.assign(nv, inf);
    ne_.assign(nv, inf);
    se_.assign(nv, inf);
    std::exponential_distribution<double> exp(fpp_edge_rate());
    for (int i = 0; i <= n_max_; ++i)
        for (int j = -h_; j <= h_; ++j) {
            const std::size_t v = index(i, j);
            if (i < n_max_) east_[v] = exp(rng);
            if (j < h_) north_[v] = exp(rng);
            if (i < n_max_ && j < h_) ne_[v] = exp(rng);
            if (i < n_max_ && j > -h_) se_[v] = exp(rng);
        }
}

double LatticeFPP::weight(int i1, int j1, int i2, int j2) const {
    if (i2 < i1 || (i2 == i1 && j2 < j1)) {
        std::swap(i1, i2);
        std::swap(j1, j2);
    }
    const int di = i2 - i1, dj = j2 - j1;
    if (i1 < 0 || i2 > n_max_ || std::min(j1, j2) < -h_ || std::max(j1, j2) > h_)
        throw DomainError("lattice edge outside the strip");
    const std::size_t v = index(i1, j1);
    if (di == 1 && dj == 0) return east_[v];
    if (di == 0 && dj == 1) return north_[v];
    if (di == 1 && dj == 1) return ne_[v];
    if (di == 1 && dj == -1) return se_[v];
    throw DomainError("vertices are not 8-neighbours");
}

std::vector<double> LatticeFPP::distances(bool reverse) const {
    static constexpr std::array<std::array<int, 2>, 8> kDirs{
        {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
    std::vector<double> dist(vertex_count(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const std::size_t src = index(0, 0);
    dist[src] = 0.0;
    pq.push({0.0, src});
    const int w = 2 * h_ + 1;
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        const int i = static_cast<int>(v) / w, j = static_cast<int>(v) % w - h_;
        for (int k = 0; k < 8; ++k) {
            const auto& dir = kDirs[reverse ? 7 - k : k];
            const int i2 = i + dir[0], j2 = j + dir[1];
            if (i2 < 0 || i2 > n_max_ || j2 < -h_ || j2 > h_) continue;
            const std::size_t u = index(i2, j2);
            const double nd = d + weight(i, j, i2, j2);
            if (nd < dist[u]) {
                dist[u] = nd;
                pq.push({nd, u});
            }
        }
    }
    return dist;
}

double LatticeFPP::column_time(int n, const std::vector<double>& dist) const {
    if (n < 0 || n > n_max_) throw DomainError("column outside the strip");
    double best = std::numeric_limits<double>::infinity();
    for (int j = -h_; j <= h_; ++j) best = std::min(best, dist[index(n, j)]);
    return best;
}

int default_half_height(int n) { return 2 * n + 8; }

double fpp_hit(int n, int half_height, std::uint64_t seed) {
    Rng rng(seed);
    const LatticeFPP lattice(n, half_height > 0 ? half_height : default_half_height(n), rng);
    return lattice.column_time(n, lattice.distances());
}

std::optional<Cell> cell_hit_by_ball(Point center) {
    const int ci = static_cast<int>(std::lround(center.x / 4.0));
    const int cj = static_cast<int>(std::lround(center.y / 4.0));
    std::optional<Cell> hit;
    for (int i = ci - 1; i <= ci + 1; ++i)
        for (int j = cj - 1; j <= cj + 1; ++j) {
            if (distance_to_square(center, {4.0 * i, 4.0 * j}, 1.0) >= 1.0) continue;
            if (hit) throw ContractViolation("unit ball overlaps two grid cells");
            hit = Cell{i, j};
        }
    return hit;
}

double CellActivation::column_time(int n) const {
    double best = std::numeric_limits<double>::infinity();
    for (auto it = activation.lower_bound({n, std::numeric_limits<int>::min()});
         it != activation.end() && it->first.first == n; ++it)
        best = std::min(best, it->second);
    return best;
}

CellActivation discretize_trace(const std::vector<Event>& accepted) {
    CellActivation out;
    for (const Event& ev : accepted) {
        if (ev.a != 1.0 || ev.b != 1.0) throw DomainError("discretization requires unit-ball events");
        if (const auto c = cell_hit_by_ball(ev.center)) out.activation.try_emplace(*c, ev.time);
    }
    return out;
}

CoupledDiscretization coupled_discretization(int n_max, std::uint64_t seed) {
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    const ShapeLaw law = ShapeLaw::unit_rate(1.0, 1.0, 0.0);
    GrowthSimulation sim(AncestralState::from_point({0.0, 0.0}, 1.0), law, seed);
    std::vector<Event> accepted;
    CoupledDiscretization out;
    out.tau_4n.assign(static_cast<std::size_t>(n_max), 0.0);
    int next = 1;
    while (sim.state().reach() < 4.0 * n_max + 1.0) {
        const auto s = sim.step();
        if (!s.accepted) continue;
        accepted.push_back(s.event);
        while (next <= n_max && sim.state().reach() >= 4.0 * next) out.tau_4n[static_cast<std::size_t>(next++ - 1)] = s.event.time;
    }
    const CellActivation cells = discretize_trace(accepted);
    for (int n = 1; n <= n_max; ++n) out.tau_discr.push_back(cells.column_time(n));
    return out;
}

namespace {

constexpr double kOneSided95 = 1.6448536269514722;

double stderr_of(const Estimate& e) { return std::sqrt(e.variance / static_cast<double>(e.n)); }

}  // namespace

std::vector<DominationRow> domination_suite(const std::vector<int>& n_values, std::size_t reps, std::uint64_t seed,
                                            int workers) {
    if (n_values.empty()) throw DomainError("domination suite needs at least one n");
    if (reps < 2) throw DomainError("domination suite needs at least two replicas");
    int n_max = 0;
    for (int n : n_values) {
        if (n < 1) throw DomainError("n must be at least 1");
        n_max = std::max(n_max, n);
    }
    const auto coupled = run_replicas(reps, seed, workers,
                                      [&](std::size_t, std::uint64_t s) { return coupled_discretization(n_max, s); });
    std::vector<DominationRow> rows;
    for (int n : n_values) {
        DominationRow row;
        row.n = n;
        const auto fpp = run_replicas(reps, replica_seed(splitmix64(seed), static_cast<std::uint64_t>(n)), workers,
                                      [&](std::size_t, std::uint64_t s) { return fpp_hit(n, 0, s); });
        std::vector<double> discr(reps), tau(reps), diff(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            discr[r] = coupled[r].tau_discr[static_cast<std::size_t>(n - 1)];
            tau[r] = coupled[r].tau_4n[static_cast<std::size_t>(n - 1)];
            diff[r] = tau[r] - discr[r];
            if (discr[r] > tau[r]) row.pointwise = false;
        }
        row.fpp = estimate(fpp);
        row.discr = estimate(discr);
        row.tau4n = estimate(tau);
        const double se = std::hypot(stderr_of(row.fpp), stderr_of(row.discr));
        row.fpp_below_discr = row.discr.mean - row.fpp.mean - kOneSided95 * se > 0.0;
        const Estimate d = estimate(diff);
        row.discr_below_tau4n = d.mean - kOneSided95 * stderr_of(d) > 0.0;
        rows.push_back(row);
    }
    return rows;
}

void write_domination_csv(std::ostream& os, const std::vector<DominationRow>& rows) {
    os << "n,mean_fpp,ci_fpp,mean_discr,ci_discr,mean_tau4n,ci_tau4n\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.fpp.mean, r.fpp.ci95,
                      r.discr.mean, r.discr.ci95, r.tau4n.mean, r.tau4n.ci95);
        os << buf;
    }
}

FppLinearity fpp_linearity(const std::vector<int>& n_values, std::size_t reps, std::uint64_t seed, int workers) {
    if (n_values.size() < 2) throw DomainError("linearity fit needs at least two n values");
    FppLinearity out;
    out.n_values = n_values;
    std::vector<double> xs, ys;
    for (int n : n_values) {
        const auto t = run_replicas(reps, replica_seed(seed, static_cast<std::uint64_t>(n)), workers,
                                    [&](std::size_t, std::uint64_t s) { return fpp_hit(n, 0, s); });
        out.times.push_back(estimate(t));
        xs.push_back(n);
        ys.push_back(out.times.back().mean);
    }
    out.fit = ols(xs, ys);
    return out;
}

}  // namespace slfv
