#include "slfv/twocolumn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "slfv/errors.hpp"

namespace slfv::twocol {

State step(const State& s, Rng& rng) {
    State n = s;
    const std::int64_t d = s.M - s.m;
    const double rate = static_cast<double>(d + 2);
    n.t += std::exponential_distribution<double>(rate)(rng);
    if (d == 0) {
        n.M += 1;
        return n;
    }
    // Outcomes by weight: up 1, down-one 2, drop by k in [2, d] 1 each.
    const auto u = std::uniform_int_distribution<std::int64_t>(0, d + 1)(rng);
    if (u == 0)
        n.M += 1;
    else if (u <= 2)
        n.m += 1;
    else
        n.m += u - 1;  // k = u - 1 in [2, d]
    return n;
}

Return simulate_return(Rng& rng) {
    State s;
    do s = step(s, rng);
    while (s.m != s.M);
    return {s.t, s.M};
}

Return simulate_return(std::uint64_t seed) {
    Rng rng(seed);
    return simulate_return(rng);
}

LongRun long_run_speed_mc(double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    Rng rng(seed);
    State s;
    for (;;) {
        const State n = step(s, rng);
        if (n.t > horizon) break;
        s = n;
    }
    return {static_cast<double>(s.M) / horizon, static_cast<double>(s.m) / horizon};
}

bool reaches_before_return(std::int64_t N, double eps, Rng& rng) {
    State s;
    double t_return = -1.0;
    for (;;) {
        const State n = step(s, rng);
        if (t_return >= 0.0 && n.t > t_return + eps) return false;
        s = n;
        if (s.M >= N) return true;
        if (t_return < 0.0 && s.m == s.M) t_return = s.t;
    }
}

Chain build_chain(int N, double epsilon, bool accelerated) {
    if (N < 2) throw DomainError("chain needs N >= 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("chain needs epsilon > 0");
    Chain c{N, epsilon, accelerated, std::vector<std::vector<double>>(N + 1, std::vector<double>(N + 1, 0.0))};
    if (accelerated) {
        c.P[0][1] = 1.0;
    } else {
        c.P[0][0] = std::exp(-2.0 * epsilon);
        c.P[0][1] = -std::expm1(-2.0 * epsilon);
    }
    for (int i = 1; i <= N; ++i) {
        const double leave = -std::expm1(-(i + 2) * epsilon);
        const double unit = leave / (i + 2);
        c.P[i][i - 1] = 2.0 * unit;
        for (int j = 0; j <= i - 2; ++j) c.P[i][j] = unit;
        if (i < N) {
            c.P[i][i + 1] = unit;
            c.P[i][i] = std::exp(-(i + 2) * epsilon);
        } else {
            c.P[i][i] = 1.0 - (N + 1) * unit;
        }
    }
    return c;
}

ASequence a_sequence(int N, double epsilon) {
    if (N < 3) throw DomainError("A sequence needs N >= 3");
    if (!(epsilon > 0.0)) throw DomainError("A sequence needs epsilon > 0");
    ASequence s;
    s.a.assign(static_cast<std::size_t>(N + 1), BigInt(0));
    s.a[N] = 1;
    s.a[N - 1] = N + 1;
    BigInt tail = 0;  // sum of A_j for j >= i + 2
    for (int i = N - 1; i >= 2; --i) {
        s.a[i - 1] = BigInt(i + 2) * s.a[i] - 2 * s.a[i + 1] - tail;
        tail += s.a[i + 1];
    }
    for (int i = 1; i <= N; ++i)
        if (s.a[i] <= 0) throw ContractViolation("A_" + std::to_string(i) + " is not positive");
    BigInt rest = 2 * s.a[1];
    for (int j = 2; j <= N; ++j) rest += s.a[j];
    s.a0 = BigFloat(rest) / 2 * BigFloat(-std::expm1(-2.0 * epsilon));
    return s;
}

namespace {

// Unnormalised invariant weights A_i (i+2) / (1 - exp(-(i+2) eps)).
std::vector<BigFloat> invariant_weights(int N, double epsilon) {
    const ASequence s = a_sequence(N, epsilon);
    std::vector<BigFloat> w(static_cast<std::size_t>(N + 1));
    w[0] = s.a0 * 2 / BigFloat(-std::expm1(-2.0 * epsilon));
    for (int i = 1; i <= N; ++i) w[i] = BigFloat(s.a[i]) * (i + 2) / BigFloat(-std::expm1(-(i + 2) * epsilon));
    return w;
}

}  // namespace

double fixed_point_residual(const Chain& chain, const std::vector<double>& p) {
    const std::size_t n = chain.P.size();
    if (p.size() != n) throw DomainError("distribution size does not match chain");
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += p[i] * chain.P[i][j];
        worst = std::max(worst, std::abs(v - p[j]));
    }
    return worst;
}

std::vector<double> invariant_distribution(const Chain& chain) {
    if (!chain.accelerated) throw DomainError("closed-form invariant law is for the accelerated chain");
    const auto w = invariant_weights(chain.N, chain.epsilon);
    BigFloat total = 0;
    for (const auto& x : w) total += x;
    std::vector<double> p;
    p.reserve(w.size());
    for (const auto& x : w) p.push_back(static_cast<double>(x / total));
    const double r = fixed_point_residual(chain, p);
    if (r > 1e-10) throw ContractViolation("invariant distribution residual " + std::to_string(r) + " above 1e-10");
    return p;
}

double expected_return_time(int N, double epsilon) {
    const auto w = invariant_weights(N, epsilon);
    BigFloat rest = 0;
    for (std::size_t i = 1; i < w.size(); ++i) rest += w[i];
    // 1/p_0 - 1 for the accelerated chain, plus the geometric exit time from 0.
    return static_cast<double>(rest / w[0]) + 1.0 / -std::expm1(-2.0 * epsilon);
}

namespace {

int draw_off_diagonal(const std::vector<double>& row, int i, Rng& rng) {
    const double leave = 1.0 - row[static_cast<std::size_t>(i)];
    double u = uniform01(rng) * leave;
    int last = -1;
    for (int j = 0; j < static_cast<int>(row.size()); ++j) {
        if (j == i || row[static_cast<std::size_t>(j)] == 0.0) continue;
        last = j;
        if (u < row[static_cast<std::size_t>(j)]) return j;
        u -= row[static_cast<std::size_t>(j)];
    }
    return last;
}

std::uint64_t geometric_steps(double p_leave, Rng& rng) {
    // Number of trials up to and including the first success.
    return std::geometric_distribution<std::uint64_t>(p_leave)(rng) + 1;
}

}  // namespace

std::uint64_t simulate_chain_return(const Chain& chain, Rng& rng) {
    int state = 0;
    std::uint64_t steps = 0;
    do {
        const auto& row = chain.P[static_cast<std::size_t>(state)];
        steps += geometric_steps(1.0 - row[static_cast<std::size_t>(state)], rng);
        state = draw_off_diagonal(row, state, rng);
    } while (state != 0);
    return steps;
}

std::vector<int> simulate_chain_path(const Chain& chain, std::size_t steps, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> path;
    path.reserve(steps + 1);
    int state = 0;
    path.push_back(state);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& row = chain.P[static_cast<std::size_t>(state)];
        if (uniform01(rng) >= row[static_cast<std::size_t>(state)]) state = draw_off_diagonal(row, state, rng);
        path.push_back(state);
    }
    return path;
}

std::vector<std::pair<int, double>> default_schedule() {
    std::vector<std::pair<int, double>> s;
    for (int N : {16, 32, 64, 128}) s.emplace_back(N, 1.0 / (static_cast<double>(N) * N * N));
    return s;
}

Extrapolation extrapolate(const std::vector<std::pair<int, double>>& schedule) {
    if (schedule.empty()) throw DomainError("empty extrapolation schedule");
    Extrapolation ex;
    for (const auto& [N, eps] : schedule) {
        SchedulePoint p;
        p.N = N;
        p.epsilon = eps;
        p.steps = expected_return_time(N, eps);
        p.eps_times_steps = eps * p.steps;
        p.speed = 1.0 + 1.0 / (2.0 * p.eps_times_steps);
        ex.points.push_back(p);
    }
    const auto& v = ex.points;
    for (std::size_t k = 2; k < v.size(); ++k) {
        const double d1 = v[k - 1].eps_times_steps - v[k - 2].eps_times_steps;
        const double d2 = v[k].eps_times_steps - v[k - 1].eps_times_steps;
        if (std::abs(d2) > std::abs(d1)) {
            ex.monotone = false;
            ex.warning = "non-monotone convergence at N=" + std::to_string(v[k].N);
        }
    }
    ex.T_limit = v.back().eps_times_steps;
    if (v.size() >= 3) {
        const double a = v[v.size() - 3].eps_times_steps, b = v[v.size() - 2].eps_times_steps, c = v.back().eps_times_steps;
        const double denom = (c - b) - (b - a);
        if (denom != 0.0) ex.T_limit = c - (c - b) * (c - b) / denom;
    }
    ex.speed = 1.0 + 1.0 / (2.0 * ex.T_limit);
    return ex;
}

void write_schedule_csv(std::ostream& os, const Extrapolation& ex) {
    os << "N,epsilon,expected_return_steps,eps_times_steps,speed_estimate\n";
    char buf[256];
    for (const auto& p : ex.points) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", p.N, p.epsilon, p.steps, p.eps_times_steps,
                      p.speed);
        os << buf;
    }
}

CouplingReplay coupling_replay(int N, double epsilon, std::uint64_t seed) {
    const Chain chain = build_chain(N, epsilon, false);
    Rng rng(seed);
    CouplingReplay out;
    State s;
    State next = step(s, rng);
    bool left_zero = false;
    for (std::int64_t n = 0;; ++n) {
        const double slab_end = static_cast<double>(n + 1) * epsilon;
        const auto d_before = s.M - s.m;
        int jumps = 0;
        while (next.t < slab_end) {
            s = next;
            next = step(s, rng);
            ++jumps;
            if (s.M >= N) out.broke_by_height = true;
        }
        if (jumps >= 2) out.broke_by_pair = true;
        if (out.broke_by_pair || out.broke_by_height) break;
        const auto d_after = s.M - s.m;
        if (chain.P[static_cast<std::size_t>(d_before)][static_cast<std::size_t>(d_after)] <= 0.0)
            out.consistent = false;
        ++out.coupled_steps;
        if (d_after != 0) left_zero = true;
        if (left_zero && d_after == 0) break;
    }
    return out;
}

}  // namespace slfv::twocol
