#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "slfv/rng.hpp"

namespace slfv::twocol {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// Heights of the lower and higher pile.
struct State {
    std::int64_t m = 0;
    std::int64_t M = 0;
    double t = 0.0;
};

/// Exact jump of the continuous-time process (Gillespie step).
State step(const State& s, Rng& rng);

struct Return {
    double T = 0.0;        // first return time to equal heights
    std::int64_t M = 0;   // common height at that time
};

Return simulate_return(std::uint64_t seed);
Return simulate_return(Rng& rng);

struct LongRun {
    double speed_M = 0.0;
    double speed_m = 0.0;
};

/// M_t / t and m_t / t at t = horizon along one trajectory.
LongRun long_run_speed_mc(double horizon, std::uint64_t seed);

/// True if max height reaches N no later than the first return time plus eps.
bool reaches_before_return(std::int64_t N, double eps, Rng& rng);

/// Discretized difference chain on {0, ..., N}.
struct Chain {
    int N = 0;
    double epsilon = 0.0;
    bool accelerated = false;
    std::vector<std::vector<double>> P;  // row-stochastic
};

Chain build_chain(int N, double epsilon, bool accelerated);

/// A_1..A_N are exact integers; A_0 carries the factor 1 - exp(-2 eps).
struct ASequence {
    BigFloat a0;
    std::vector<BigInt> a;  // a[i] = A_i for i >= 1, a[0] unused (0)
};

/// Throws ContractViolation if some A_i is not positive.
ASequence a_sequence(int N, double epsilon);

/// Closed-form invariant law of the accelerated chain. Throws
/// ContractViolation if ||pP - p||_inf > 1e-10.
std::vector<double> invariant_distribution(const Chain& chain);

/// max_j |(pP)_j - p_j|.
double fixed_point_residual(const Chain& chain, const std::vector<double>& p);

/// Expected exit-then-return time of the non-accelerated chain, in steps.
double expected_return_time(int N, double epsilon);

/// One exit-then-return time of the non-accelerated chain, in steps.
std::uint64_t simulate_chain_return(const Chain& chain, Rng& rng);

/// States visited by the chain started at 0, `steps` transitions.
std::vector<int> simulate_chain_path(const Chain& chain, std::size_t steps, std::uint64_t seed);

struct SchedulePoint {
    int N = 0;
    double epsilon = 0.0;
    double steps = 0.0;          // E[exit-then-return] in steps
    double eps_times_steps = 0.0;
    double speed = 0.0;          // 1 + 1 / (2 eps E)
};

struct Extrapolation {
    std::vector<SchedulePoint> points;
    double T_limit = 0.0;
    double speed = 0.0;
    bool monotone = true;
    std::string warning;
};

/// Default schedule N in {16, 32, 64, 128}, eps = N^-3.
std::vector<std::pair<int, double>> default_schedule();

/// Aitken delta-squared on the last three points (last value if fewer).
Extrapolation extrapolate(const std::vector<std::pair<int, double>>& schedule);

void write_schedule_csv(std::ostream& os, const Extrapolation& ex);

struct CouplingReplay {
    std::size_t coupled_steps = 0;
    bool broke_by_pair = false;    // two jumps in one slab
    bool broke_by_height = false;  // height difference reached N
    bool consistent = true;        // every coupled transition has p_hat > 0
};

/// Samples the continuous process on the grid eps * n and replays the
/// coupled discrete chain until the coupling breaks or the process returns.
CouplingReplay coupling_replay(int N, double epsilon, std::uint64_t seed);

}  // namespace slfv::twocol
