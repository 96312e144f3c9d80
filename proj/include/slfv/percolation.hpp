#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "slfv/events.hpp"
#include "slfv/stats.hpp"

namespace slfv {

/// Passage-time rate of the lattice edges.
double fpp_edge_rate();

/// 8-neighbour first-passage percolation on the strip [0, n_max] x [-H, H].
class LatticeFPP {
public:
    LatticeFPP(int n_max, int half_height, Rng& rng);

    int n_max() const { return n_max_; }
    int half_height() const { return h_; }
    std::size_t vertex_count() const { return static_cast<std::size_t>((n_max_ + 1) * (2 * h_ + 1)); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * (2 * h_ + 1) + (j + h_)); }

    /// Weight of the undirected edge between two 8-neighbours.
    double weight(int i1, int j1, int i2, int j2) const;

    /// First-passage times from (0, 0). `reverse` relaxes neighbours in the
    /// opposite order; the result must not depend on it.
    std::vector<double> distances(bool reverse = false) const;
    /// min over m of the passage time to (n, m).
    double column_time(int n, const std::vector<double>& dist) const;

private:
    int n_max_, h_;
    // Weights of the edges leaving (i, j) towards E, N, NE, SE.
    std::vector<double> east_, north_, ne_, se_;
};

/// Default strip half-height 2n + 8.
int default_half_height(int n);

/// Passage time to column n. `half_height <= 0` selects the default.
double fpp_hit(int n, int half_height, std::uint64_t seed);

using Cell = std::pair<int, int>;

/// Cell C_{i,j} (side 2, centre (4i, 4j)) that the unit ball at `center`
/// overlaps, if any. Throws ContractViolation if it overlaps two.
std::optional<Cell> cell_hit_by_ball(Point center);

struct CellActivation {
    std::map<Cell, double> activation;

    /// First activation time among cells in column n (infinity if none).
    double column_time(int n) const;
};

/// Activation times of the cells touched by a time-ordered list of accepted
/// unit-ball events.
CellActivation discretize_trace(const std::vector<Event>& accepted);

struct CoupledDiscretization {
    std::vector<double> tau_discr;  // per n = 1..n_max
    std::vector<double> tau_4n;
};

/// One unit-ball dual trajectory run until reach >= 4 n_max + 1.
CoupledDiscretization coupled_discretization(int n_max, std::uint64_t seed);

struct DominationRow {
    int n = 0;
    Estimate fpp, discr, tau4n;
    bool pointwise = true;          // discr <= tau4n on every replica
    bool fpp_below_discr = false;   // one-sided 95% bound on E[discr] - E[fpp] is positive
    bool discr_below_tau4n = false;  // paired one-sided 95% bound is positive
};

std::vector<DominationRow> domination_suite(const std::vector<int>& n_values, std::size_t reps, std::uint64_t seed,
                                            int workers = 1);
void write_domination_csv(std::ostream& os, const std::vector<DominationRow>& rows);

struct FppLinearity {
    std::vector<int> n_values;
    std::vector<Estimate> times;
    LinearFit fit;
};

FppLinearity fpp_linearity(const std::vector<int>& n_values, std::size_t reps, std::uint64_t seed, int workers = 1);

}  // namespace slfv
