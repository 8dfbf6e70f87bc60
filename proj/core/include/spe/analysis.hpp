#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/model.hpp"
#include "spe/rng.hpp"

namespace spe::analysis {

// Chain matrix ---------------------------------------------------------------

/// Transition matrix of the single-slot Metropolis chain over every
/// length-2B configuration. State index = base-|alphabet| number of the slot
/// indices with slot 0 most significant.
struct ChainMatrix {
  struct Entry {
    std::uint64_t to;
    double probability;
  };

  BipartiteModel model;
  OperatorAlphabet alphabet;
  std::size_t B = 0;
  double alpha = 2.0;
  bool lazy = false;
  std::uint64_t n_states = 0;
  std::vector<std::vector<Entry>> off_diagonal;  // sorted by target
  std::vector<double> diagonal;
  std::vector<std::size_t> loop_count;
  std::vector<double> log_weight;  // L ln(alpha) + sum ln T
  std::vector<double> pi;          // exact stationary distribution

  Configuration state(std::uint64_t index) const;
  std::uint64_t index_of(const Configuration& config) const;
  double probability(std::uint64_t from, std::uint64_t to) const;
  /// Smallest nonzero off-diagonal probability (0 when there is none).
  double min_transition() const;
};

constexpr std::uint64_t kChainStateLimit = 20'000;
constexpr std::uint64_t kRationalStateLimit = 1'000;

/// Throws std::length_error above kChainStateLimit states.
ChainMatrix build_chain_matrix(const BipartiteModel& model, std::size_t B, double alpha = 2.0, bool lazy = false);

struct ExactnessReport {
  std::uint64_t n_states = 0;
  double max_row_error = 0.0;           // |sum_y P(x,y) - 1|
  double max_balance_error = 0.0;       // |pi_x P_xy - pi_y P_yx| / max
  double max_stationarity_error = 0.0;  // |(pi P)_y - pi_y| / pi_y
  bool rational_checked = false;
  bool rational_rows = false;
  bool rational_balance = false;
  bool rational_stationary = false;
  double max_rational_mismatch = 0.0;  // |P_double - P_rational|
};

/// Floating-point checks on every instance; below kRationalStateLimit states
/// the matrix is rebuilt in exact rational arithmetic (every double is a
/// dyadic rational) and stochasticity, detailed balance and stationarity are
/// checked exactly.
ExactnessReport check_exactness(const ChainMatrix& chain);

struct SpectralReport {
  std::uint64_t n_states = 0;
  bool degenerate = false;  // single state: no second eigenvalue, t_rel = 0
  double lambda_2 = 0.0;    // second largest eigenvalue
  double lambda_min = 0.0;  // smallest eigenvalue
  double lambda_star = 0.0;
  double t_rel = 0.0;      // 1 / (1 - lambda_star)
  double pi_min = 0.0;
  double t_mix_upper = 0.0;  // t_rel ln(4 / pi_min)
};

/// Eigenvalues of the symmetrised matrix pi^(1/2) P pi^(-1/2); dense solve up
/// to 2000 states, deflated power iteration beyond.
SpectralReport spectral_report(const ChainMatrix& chain);

/// Same for an explicit reversible chain given as a dense row-major matrix.
SpectralReport spectral_report(const std::vector<std::vector<double>>& P, const std::vector<double>& pi);

// Canonical paths ------------------------------------------------------------

/// z(t) = (y_1..y_t, x_{t+1}..x_2B) for t = 0..2B (1-based slots).
struct CanonicalPath {
  Configuration x;
  Configuration y;
  std::vector<Configuration> states;     // z(0) .. z(2B)
  std::vector<std::size_t> proper_steps;  // t with z(t-1) != z(t)

  std::size_t length() const { return proper_steps.size(); }
};

/// Throws std::invalid_argument when x and y differ in length.
CanonicalPath canonical_path(const Configuration& x, const Configuration& y);

/// z(t) of the path from x to y.
Configuration path_state(const Configuration& x, const Configuration& y, std::size_t t);

/// Encoding of the path through edge (z(t-1), z(t)): (x_1..x_{t-1}, y_t..y_2B).
Configuration encode(const Configuration& x, const Configuration& y, std::size_t t);

/// Recovers (x, y) from the edge tail z(t-1) and the encoding.
std::pair<Configuration, Configuration> decode(const Configuration& z_prev, const Configuration& eta, std::size_t t);

struct EncodingReport {
  double max_ratio = 0.0;  // max pi(x) pi(y) / (pi(z(t-1)) pi(eta))
  Configuration argmax_x, argmax_y;
  std::size_t argmax_t = 0;
  double bound = 0.0;  // 2^(4|A|-2), or 2^(8|A|-4) with vertex slots
  std::uint64_t tuples = 0;
  std::uint64_t decode_failures = 0;
  std::uint64_t collisions = 0;  // two paths through one edge with the same encoding
};

/// Exhaustive over all (x, y, t) with |alphabet|^(2B) <= 2000 states.
EncodingReport encoding_inequality_max(const BipartiteModel& model, std::size_t B, double alpha = 2.0);

/// alpha^(L(x) + L(y) - L(z(t-1)) - L(eta)) for one tuple; slot weights cancel.
double encoding_ratio(std::size_t n_sites, const Configuration& x, const Configuration& y, std::size_t t,
                      double alpha = 2.0);

struct CongestionReport {
  bool degenerate = false;  // no off-diagonal edges
  double phi = 0.0;         // exact congestion of the canonical paths
  std::uint64_t edges = 0;
  double t_rel = 0.0;             // of the same (lazy) chain
  double p_min = 0.0;             // smallest nonzero off-diagonal probability
  double encoding_max = 0.0;      // C measured exactly
  double direct_bound = 0.0;      // C * 2B / p_min
  double closed_form_bound = 0.0;  // 12 B^2 N (T_max/T_min) 2^(8|A|-4)
  double t_mix_theorem = 0.0;      // 24 B^3 N (T_max/T_min) 2^(8|A|-4) log(8 T_min)
  double t_mix_upper = 0.0;       // t_rel ln(4 / pi_min)
};

/// Congestion of the canonical paths on the lazy chain. |gamma| counts proper
/// edges only.
CongestionReport congestion(const BipartiteModel& model, std::size_t B, double alpha = 2.0);

// Loop topology --------------------------------------------------------------

struct TopologyCheck {
  bool fact1 = true;  // open-loop endpoints pair as L-A/L-B, L-A/R-A, L-B/R-B or R-A/R-B
  bool fact2 = true;  // at least |B| - |A| loops run from L-B to R-B
  bool cut = true;    // crossing counts over all cuts differ by at most 2|A| - 1
  std::size_t lb_rb_loops = 0;
  std::size_t min_crossing = 0;
  std::size_t max_crossing = 0;

  bool ok() const { return fact1 && fact2 && cut; }
};

/// Throws std::invalid_argument for configurations with vertex slots.
TopologyCheck check_topology(const BipartiteModel& model, const Configuration& config);

struct TopologyReport {
  std::uint64_t configs = 0;
  std::uint64_t fact1_violations = 0;
  std::uint64_t fact2_violations = 0;
  std::uint64_t cut_violations = 0;
  std::size_t max_spread = 0;
  std::vector<std::string> examples;  // serialized violating configurations (at most 10)

  std::uint64_t violations() const { return fact1_violations + fact2_violations + cut_violations; }
};

/// Checks `n_configs` uniformly random length-`length` configurations.
/// Throws std::invalid_argument for models with fields.
TopologyReport topology_sweep(const BipartiteModel& model, std::size_t length, std::uint64_t n_configs, Rng& rng);

// Star graph / Potts duality -------------------------------------------------

struct PottsReport {
  std::size_t n_sites = 0;
  std::size_t B = 0;
  double z_loop = 0.0;   // enumerated loop partition function
  double z_potts = 0.0;  // alpha^N 1^T T^(2B-1) 1 with q = N-1 colours
  double relative_error = 0.0;
};

/// Open-chain transfer-matrix value 1^T T^(sites-1) 1 for q colours with
/// diagonal `diag` and off-diagonal 1 (free boundaries).
double potts_chain_sum(std::size_t q, std::size_t sites, double diag);

PottsReport potts_cross_check(std::size_t n_sites, std::size_t B, double alpha = 2.0);

// Counterexample -------------------------------------------------------------

struct CounterexampleReport {
  std::string graph;  // "cycle" or "star"
  std::size_t n_sites = 0;
  std::size_t B = 0;
  std::size_t size_a = 0;
  std::size_t t = 0;  // edge (z(t-1), z(t)) evaluated
  Configuration x, y, z, eta;
  std::size_t loops_x = 0, loops_y = 0, loops_z = 0, loops_eta = 0;
  double ratio = 0.0;
  double encoding_bound = 0.0;  // 2^(4|A|-2)
};

/// x cycles through the even-index edges, y through the odd-index edges of
/// the N-cycle (edges (i, i+1 mod N)); ratio evaluated at t = B.
/// B defaults to N. Throws std::invalid_argument for odd N or N < 4.
CounterexampleReport cycle_counterexample(std::size_t n_sites, std::size_t B = 0);

/// Same construction on the star with N sites (N >= 3).
CounterexampleReport star_counterexample(std::size_t n_sites, std::size_t B = 0);

}  // namespace spe::analysis
