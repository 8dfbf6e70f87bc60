#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/model.hpp"

namespace spe::oracle {

// Z-basis states in the rotated (stoquastic) frame. Bit m of a basis index
// is 1 when site m is down.

constexpr std::size_t kDenseSiteCap = 24;

struct DenseState {
  std::size_t n_sites = 0;
  std::vector<double> amplitudes;  // length 2^n_sites

  double norm() const;
  void normalize();
};

/// Throws std::length_error above kDenseSiteCap sites.
DenseState zero_state(std::size_t n_sites);
DenseState basis_state(std::size_t n_sites, std::uint64_t bits);
/// Normalised |+^N>.
DenseState plus_state(std::size_t n_sites);

double inner(const DenseState& a, const DenseState& b);

using DenseOperator = std::function<DenseState(const DenseState&)>;

/// Physical -H~ = sum w h~ + sum v (1 - h) + sum g (1 + X); positive
/// semidefinite and unitarily equivalent to -H.
DenseState apply_neg_h(const BipartiteModel& model, const DenseState& state);

/// Operator reproduced by the loop sum,
/// K = sum (w/2)(I+S) + sum (v/2)(I^F+S) + sum g (1+X) = -H~ - sum v/2.
/// Equal to -H~ when the model has no FM edges.
DenseState apply_loop_operator(const BipartiteModel& model, const DenseState& state);

/// X on one site.
DenseState apply_x(const DenseState& state, std::size_t site);

/// True when every off-diagonal Z-basis element of -H~ is non-negative
/// (probed column by column, N <= 10).
bool is_stoquastic(const BipartiteModel& model);

struct GroundState {
  double energy = 0.0;
  DenseState vector;
  std::size_t iterations = 0;
};

/// E0 by power iteration on the positive semidefinite -H~, started from
/// |+^N> and stopped when the residual |A v - rho v| drops below
/// `residual_tol`. Throws std::runtime_error when the budget runs out.
GroundState exact_ground_energy(const BipartiteModel& model, double residual_tol = 1e-9,
                                std::size_t max_iterations = 2'000'000);

/// All eigenvalues of H in ascending order by dense eigensolve (N <= 10).
std::vector<double> energy_spectrum(const BipartiteModel& model);

/// max |E_i| (N <= 10).
double operator_norm(const BipartiteModel& model);

/// E0 restricted to Z-basis states with exactly |A| down spins, which
/// contains a ground state by the Lieb-Mattis theorem. Basis states are the
/// bit patterns of that weight in increasing numeric order. Throws
/// std::invalid_argument when the model has fields.
double lieb_mattis_ground_energy(const BipartiteModel& model);

/// Dimension of the sector used by lieb_mattis_ground_energy.
std::uint64_t lieb_mattis_sector_dimension(const BipartiteModel& model);

/// Number of (right boundary state, operator type per slot) assignments that
/// propagate through `config` with every slot's precondition satisfied:
/// AFM slot I or S on antialigned pairs, FM slot I^F on aligned pairs or S on
/// antialigned pairs, vertex slot 1 or X anywhere. Exact; limited to N <= 12
/// and length <= 8.
std::uint64_t consistent_count(const BipartiteModel& model, const Configuration& config);

/// Sum over all length-2B configurations of alpha^L(x) prod T(x_k).
/// Limited to 10^7 configurations.
double enumerate_z(const BipartiteModel& model, std::size_t B, double alpha = 2.0);

/// 2^(N+p) <+^N| K^p |+^N> with K the loop operator.
double power_moment(const BipartiteModel& model, std::size_t p);

/// |M_B> = K^B |+^N> / norm.
DenseState mb_state(const BipartiteModel& model, std::size_t B);

/// <M_B| H |M_B>.
double mb_energy(const BipartiteModel& model, std::size_t B);

/// <M_B| O |M_B> for a rotated-frame operator O.
double mb_expectation(const BipartiteModel& model, std::size_t B, const DenseOperator& op);

/// Rotated-frame staggered magnetisation N^-1 sum_m <M_B| X_m |M_B>.
double mb_neel(const BipartiteModel& model, std::size_t B);

struct LeakageReport {
  double leakage = 0.0;        // <M_B| Pi_other |M_B>
  double ground_energy = 0.0;  // E0
  double lambda0 = 0.0;        // largest eigenvalue of K
  double overlap = 0.0;        // w = |<psi_0|+^N>|^2 summed over the ground space
  double bound = 0.0;          // min(1, exp(N - 2 B eps / lambda0 - ln w))
};

/// Exact weight of |M_B> outside the eigenspaces with E <= E0 + epsilon, by
/// full spectral decomposition of K (N <= 10).
LeakageReport low_energy_leakage(const BipartiteModel& model, std::size_t B, double epsilon);

}  // namespace spe::oracle
