#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spe/chain.hpp"
#include "spe/model.hpp"
#include "spe/observables.hpp"

namespace spe {

struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;  // NaN when fewer than two batches are available
  std::size_t batches = 0;
  double autocorrelation = 0.0;  // integrated autocorrelation time, 0.5 for independent samples
};

/// Batch means with floor(sqrt(n)) batches of equal size; a trailing partial
/// batch is dropped from the error estimate but kept in the mean.
EstimateResult batch_means(std::span<const double> series);

/// Pools the batches of several independent series (one per chain).
EstimateResult batch_means(const std::vector<std::vector<double>>& series);

/// Index into samples.observables of the entry with the same operator as
/// `slot`, or samples.observables.size().
std::size_t find_observable(const SampleSet& samples, const OperatorSlot& slot);

struct TermEstimate {
  std::string name;
  double coefficient = 0.0;
  double offset = 0.0;
  EstimateResult insertion;  // statistics of w_O itself
};

struct EnergyEstimate {
  EstimateResult total;
  std::vector<TermEstimate> terms;
};

/// <H> from samples that measured every observable of energy_observables(model)
/// (in any order, possibly alongside others). Throws std::invalid_argument for
/// an empty sample set, alpha != 2 or a missing term.
EnergyEstimate estimate_energy(const BipartiteModel& model, const SampleSet& samples);

/// Rotated-frame staggered magnetisation N^-1 sum_m (E[w_{1+X,m}] - 1), from
/// samples that measured neel_observables(N). Same errors as estimate_energy.
EstimateResult estimate_neel(const BipartiteModel& model, const SampleSet& samples);

/// Exact E_pi[w_O] by enumerating every length-2B configuration (guarded at
/// 10^7 configurations).
double exact_insertion_expectation(const BipartiteModel& model, std::size_t B, const OperatorSlot& slot,
                                   double alpha = 2.0);

/// Exact sum of scale * E_pi[w] + offset over `observables`.
double exact_expectation(const BipartiteModel& model, std::size_t B, const std::vector<LoopObservable>& observables,
                         double alpha = 2.0);

/// Energy estimator applied to the exact stationary distribution.
inline double exact_energy(const BipartiteModel& model, std::size_t B, double alpha = 2.0) {
  return exact_expectation(model, B, energy_observables(model), alpha);
}

}  // namespace spe
