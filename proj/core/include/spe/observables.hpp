#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/loops.hpp"
#include "spe/model.hpp"

namespace spe {

/// A dual pair O = W_a + W_b measured by inserting the bare operator `slot`
/// into the middle of a configuration. The reported value of one sample is
/// scale * w_O(x) + offset, so linear combinations of observables (energy,
/// staggered magnetisation) are sums of these values.
struct LoopObservable {
  OperatorSlot slot;
  double scale = 1.0;
  double offset = 0.0;
  std::string name;
};

/// w_O(x) = alpha^(L(x_O) - L(x)) with x_O = x plus `slot` inserted at index B
/// (the middle of a length-2B configuration). The slot weight is ignored.
/// Throws std::invalid_argument for odd-length configurations.
double measure(std::size_t n_sites, const Configuration& config, const OperatorSlot& slot, double alpha = 2.0);

inline double measure(const BipartiteModel& model, const Configuration& config, const OperatorSlot& slot,
                      double alpha = 2.0) {
  return measure(model.n_sites(), config, slot, alpha);
}

/// Reusable form of `measure` for hot loops; one instance per thread.
class Measurer {
 public:
  explicit Measurer(std::size_t n_sites) : counter_(n_sites) {}

  /// w_O for each slot, with L(x) counted once.
  void measure(const Configuration& config, const std::vector<LoopObservable>& observables, double alpha,
               std::vector<double>& out);

 private:
  LoopCounter counter_;
  Configuration buffer_;
};

/// Energy terms of the model: one observable per AFM edge (I+S, scale -w/2),
/// per FM edge (I^F+S, scale -v/2, offset -v/2 since 1 - h = (I^F+S)/2 + 1/2)
/// and per site with a field (1+X, scale -g). The sum of their sample values
/// estimates <H>.
std::vector<LoopObservable> energy_observables(const BipartiteModel& model);

/// Rotated-frame staggered magnetisation N^-1 sum_m <X_m>: one 1+X observable
/// per site with scale 1/N and offset -1/N.
std::vector<LoopObservable> neel_observables(std::size_t n_sites);

}  // namespace spe
