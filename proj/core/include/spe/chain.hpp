#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/loops.hpp"
#include "spe/model.hpp"
#include "spe/observables.hpp"
#include "spe/rng.hpp"

namespace spe {

/// Sampler controls. `steps` counts single Metropolis proposals (not sweeps).
struct ChainParams {
  std::size_t B = 1;
  std::uint64_t steps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
  double alpha = 2.0;
  bool lazy = false;

  /// Throws std::invalid_argument unless B >= 1, steps >= burn_in,
  /// thinning >= 1 and alpha > 0.
  void validate() const;
};

struct ChainState {
  Configuration config;  // length 2B
  std::size_t loop_count = 0;
  double sum_log_t = 0.0;
};

/// 2B slots drawn independently and uniformly from the alphabet.
ChainState init(const BipartiteModel& model, const ChainParams& params, Rng& rng);

/// Single-slot Metropolis chain. Each step draws, in this order: the lazy
/// coin (only when params.lazy), the position k, the proposed operator o and
/// the acceptance coin. All draws happen on every step, so trajectories with
/// the same seed are identical whatever is accepted.
class MetropolisChain {
 public:
  MetropolisChain(const BipartiteModel& model, const ChainParams& params);
  MetropolisChain(const BipartiteModel& model, const ChainParams& params, Rng rng);

  /// One Metropolis step; returns true when the proposal was accepted
  /// (a proposal equal to the current slot counts as accepted).
  bool step();

  const ChainState& state() const { return state_; }
  const OperatorAlphabet& alphabet() const { return alphabet_; }
  const ChainParams& params() const { return params_; }
  std::uint64_t steps_taken() const { return steps_; }
  std::uint64_t accepted() const { return accepted_; }
  double acceptance_rate() const;

 private:
  void refresh_log_t();

  std::size_t n_sites_;
  ChainParams params_;
  OperatorAlphabet alphabet_;
  Rng rng_;
  LoopCounter counter_;
  ChainState state_;
  std::vector<std::size_t> slot_index_;   // alphabet index of each slot
  std::vector<std::uint64_t> slot_usage_;  // occurrences of each alphabet entry
  std::vector<double> log_t_;
  double log_alpha_;
  std::uint64_t steps_ = 0;
  std::uint64_t accepted_ = 0;
};

struct SampleRecord {
  std::uint64_t step = 0;
  std::size_t chain = 0;
  std::size_t loop_count = 0;
  double acceptance_rate = 0.0;
  std::vector<double> measurements;  // raw w_O per observable
};

using SampleSink = std::function<void(const SampleRecord&, const Configuration&)>;

struct RunSummary {
  std::uint64_t steps = 0;
  std::uint64_t accepted = 0;
  std::uint64_t records = 0;
  double acceptance_rate = 0.0;
};

/// Runs one chain seeded with params.seed and hands every retained state to
/// `sink`. A state is retained after step s when s > burn_in and
/// (s - burn_in) is a multiple of thinning, giving (steps - burn_in) / thinning
/// records.
RunSummary run(const BipartiteModel& model, const ChainParams& params, const std::vector<LoopObservable>& observables,
               const SampleSink& sink);

/// Same as `run` but with an explicit generator and chain id.
RunSummary run(const BipartiteModel& model, const ChainParams& params, const std::vector<LoopObservable>& observables,
               Rng rng, std::size_t chain_id, const SampleSink& sink);

struct SampleSet {
  std::vector<LoopObservable> observables;
  std::size_t B = 0;
  double alpha = 2.0;
  std::size_t chains = 0;
  std::vector<SampleRecord> records;  // grouped by chain, in step order
  RunSummary summary;
};

/// Collects records from `chains` independent chains run on worker threads.
/// One chain uses params.seed directly; several use Rng::stream(seed, c).
SampleSet collect(const BipartiteModel& model, const ChainParams& params, std::vector<LoopObservable> observables,
                  std::size_t chains = 1);

}  // namespace spe
