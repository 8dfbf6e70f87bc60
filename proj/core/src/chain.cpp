#include "spe/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "spe/numeric.hpp"

namespace spe {

void ChainParams::validate() const {
  if (B < 1) throw std::invalid_argument("chain: B must be at least 1");
  if (steps < burn_in) throw std::invalid_argument("chain: steps must not be smaller than burn_in");
  if (thinning < 1) throw std::invalid_argument("chain: thinning must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("chain: alpha must be positive");
}

ChainState init(const BipartiteModel& model, const ChainParams& params, Rng& rng) {
  params.validate();
  const OperatorAlphabet alphabet = operator_alphabet(model);
  ChainState state;
  state.config.reserve(2 * params.B);
  for (std::size_t t = 0; t < 2 * params.B; ++t) state.config.push_back(alphabet[rng.index(alphabet.size())]);
  const LogWeight lw = log_weight(model, state.config, params.alpha);
  state.loop_count = lw.loop_count;
  state.sum_log_t = lw.log_weight - static_cast<double>(lw.loop_count) * std::log(params.alpha);
  return state;
}

MetropolisChain::MetropolisChain(const BipartiteModel& model, const ChainParams& params)
    : MetropolisChain(model, params, Rng(params.seed)) {}

MetropolisChain::MetropolisChain(const BipartiteModel& model, const ChainParams& params, Rng rng)
    : n_sites_(model.n_sites()),
      params_(params),
      alphabet_(operator_alphabet(model)),
      rng_(rng),
      counter_(model.n_sites()),
      log_alpha_(std::log(params.alpha)) {
  state_ = init(model, params_, rng_);
  log_t_.reserve(alphabet_.size());
  for (const auto& slot : alphabet_) log_t_.push_back(std::log(slot.weight));
  slot_usage_.assign(alphabet_.size(), 0);
  slot_index_.reserve(state_.config.size());
  for (const auto& slot : state_.config) {
    const std::size_t idx = alphabet_.find(slot);
    slot_index_.push_back(idx);
    ++slot_usage_[idx];
  }
  refresh_log_t();
}

void MetropolisChain::refresh_log_t() {
  CompensatedSum sum;
  for (std::size_t k = 0; k < log_t_.size(); ++k) sum.add(static_cast<double>(slot_usage_[k]) * log_t_[k]);
  state_.sum_log_t = sum.value();
}

bool MetropolisChain::step() {
  ++steps_;
  const bool hold = params_.lazy && rng_.uniform() < 0.5;
  const std::size_t k = rng_.index(state_.config.size());
  const std::size_t o = rng_.index(alphabet_.size());
  const double coin = rng_.uniform();
  if (hold) return false;

  const std::size_t old = slot_index_[k];
  if (old == o) {
    ++accepted_;
    return true;
  }
  state_.config[k] = alphabet_[o];
  const std::size_t loops = counter_.count(state_.config);
  const double log_ratio =
      (static_cast<double>(loops) - static_cast<double>(state_.loop_count)) * log_alpha_ + log_t_[o] - log_t_[old];
  if (log_ratio >= 0.0 || coin < std::exp(log_ratio)) {
    state_.loop_count = loops;
    slot_index_[k] = o;
    --slot_usage_[old];
    ++slot_usage_[o];
    refresh_log_t();
    ++accepted_;
    return true;
  }
  state_.config[k] = alphabet_[old];
  return false;
}

double MetropolisChain::acceptance_rate() const {
  return steps_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(steps_);
}

RunSummary run(const BipartiteModel& model, const ChainParams& params, const std::vector<LoopObservable>& observables,
               const SampleSink& sink) {
  return run(model, params, observables, Rng(params.seed), 0, sink);
}

RunSummary run(const BipartiteModel& model, const ChainParams& params, const std::vector<LoopObservable>& observables,
               Rng rng, std::size_t chain_id, const SampleSink& sink) {
  params.validate();
  MetropolisChain chain(model, params, rng);
  Measurer measurer(model.n_sites());
  RunSummary summary;
  SampleRecord record;
  record.chain = chain_id;
  for (std::uint64_t s = 1; s <= params.steps; ++s) {
    chain.step();
    if (s <= params.burn_in || (s - params.burn_in) % params.thinning != 0) continue;
    record.step = s;
    record.loop_count = chain.state().loop_count;
    record.acceptance_rate = chain.acceptance_rate();
    measurer.measure(chain.state().config, observables, params.alpha, record.measurements);
    ++summary.records;
    if (sink) sink(record, chain.state().config);
  }
  summary.steps = chain.steps_taken();
  summary.accepted = chain.accepted();
  summary.acceptance_rate = chain.acceptance_rate();
  return summary;
}

SampleSet collect(const BipartiteModel& model, const ChainParams& params, std::vector<LoopObservable> observables,
                  std::size_t chains) {
  if (chains < 1) throw std::invalid_argument("collect: need at least one chain");
  params.validate();
  require_valid(model);

  std::vector<std::vector<SampleRecord>> per_chain(chains);
  std::vector<RunSummary> summaries(chains);
  auto worker = [&](std::size_t c) {
    const Rng rng = chains == 1 ? Rng(params.seed) : Rng::stream(params.seed, c);
    summaries[c] = run(model, params, observables, rng, c,
                       [&](const SampleRecord& r, const Configuration&) { per_chain[c].push_back(r); });
  };
  if (chains == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(chains);
    for (std::size_t c = 0; c < chains; ++c) threads.emplace_back(worker, c);
    for (auto& t : threads) t.join();
  }

  SampleSet set;
  set.observables = std::move(observables);
  set.B = params.B;
  set.alpha = params.alpha;
  set.chains = chains;
  for (std::size_t c = 0; c < chains; ++c) {
    set.records.insert(set.records.end(), per_chain[c].begin(), per_chain[c].end());
    set.summary.steps += summaries[c].steps;
    set.summary.accepted += summaries[c].accepted;
    set.summary.records += summaries[c].records;
  }
  set.summary.acceptance_rate =
      set.summary.steps == 0 ? 0.0 : static_cast<double>(set.summary.accepted) / static_cast<double>(set.summary.steps);
  return set;
}

}  // namespace spe
