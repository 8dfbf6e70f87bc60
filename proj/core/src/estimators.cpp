#include "spe/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spe/numeric.hpp"

namespace spe {

// Observables ----------------------------------------------------------------

double measure(std::size_t n_sites, const Configuration& config, const OperatorSlot& slot, double alpha) {
  if (config.size() % 2 != 0) throw std::invalid_argument("measure: configuration length must be even");
  if (!(alpha > 0.0)) throw std::invalid_argument("measure: alpha must be positive");
  LoopCounter counter(n_sites);
  const auto before = static_cast<double>(counter.count(config));
  OperatorSlot bare = slot;
  bare.weight = 1.0;
  const auto after = static_cast<double>(counter.count(insert(config, config.size() / 2, bare)));
  return std::pow(alpha, after - before);
}

void Measurer::measure(const Configuration& config, const std::vector<LoopObservable>& observables, double alpha,
                       std::vector<double>& out) {
  if (config.size() % 2 != 0) throw std::invalid_argument("measure: configuration length must be even");
  out.resize(observables.size());
  if (observables.empty()) return;
  const std::size_t middle = config.size() / 2;
  const auto base = static_cast<double>(counter_.count(config));
  buffer_.assign(config.begin(), config.begin() + static_cast<std::ptrdiff_t>(middle));
  buffer_.push_back(OperatorSlot{});
  buffer_.insert(buffer_.end(), config.begin() + static_cast<std::ptrdiff_t>(middle), config.end());
  for (std::size_t k = 0; k < observables.size(); ++k) {
    buffer_[middle] = observables[k].slot;
    out[k] = std::pow(alpha, static_cast<double>(counter_.count(buffer_)) - base);
  }
}

std::vector<LoopObservable> energy_observables(const BipartiteModel& model) {
  require_valid(model);
  std::vector<LoopObservable> out;
  for (const auto& e : model.afm_edges()) {
    out.push_back({afm_slot(e.i, e.j), -0.5 * e.weight, 0.0,
                   "afm " + std::to_string(e.i) + "-" + std::to_string(e.j)});
  }
  for (const auto& e : model.fm_edges()) {
    // 1 - h = (I^F + S)/2 + 1/2, so the FM term carries a constant -v/2.
    out.push_back({fm_slot(e.k, e.l), -0.5 * e.weight, -0.5 * e.weight,
                   "fm " + std::to_string(e.k) + "-" + std::to_string(e.l)});
  }
  if (model.has_fields()) {
    for (std::size_t m = 0; m < model.n_sites(); ++m) {
      if (model.field(m) > 0.0) out.push_back({vertex_slot(m), -model.field(m), 0.0, "field " + std::to_string(m)});
    }
  }
  return out;
}

std::vector<LoopObservable> neel_observables(std::size_t n_sites) {
  if (n_sites == 0) throw std::invalid_argument("neel_observables: no sites");
  std::vector<LoopObservable> out;
  const double inv = 1.0 / static_cast<double>(n_sites);
  for (std::size_t m = 0; m < n_sites; ++m) out.push_back({vertex_slot(m), inv, -inv, "x " + std::to_string(m)});
  return out;
}

// Statistics -----------------------------------------------------------------

namespace {

struct BatchAccumulator {
  CompensatedSum total;
  std::size_t count = 0;
  std::vector<double> batch_means;
  std::size_t batch_size_sum = 0;

  void add_series(std::span<const double> series) {
    for (double v : series) total.add(v);
    count += series.size();
    const std::size_t n = series.size();
    const auto batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (batches == 0) return;
    const std::size_t size = n / batches;
    for (std::size_t b = 0; b < batches; ++b) {
      CompensatedSum s;
      for (std::size_t i = b * size; i < (b + 1) * size; ++i) s.add(series[i]);
      batch_means.push_back(s.value() / static_cast<double>(size));
    }
    batch_size_sum += size * batches;
  }

  EstimateResult finish(const std::vector<std::span<const double>>& all) const {
    EstimateResult r;
    r.batches = batch_means.size();
    if (count == 0) throw std::invalid_argument("batch_means: empty series");
    r.mean = total.value() / static_cast<double>(count);
    if (r.batches < 2) {
      r.std_error = std::numeric_limits<double>::quiet_NaN();
      r.autocorrelation = std::numeric_limits<double>::quiet_NaN();
      return r;
    }
    CompensatedSum bsum;
    for (double m : batch_means) bsum.add(m);
    const double bmean = bsum.value() / static_cast<double>(r.batches);
    CompensatedSum bvar;
    for (double m : batch_means) bvar.add((m - bmean) * (m - bmean));
    const double var_of_batch_means = bvar.value() / static_cast<double>(r.batches - 1);
    r.std_error = std::sqrt(var_of_batch_means / static_cast<double>(r.batches));

    CompensatedSum svar;
    for (const auto& s : all) {
      for (double v : s) svar.add((v - r.mean) * (v - r.mean));
    }
    const double sample_var = count > 1 ? svar.value() / static_cast<double>(count - 1) : 0.0;
    const double batch_size = static_cast<double>(batch_size_sum) / static_cast<double>(r.batches);
    r.autocorrelation = sample_var > 0.0 ? 0.5 * batch_size * var_of_batch_means / sample_var : 0.5;
    return r;
  }
};

}  // namespace

EstimateResult batch_means(std::span<const double> series) {
  BatchAccumulator acc;
  acc.add_series(series);
  return acc.finish({series});
}

EstimateResult batch_means(const std::vector<std::vector<double>>& series) {
  BatchAccumulator acc;
  std::vector<std::span<const double>> spans;
  for (const auto& s : series) {
    acc.add_series(s);
    spans.emplace_back(s);
  }
  return acc.finish(spans);
}

std::size_t find_observable(const SampleSet& samples, const OperatorSlot& slot) {
  for (std::size_t k = 0; k < samples.observables.size(); ++k) {
    if (samples.observables[k].slot.same_operator(slot)) return k;
  }
  return samples.observables.size();
}

namespace {

void check_physical(const SampleSet& samples) {
  if (samples.records.empty()) throw std::invalid_argument("estimator: empty sample set");
  if (samples.alpha != 2.0) throw std::invalid_argument("estimator: the physical estimator needs alpha = 2");
}

std::vector<std::size_t> locate(const SampleSet& samples, const std::vector<LoopObservable>& wanted) {
  std::vector<std::size_t> idx;
  for (const auto& obs : wanted) {
    const std::size_t k = find_observable(samples, obs.slot);
    if (k == samples.observables.size()) {
      throw std::invalid_argument("estimator: samples lack observable " + to_string(obs.slot));
    }
    idx.push_back(k);
  }
  return idx;
}

// Samples carry raw w values; rescale them with the requested observables.
std::vector<std::vector<double>> rescaled_series(const SampleSet& samples, const std::vector<LoopObservable>& wanted,
                                                 const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> out(std::max<std::size_t>(samples.chains, 1));
  for (const auto& rec : samples.records) {
    if (rec.chain >= out.size()) out.resize(rec.chain + 1);
    CompensatedSum v;
    for (std::size_t t = 0; t < wanted.size(); ++t) {
      v.add(wanted[t].scale * rec.measurements.at(idx[t]) + wanted[t].offset);
    }
    out[rec.chain].push_back(v.value());
  }
  std::erase_if(out, [](const std::vector<double>& s) { return s.empty(); });
  return out;
}

}  // namespace

EnergyEstimate estimate_energy(const BipartiteModel& model, const SampleSet& samples) {
  check_physical(samples);
  const auto terms = energy_observables(model);
  const auto idx = locate(samples, terms);
  EnergyEstimate out;
  out.total = batch_means(rescaled_series(samples, terms, idx));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    LoopObservable raw = terms[t];
    raw.scale = 1.0;
    raw.offset = 0.0;
    out.terms.push_back({terms[t].name, terms[t].scale, terms[t].offset, batch_means(rescaled_series(samples, {raw}, {idx[t]}))});
  }
  return out;
}

EstimateResult estimate_neel(const BipartiteModel& model, const SampleSet& samples) {
  check_physical(samples);
  const auto terms = neel_observables(model.n_sites());
  return batch_means(rescaled_series(samples, terms, locate(samples, terms)));
}

// Exact expectations ---------------------------------------------------------

namespace {

constexpr std::uint64_t kExactLimit = 10'000'000;

}  // namespace

double exact_expectation(const BipartiteModel& model, std::size_t B, const std::vector<LoopObservable>& observables,
                         double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exact_expectation: alpha must be positive");
  const OperatorAlphabet alphabet = operator_alphabet(model);
  Measurer measurer(model.n_sites());
  LoopCounter counter(model.n_sites());
  std::vector<double> w;
  CompensatedSum z;
  std::vector<CompensatedSum> numer(observables.size());
  for_each_configuration(alphabet, 2 * B, kExactLimit, [&](const Configuration& x, std::uint64_t) {
    double weight = std::pow(alpha, static_cast<double>(counter.count(x)));
    for (const auto& slot : x) weight *= slot.weight;
    z.add(weight);
    measurer.measure(x, observables, alpha, w);
    for (std::size_t k = 0; k < observables.size(); ++k) numer[k].add(weight * w[k]);
  });
  CompensatedSum total;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    total.add(observables[k].scale * numer[k].value() / z.value() + observables[k].offset);
  }
  return total.value();
}

double exact_insertion_expectation(const BipartiteModel& model, std::size_t B, const OperatorSlot& slot, double alpha) {
  return exact_expectation(model, B, {LoopObservable{slot, 1.0, 0.0, to_string(slot)}}, alpha);
}

}  // namespace spe
