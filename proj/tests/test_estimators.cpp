#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "spe/chain.hpp"
#include "spe/estimators.hpp"
#include "spe/lattices.hpp"
#include "spe/observables.hpp"
#include "spe/oracle.hpp"
#include "support.hpp"

using namespace spe;

namespace {

// Dual pairs as dense operators, written out independently of the library.
oracle::DenseState apply_dual_pair(const OperatorSlot& slot, const oracle::DenseState& in) {
  oracle::DenseState out = oracle::zero_state(in.n_sites);
  for (std::uint64_t x = 0; x < in.amplitudes.size(); ++x) {
    const double a = in.amplitudes[x];
    if (a == 0.0) continue;
    if (slot.kind == SlotKind::Vertex) {
      out.amplitudes[x] += a;
      out.amplitudes[x ^ (std::uint64_t{1} << slot.a)] += a;
      continue;
    }
    const std::uint64_t mask = (std::uint64_t{1} << slot.a) | (std::uint64_t{1} << slot.b);
    const bool aligned = ((x >> slot.a) & 1U) == ((x >> slot.b) & 1U);
    if (slot.kind == SlotKind::AfmBridge) {
      if (!aligned) {
        out.amplitudes[x] += a;
        out.amplitudes[x ^ mask] += a;
      }
    } else if (aligned) {
      out.amplitudes[x] += a;
    } else {
      out.amplitudes[x ^ mask] += a;
    }
  }
  return out;
}

std::vector<BipartiteModel> small_models() {
  return {test::single_edge(),
          test::pair_with_fields(0.25),
          lattices::star(3),
          lattices::star(4),
          lattices::path(4),
          test::star_with_fm(4),
          test::star_with_fm_and_fields(3),
          BipartiteModel({Sublattice::A, Sublattice::B, Sublattice::B}, {{0, 1, 1.0}, {0, 2, 3.0}})};
}

SampleSet run_energy(const BipartiteModel& m, std::size_t B, std::uint64_t steps, std::uint64_t seed,
                     bool neel = false) {
  ChainParams p;
  p.B = B;
  p.steps = steps;
  p.burn_in = steps / 10;
  p.seed = seed;
  auto obs = energy_observables(m);
  if (neel) {
    const auto n = neel_observables(m.n_sites());
    obs.insert(obs.end(), n.begin(), n.end());
  }
  return collect(m, p, obs);
}

}  // namespace

TEST_CASE("insertion weights") {
  const Configuration pair = {afm_slot(0, 1), afm_slot(0, 1)};
  CHECK(measure(2, pair, afm_slot(0, 1)) == 2.0);

  const Configuration star = {afm_slot(0, 1), afm_slot(0, 1)};
  CHECK(measure(3, star, vertex_slot(2)) == 2.0);   // open strand: L + 1
  CHECK(measure(3, star, vertex_slot(2), 3.0) == 3.0);
  CHECK(measure(3, star, vertex_slot(0)) == 1.0);   // closed X-free loop: L unchanged
  CHECK_THROWS_AS(measure(3, Configuration{afm_slot(0, 1)}, vertex_slot(0)), std::invalid_argument);

  Measurer m(3);
  std::vector<double> out;
  m.measure(star, {{afm_slot(0, 1)}, {vertex_slot(2)}, {vertex_slot(0)}}, 2.0, out);
  CHECK(out == std::vector<double>{measure(3, star, afm_slot(0, 1)), 2.0, 1.0});
}

TEST_CASE("energy observables") {
  const BipartiteModel m = test::star_with_fm_and_fields(3, 0.5, 0.3);
  const auto obs = energy_observables(m);
  REQUIRE(obs.size() == 2 + 1 + 3);
  CHECK(obs[0].scale == -0.5);
  CHECK(obs[2].slot.kind == SlotKind::FmBridge);
  CHECK(obs[2].scale == -0.25);
  CHECK(obs[2].offset == -0.25);
  CHECK(obs[3].scale == doctest::Approx(-0.3));
  const auto neel = neel_observables(4);
  CHECK(neel.size() == 4);
  CHECK(neel[0].scale == 0.25);
  CHECK(neel[0].offset == -0.25);
}

TEST_CASE("E_pi[w_O] equals <M_B| O |M_B>") {
  for (const auto& m : small_models()) {
    const OperatorAlphabet a = operator_alphabet(m);
    std::vector<OperatorSlot> probes(a.begin(), a.end());
    for (std::size_t s = 0; s < m.n_sites(); ++s) probes.push_back(vertex_slot(s));
    for (std::size_t B = 0; B <= 2; ++B) {
      for (const auto& slot : probes) {
        const double sampled = exact_insertion_expectation(m, B, slot);
        const double exact = oracle::mb_expectation(m, B, [&](const oracle::DenseState& v) { return apply_dual_pair(slot, v); });
        CHECK(sampled == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("energy estimator on the exact distribution equals <M_B|H|M_B>") {
  for (const auto& m : small_models()) {
    for (std::size_t B = 1; B <= 3; ++B) {
      if (std::pow(static_cast<double>(operator_alphabet(m).size()), 2.0 * B) > 1e6) continue;
      CHECK(exact_energy(m, B) == doctest::Approx(oracle::mb_energy(m, B)).epsilon(1e-10));
      CHECK(exact_expectation(m, B, neel_observables(m.n_sites())) ==
            doctest::Approx(oracle::mb_neel(m, B)).epsilon(1e-10));
    }
  }
}

TEST_CASE("batch means") {
  const std::vector<double> constant(100, 3.0);
  const EstimateResult c = batch_means(constant);
  CHECK(c.mean == 3.0);
  CHECK(c.std_error == 0.0);
  CHECK(c.batches == 10);

  const std::vector<double> one = {1.0, 2.0, 3.0};
  CHECK(std::isnan(batch_means(one).std_error));
  CHECK(batch_means(one).batches == 1);
  CHECK_THROWS_AS(batch_means(std::vector<double>{}), std::invalid_argument);

  // i.i.d. draws from the exact insertion law of star N=3, B=2: the error
  // shrinks like 1/sqrt(n) and matches sigma / sqrt(n).
  const BipartiteModel star = lattices::star(3);
  const OperatorAlphabet a = operator_alphabet(star);
  std::vector<double> values, probs;
  LoopCounter counter(3);
  for_each_configuration(a, 4, 100, [&](const Configuration& x, std::uint64_t) {
    values.push_back(measure(3, x, afm_slot(0, 1)));
    probs.push_back(std::pow(2.0, static_cast<double>(counter.count(x))));
  });
  std::discrete_distribution<std::size_t> law(probs.begin(), probs.end());
  std::mt19937_64 gen(5);
  auto draw = [&](std::size_t n) {
    std::vector<double> s(n);
    for (auto& v : s) v = values[law(gen)];
    return s;
  };
  const auto small = draw(10'000);
  const auto large = draw(1'000'000);
  const EstimateResult rs = batch_means(small);
  const EstimateResult rl = batch_means(large);
  CHECK(rs.std_error / rl.std_error == doctest::Approx(10.0).epsilon(0.3));
  double mean = 0.0, var = 0.0, z = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    z += probs[i];
    mean += probs[i] * values[i];
  }
  mean /= z;
  for (std::size_t i = 0; i < values.size(); ++i) var += probs[i] * (values[i] - mean) * (values[i] - mean);
  var /= z;
  CHECK(rl.std_error == doctest::Approx(std::sqrt(var / 1e6)).epsilon(0.3));
  CHECK(std::abs(rl.mean - mean) < 4.0 * rl.std_error);
  CHECK(rl.autocorrelation == doctest::Approx(0.5).epsilon(0.4));

  const EstimateResult pooled = batch_means(std::vector<std::vector<double>>{small, small});
  CHECK(pooled.batches == 200);
  CHECK(pooled.mean == doctest::Approx(rs.mean));
}

TEST_CASE("estimator errors") {
  const BipartiteModel star = lattices::star(3);
  SampleSet empty;
  empty.observables = energy_observables(star);
  CHECK_THROWS_AS(estimate_energy(star, empty), std::invalid_argument);

  SampleSet s = run_energy(star, 2, 200, 1);
  s.alpha = 1.5;
  CHECK_THROWS_AS(estimate_energy(star, s), std::invalid_argument);
  s.alpha = 2.0;
  CHECK_NOTHROW(estimate_energy(star, s));
  CHECK_THROWS_AS(estimate_neel(star, s), std::invalid_argument);  // no 1+X observables
  CHECK_THROWS_AS(estimate_energy(lattices::star(4), s), std::invalid_argument);
}

TEST_CASE("single edge: the estimate is exactly -1") {
  const BipartiteModel edge = test::single_edge();
  const SampleSet s = run_energy(edge, required_b(edge, 0.05), 20'000, 3, true);
  const EnergyEstimate e = estimate_energy(edge, s);
  CHECK(e.total.mean == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e.total.std_error == 0.0);
  // Neel value on the singlet is the ED value <X_m> = 0.
  const EstimateResult neel = estimate_neel(edge, s);
  CHECK(neel.mean == doctest::Approx(oracle::mb_neel(edge, s.B)).epsilon(1e-12));
  CHECK(neel.mean == doctest::Approx(0.0));
}

TEST_CASE("star N=3: energy near -3/2 and Neel value matches <M_B|O|M_B>") {
  const BipartiteModel star = lattices::star(3);
  const std::size_t B = required_b(star, 0.1);
  const SampleSet s = run_energy(star, B, 400'000, 17, true);
  const EnergyEstimate e = estimate_energy(star, s);
  CHECK(std::abs(e.total.mean - oracle::exact_ground_energy(star).energy) <= 3.0 * e.total.std_error);
  const EstimateResult neel = estimate_neel(star, s);
  CHECK(std::abs(neel.mean - oracle::mb_neel(star, B)) <= 3.0 * neel.std_error);
}

TEST_CASE("weighted model with fields and FM bond: estimate near <M_B|H|M_B>") {
  const BipartiteModel m = test::star_with_fm_and_fields(3, 0.5, 0.3);
  const std::size_t B = 6;
  const SampleSet s = run_energy(m, B, 400'000, 23);
  const EnergyEstimate e = estimate_energy(m, s);
  CHECK(std::abs(e.total.mean - oracle::mb_energy(m, B)) <= 3.0 * e.total.std_error);
}
