#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "spe/analysis.hpp"
#include "spe/lattices.hpp"
#include "spe/loops.hpp"
#include "spe/numeric.hpp"
#include "spe/oracle.hpp"

namespace spe::analysis {

namespace {

constexpr std::uint64_t kPathStateLimit = 2000;
constexpr std::uint64_t kCollisionStateLimit = 200;

void check_lengths(const Configuration& x, const Configuration& y) {
  if (x.size() != y.size()) throw std::invalid_argument("canonical path endpoints differ in length");
}

void check_step(std::size_t t, std::size_t length) {
  if (t < 1 || t > length) throw std::out_of_range("path step must lie in [1, 2B]");
}

double encoding_bound(const BipartiteModel& model, const OperatorAlphabet& alphabet) {
  const double a = static_cast<double>(model.size_a());
  return alphabet.has_vertex_slots() ? std::pow(2.0, 8.0 * a - 4.0) : std::pow(2.0, 4.0 * a - 2.0);
}

// Enumerated state space with per-state digits and loop counts.
struct StateSpace {
  std::size_t length = 0;
  std::size_t base = 0;
  std::uint64_t n = 0;
  std::vector<std::size_t> digits;  // n * length
  std::vector<std::size_t> loops;
  std::vector<std::uint64_t> place;  // base^(length - 1 - pos)

  std::size_t digit(std::uint64_t s, std::size_t pos) const { return digits[s * length + pos]; }

  // Index of the configuration whose first `split` slots come from `head`
  // and the rest from `tail`.
  std::uint64_t spliced(std::uint64_t head, std::uint64_t tail, std::size_t split) const {
    std::uint64_t idx = 0;
    for (std::size_t pos = 0; pos < length; ++pos) idx += (pos < split ? digit(head, pos) : digit(tail, pos)) * place[pos];
    return idx;
  }
};

StateSpace enumerate_states(const BipartiteModel& model, const OperatorAlphabet& alphabet, std::size_t B) {
  StateSpace s;
  s.length = 2 * B;
  s.base = alphabet.size();
  LoopCounter counter(model.n_sites());
  s.place.assign(s.length, 1);
  for (std::size_t pos = s.length; pos-- > 1;) s.place[pos - 1] = s.place[pos] * s.base;
  for_each_configuration(alphabet, s.length, kPathStateLimit, [&](const Configuration& x, std::uint64_t) {
    for (const auto& slot : x) s.digits.push_back(alphabet.find(slot));
    s.loops.push_back(counter.count(x));
    ++s.n;
  });
  return s;
}

}  // namespace

Configuration path_state(const Configuration& x, const Configuration& y, std::size_t t) {
  check_lengths(x, y);
  if (t > x.size()) throw std::out_of_range("path_state: t past the end of the path");
  Configuration z(x);
  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(t), z.begin());
  return z;
}

CanonicalPath canonical_path(const Configuration& x, const Configuration& y) {
  check_lengths(x, y);
  CanonicalPath path;
  path.x = x;
  path.y = y;
  for (std::size_t t = 0; t <= x.size(); ++t) path.states.push_back(path_state(x, y, t));
  for (std::size_t t = 1; t <= x.size(); ++t) {
    if (!x[t - 1].same_operator(y[t - 1])) path.proper_steps.push_back(t);
  }
  return path;
}

Configuration encode(const Configuration& x, const Configuration& y, std::size_t t) {
  check_lengths(x, y);
  check_step(t, x.size());
  Configuration eta(y);
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(t - 1), eta.begin());
  return eta;
}

std::pair<Configuration, Configuration> decode(const Configuration& z_prev, const Configuration& eta, std::size_t t) {
  check_lengths(z_prev, eta);
  check_step(t, z_prev.size());
  Configuration x(z_prev), y(eta);
  for (std::size_t k = 0; k + 1 < t; ++k) {
    x[k] = eta[k];
    y[k] = z_prev[k];
  }
  return {x, y};
}

double encoding_ratio(std::size_t n_sites, const Configuration& x, const Configuration& y, std::size_t t,
                      double alpha) {
  LoopCounter counter(n_sites);
  const auto lx = static_cast<double>(counter.count(x));
  const auto ly = static_cast<double>(counter.count(y));
  const auto lz = static_cast<double>(counter.count(path_state(x, y, t - 1)));
  const auto le = static_cast<double>(counter.count(encode(x, y, t)));
  return std::pow(alpha, lx + ly - lz - le);
}

EncodingReport encoding_inequality_max(const BipartiteModel& model, std::size_t B, double alpha) {
  const OperatorAlphabet alphabet = operator_alphabet(model);
  const StateSpace space = enumerate_states(model, alphabet, B);
  EncodingReport r;
  r.bound = encoding_bound(model, alphabet);
  if (space.length == 0) {
    r.max_ratio = 1.0;
    return r;
  }
  const bool check_collisions = space.n <= kCollisionStateLimit;
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> seen;
  long long best_exponent = 0;
  bool have_best = false;
  std::uint64_t bx = 0, by = 0;
  for (std::uint64_t x = 0; x < space.n; ++x) {
    for (std::uint64_t y = 0; y < space.n; ++y) {
      for (std::size_t t = 1; t <= space.length; ++t) {
        const std::uint64_t z = space.spliced(y, x, t - 1);
        const std::uint64_t eta = space.spliced(x, y, t - 1);
        const long long exponent = static_cast<long long>(space.loops[x] + space.loops[y]) -
                                   static_cast<long long>(space.loops[z] + space.loops[eta]);
        ++r.tuples;
        if (!have_best || exponent > best_exponent) {
          have_best = true;
          best_exponent = exponent;
          bx = x;
          by = y;
          r.argmax_t = t;
        }
        // Decoding: x from (eta head, z tail), y from (z head, eta tail).
        if (space.spliced(eta, z, t - 1) != x || space.spliced(z, eta, t - 1) != y) ++r.decode_failures;
        if (check_collisions && space.digit(x, t - 1) != space.digit(y, t - 1)) {
          const std::uint64_t w = z + (space.digit(y, t - 1) - space.digit(x, t - 1)) * space.place[t - 1];
          if (!seen.emplace(z, w, eta).second) ++r.collisions;
        }
      }
    }
  }
  r.max_ratio = std::pow(alpha, static_cast<double>(best_exponent));
  auto to_config = [&](std::uint64_t s) {
    Configuration c;
    for (std::size_t pos = 0; pos < space.length; ++pos) c.push_back(alphabet[space.digit(s, pos)]);
    return c;
  };
  r.argmax_x = to_config(bx);
  r.argmax_y = to_config(by);
  return r;
}

CongestionReport congestion(const BipartiteModel& model, std::size_t B, double alpha) {
  const ChainMatrix chain = build_chain_matrix(model, B, alpha, true);
  if (chain.n_states > kPathStateLimit) throw std::length_error("congestion: state space too large");
  const OperatorAlphabet& alphabet = chain.alphabet;
  const StateSpace space = enumerate_states(model, alphabet, B);

  CongestionReport r;
  r.p_min = chain.min_transition();
  const double t_max = alphabet.max_weight();
  const double t_min = alphabet.min_weight();
  const double bb = static_cast<double>(B);
  const double n = static_cast<double>(model.n_sites());
  const double c2 = std::pow(2.0, 8.0 * static_cast<double>(model.size_a()) - 4.0);
  r.closed_form_bound = 12.0 * bb * bb * n * (t_max / t_min) * c2;
  r.t_mix_theorem = 24.0 * bb * bb * bb * n * (t_max / t_min) * c2 * std::log(8.0 * t_min);

  const SpectralReport spectral = spectral_report(chain);
  r.t_rel = spectral.t_rel;
  r.t_mix_upper = spectral.t_mix_upper;
  if (r.p_min == 0.0) {
    r.degenerate = true;
    r.encoding_max = 1.0;
    return r;
  }

  std::unordered_map<std::uint64_t, CompensatedSum> flow;
  for (std::uint64_t x = 0; x < space.n; ++x) {
    for (std::uint64_t y = 0; y < space.n; ++y) {
      if (x == y) continue;
      std::size_t hamming = 0;
      for (std::size_t pos = 0; pos < space.length; ++pos) hamming += space.digit(x, pos) != space.digit(y, pos);
      const double mass = chain.pi[x] * chain.pi[y] * static_cast<double>(hamming);
      for (std::size_t t = 1; t <= space.length; ++t) {
        if (space.digit(x, t - 1) == space.digit(y, t - 1)) continue;
        const std::uint64_t z = space.spliced(y, x, t - 1);
        const std::uint64_t w = z + (space.digit(y, t - 1) - space.digit(x, t - 1)) * space.place[t - 1];
        flow[z * space.n + w].add(mass);
      }
    }
  }
  r.edges = flow.size();
  for (const auto& [key, f] : flow) {
    const std::uint64_t z = key / space.n;
    const std::uint64_t w = key % space.n;
    r.phi = std::max(r.phi, f.value() / (chain.pi[z] * chain.probability(z, w)));
  }
  r.encoding_max = encoding_inequality_max(model, B, alpha).max_ratio;
  r.direct_bound = r.encoding_max * static_cast<double>(space.length) / r.p_min;
  return r;
}

// Topology -------------------------------------------------------------------

TopologyCheck check_topology(const BipartiteModel& model, const Configuration& config) {
  for (const auto& slot : config) {
    if (slot.kind == SlotKind::Vertex) throw std::invalid_argument("check_topology: vertex slots not allowed");
  }
  const LoopDecomposition d = decompose(model, config);
  TopologyCheck c;
  for (const auto& loop : d.loops) {
    if (loop.kind != LoopKind::OpenBoundary) continue;
    if (loop.terminals.size() != 2) {
      c.fact1 = false;
      continue;
    }
    const auto& p = loop.terminals[0];
    const auto& q = loop.terminals[1];
    const bool same_side = p.kind == q.kind;
    const bool same_sub = model.sublattice(p.site) == model.sublattice(q.site);
    if (same_side == same_sub) c.fact1 = false;
    if (!same_side && model.sublattice(p.site) == Sublattice::B && model.sublattice(q.site) == Sublattice::B) {
      ++c.lb_rb_loops;
    }
  }
  c.fact2 = c.lb_rb_loops >= model.size_b() - model.size_a();
  c.min_crossing = d.n_sites;
  for (std::size_t cut = 0; cut <= d.length; ++cut) {
    const std::size_t k = crossing_count(d, cut);
    c.min_crossing = std::min(c.min_crossing, k);
    c.max_crossing = std::max(c.max_crossing, k);
  }
  const auto spread = static_cast<long long>(c.max_crossing - c.min_crossing);
  c.cut = spread <= 2 * static_cast<long long>(model.size_a()) - 1 || spread == 0;
  return c;
}

TopologyReport topology_sweep(const BipartiteModel& model, std::size_t length, std::uint64_t n_configs, Rng& rng) {
  if (model.has_fields()) throw std::invalid_argument("topology_sweep: model must not have fields");
  const OperatorAlphabet alphabet = operator_alphabet(model);
  TopologyReport r;
  Configuration config(length);
  for (std::uint64_t k = 0; k < n_configs; ++k) {
    for (auto& slot : config) slot = alphabet[rng.index(alphabet.size())];
    const TopologyCheck c = check_topology(model, config);
    ++r.configs;
    r.fact1_violations += !c.fact1;
    r.fact2_violations += !c.fact2;
    r.cut_violations += !c.cut;
    r.max_spread = std::max(r.max_spread, c.max_crossing - c.min_crossing);
    if (!c.ok() && r.examples.size() < 10) r.examples.push_back(serialize(config));
  }
  return r;
}

// Potts ----------------------------------------------------------------------

double potts_chain_sum(std::size_t q, std::size_t sites, double diag) {
  if (q == 0) throw std::invalid_argument("potts_chain_sum: need at least one colour");
  if (sites == 0) return 1.0;
  std::vector<double> v(q, 1.0), w(q);
  for (std::size_t s = 1; s < sites; ++s) {
    CompensatedSum total;
    for (double e : v) total.add(e);
    for (std::size_t c = 0; c < q; ++c) w[c] = total.value() + (diag - 1.0) * v[c];
    std::swap(v, w);
  }
  CompensatedSum total;
  for (double e : v) total.add(e);
  return total.value();
}

PottsReport potts_cross_check(std::size_t n_sites, std::size_t B, double alpha) {
  if (n_sites < 2) throw std::invalid_argument("potts_cross_check: star needs at least 2 sites");
  PottsReport r;
  r.n_sites = n_sites;
  r.B = B;
  const BipartiteModel star = lattices::star(n_sites);
  r.z_loop = oracle::enumerate_z(star, B, alpha);
  r.z_potts = std::pow(alpha, static_cast<double>(n_sites)) * potts_chain_sum(n_sites - 1, 2 * B, alpha);
  r.relative_error = relative_difference(r.z_loop, r.z_potts);
  return r;
}

// Counterexample -------------------------------------------------------------

namespace {

CounterexampleReport evaluate(const BipartiteModel& model, std::string graph, std::size_t B,
                              const std::vector<std::size_t>& x_edges, const std::vector<std::size_t>& y_edges) {
  const OperatorAlphabet alphabet = operator_alphabet(model);
  CounterexampleReport r;
  r.graph = std::move(graph);
  r.n_sites = model.n_sites();
  r.B = B;
  r.size_a = model.size_a();
  r.t = B;
  for (std::size_t k = 0; k < 2 * B; ++k) {
    r.x.push_back(alphabet[x_edges[k % x_edges.size()]]);
    r.y.push_back(alphabet[y_edges[k % y_edges.size()]]);
  }
  r.z = path_state(r.x, r.y, r.t - 1);
  r.eta = encode(r.x, r.y, r.t);
  LoopCounter counter(model.n_sites());
  r.loops_x = counter.count(r.x);
  r.loops_y = counter.count(r.y);
  r.loops_z = counter.count(r.z);
  r.loops_eta = counter.count(r.eta);
  r.ratio = std::pow(2.0, static_cast<double>(r.loops_x + r.loops_y) - static_cast<double>(r.loops_z + r.loops_eta));
  r.encoding_bound = std::pow(2.0, 4.0 * static_cast<double>(r.size_a) - 2.0);
  return r;
}

}  // namespace

CounterexampleReport cycle_counterexample(std::size_t n_sites, std::size_t B) {
  if (n_sites < 4 || n_sites % 2 != 0) throw std::invalid_argument("cycle_counterexample: N must be even and >= 4");
  if (B == 0) B = n_sites;
  std::vector<std::size_t> even, odd;
  for (std::size_t e = 0; e < n_sites; ++e) (e % 2 == 0 ? even : odd).push_back(e);
  return evaluate(lattices::cycle(n_sites), "cycle", B, even, odd);
}

CounterexampleReport star_counterexample(std::size_t n_sites, std::size_t B) {
  if (n_sites < 3) throw std::invalid_argument("star_counterexample: N must be at least 3");
  if (B == 0) B = n_sites;
  std::vector<std::size_t> even, odd;
  for (std::size_t e = 0; e + 1 < n_sites; ++e) (e % 2 == 0 ? even : odd).push_back(e);
  return evaluate(lattices::star(n_sites), "star", B, even, odd);
}

}  // namespace spe::analysis
