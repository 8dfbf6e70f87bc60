#include "spe/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

#include "spe/loops.hpp"
#include "spe/numeric.hpp"

namespace spe::analysis {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr std::uint64_t kDenseSpectralLimit = 2000;

std::uint64_t place_value(std::size_t base, std::size_t exponent) {
  std::uint64_t v = 1;
  for (std::size_t k = 0; k < exponent; ++k) v *= base;
  return v;
}

}  // namespace

Configuration ChainMatrix::state(std::uint64_t index) const {
  if (index >= n_states) throw std::out_of_range("ChainMatrix::state: index out of range");
  const std::size_t length = 2 * B;
  Configuration config(length);
  for (std::size_t pos = length; pos-- > 0;) {
    config[pos] = alphabet[index % alphabet.size()];
    index /= alphabet.size();
  }
  return config;
}

std::uint64_t ChainMatrix::index_of(const Configuration& config) const {
  if (config.size() != 2 * B) throw std::invalid_argument("ChainMatrix::index_of: wrong configuration length");
  std::uint64_t index = 0;
  for (const auto& slot : config) {
    const std::size_t k = alphabet.find(slot);
    if (k == alphabet.size()) throw std::invalid_argument("ChainMatrix::index_of: slot not in the alphabet");
    index = index * alphabet.size() + k;
  }
  return index;
}

double ChainMatrix::probability(std::uint64_t from, std::uint64_t to) const {
  if (from >= n_states || to >= n_states) throw std::out_of_range("ChainMatrix::probability: index out of range");
  if (from == to) return diagonal[from];
  const auto& row = off_diagonal[from];
  auto it = std::lower_bound(row.begin(), row.end(), to, [](const Entry& e, std::uint64_t v) { return e.to < v; });
  return (it != row.end() && it->to == to) ? it->probability : 0.0;
}

double ChainMatrix::min_transition() const {
  double p = 0.0;
  for (const auto& row : off_diagonal) {
    for (const auto& e : row) {
      if (e.probability > 0.0 && (p == 0.0 || e.probability < p)) p = e.probability;
    }
  }
  return p;
}

ChainMatrix build_chain_matrix(const BipartiteModel& model, std::size_t B, double alpha, bool lazy) {
  if (!(alpha > 0.0)) throw std::invalid_argument("build_chain_matrix: alpha must be positive");
  ChainMatrix chain;
  chain.model = model;
  chain.alphabet = operator_alphabet(model);
  chain.B = B;
  chain.alpha = alpha;
  chain.lazy = lazy;
  const std::size_t length = 2 * B;
  const std::size_t a = chain.alphabet.size();
  chain.n_states = configuration_count(a, length, kChainStateLimit);

  const auto n = static_cast<std::size_t>(chain.n_states);
  chain.loop_count.resize(n);
  chain.log_weight.resize(n);
  std::vector<std::size_t> digits_flat(n * length);
  LoopCounter counter(model.n_sites());
  const double log_alpha = std::log(alpha);
  for_each_configuration(chain.alphabet, length, kChainStateLimit, [&](const Configuration& x, std::uint64_t idx) {
    const std::size_t L = counter.count(x);
    chain.loop_count[idx] = L;
    CompensatedSum lw;
    lw.add(static_cast<double>(L) * log_alpha);
    for (std::size_t pos = 0; pos < length; ++pos) {
      lw.add(std::log(x[pos].weight));
      digits_flat[idx * length + pos] = chain.alphabet.find(x[pos]);
    }
    chain.log_weight[idx] = lw.value();
  });

  const double max_lw = *std::max_element(chain.log_weight.begin(), chain.log_weight.end());
  CompensatedSum z;
  chain.pi.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    chain.pi[k] = std::exp(chain.log_weight[k] - max_lw);
    z.add(chain.pi[k]);
  }
  for (double& p : chain.pi) p /= z.value();

  chain.off_diagonal.assign(n, {});
  chain.diagonal.assign(n, 1.0);
  if (length == 0 || a == 0) return chain;
  const double proposal = (lazy ? 0.5 : 1.0) / (static_cast<double>(length) * static_cast<double>(a));
  for (std::size_t x = 0; x < n; ++x) {
    auto& row = chain.off_diagonal[x];
    row.reserve(length * (a - 1));
    CompensatedSum leaving;
    for (std::size_t pos = 0; pos < length; ++pos) {
      const std::size_t cur = digits_flat[x * length + pos];
      const std::uint64_t pv = place_value(a, length - 1 - pos);
      for (std::size_t o = 0; o < a; ++o) {
        if (o == cur) continue;
        const std::uint64_t y = x - cur * pv + o * pv;
        const double ratio = std::pow(alpha, static_cast<double>(chain.loop_count[y]) -
                                                 static_cast<double>(chain.loop_count[x])) *
                             chain.alphabet[o].weight / chain.alphabet[cur].weight;
        const double p = proposal * std::min(1.0, ratio);
        row.push_back({y, p});
        leaving.add(p);
      }
    }
    std::sort(row.begin(), row.end(), [](const auto& l, const auto& r) { return l.to < r.to; });
    chain.diagonal[x] = 1.0 - leaving.value();
  }
  return chain;
}

ExactnessReport check_exactness(const ChainMatrix& chain) {
  ExactnessReport r;
  r.n_states = chain.n_states;
  const auto n = static_cast<std::size_t>(chain.n_states);

  std::vector<CompensatedSum> flow(n);
  for (std::size_t x = 0; x < n; ++x) {
    CompensatedSum row;
    row.add(chain.diagonal[x]);
    flow[x].add(chain.pi[x] * chain.diagonal[x]);
    for (const auto& e : chain.off_diagonal[x]) {
      row.add(e.probability);
      flow[e.to].add(chain.pi[x] * e.probability);
      const double forward = chain.pi[x] * e.probability;
      const double backward = chain.pi[e.to] * chain.probability(e.to, x);
      const double scale = std::max(forward, backward);
      if (scale > 0.0) r.max_balance_error = std::max(r.max_balance_error, std::abs(forward - backward) / scale);
    }
    r.max_row_error = std::max(r.max_row_error, std::abs(row.value() - 1.0));
  }
  for (std::size_t y = 0; y < n; ++y) {
    r.max_stationarity_error = std::max(r.max_stationarity_error, std::abs(flow[y].value() - chain.pi[y]) / chain.pi[y]);
  }

  if (chain.n_states > kRationalStateLimit) return r;

  // Exact rebuild: unnormalised weights alpha^L prod T and Metropolis rates.
  r.rational_checked = true;
  const std::size_t length = 2 * chain.B;
  const std::size_t a = chain.alphabet.size();
  const Rational alpha(chain.alpha);
  std::vector<Rational> weight(n);
  for (std::size_t x = 0; x < n; ++x) {
    Rational w = 1;
    for (std::size_t k = 0; k < chain.loop_count[x]; ++k) w *= alpha;
    for (const auto& slot : chain.state(x)) w *= Rational(slot.weight);
    weight[x] = w;
  }
  const Rational proposal =
      length == 0 ? Rational(0) : Rational(1) / Rational((chain.lazy ? 2 : 1) * length * a);
  auto rate = [&](std::size_t from, std::size_t to) {
    const Rational ratio = weight[to] / weight[from];
    return proposal * (ratio < 1 ? ratio : Rational(1));
  };

  r.rational_rows = true;
  r.rational_balance = true;
  std::vector<Rational> rational_flow(n);
  for (std::size_t x = 0; x < n; ++x) {
    Rational leaving = 0;
    for (const auto& e : chain.off_diagonal[x]) {
      const auto y = static_cast<std::size_t>(e.to);
      const Rational p = rate(x, y);
      leaving += p;
      rational_flow[y] += weight[x] * p;
      if (weight[x] * p != weight[y] * rate(y, x)) r.rational_balance = false;
      r.max_rational_mismatch = std::max(r.max_rational_mismatch, std::abs(e.probability - p.convert_to<double>()));
    }
    const Rational stay = Rational(1) - leaving;
    if (stay < 0 || stay > 1) r.rational_rows = false;
    if (stay + leaving != 1) r.rational_rows = false;
    rational_flow[x] += weight[x] * stay;
    r.max_rational_mismatch =
        std::max(r.max_rational_mismatch, std::abs(chain.diagonal[x] - stay.convert_to<double>()));
  }
  r.rational_stationary = true;
  for (std::size_t y = 0; y < n; ++y) {
    if (rational_flow[y] != weight[y]) r.rational_stationary = false;
  }
  return r;
}

namespace {

SpectralReport finish_report(std::uint64_t n_states, double lambda_2, double lambda_min, double pi_min) {
  SpectralReport s;
  s.n_states = n_states;
  s.pi_min = pi_min;
  s.lambda_2 = lambda_2;
  s.lambda_min = lambda_min;
  s.lambda_star = std::max(std::abs(lambda_2), std::abs(lambda_min));
  s.t_rel = 1.0 / (1.0 - s.lambda_star);
  s.t_mix_upper = s.t_rel * std::log(4.0 / pi_min);
  return s;
}

SpectralReport dense_spectrum(const Eigen::MatrixXd& R, double pi_min) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (R + R.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending; ev(n-1) = 1
  return finish_report(static_cast<std::uint64_t>(R.rows()), ev(ev.size() - 2), ev(0), pi_min);
}

// Largest eigenvalue of (shift I + sign R) on the complement of sqrt(pi).
double deflated_power(const ChainMatrix& chain, const std::vector<double>& sqrt_pi, double sign) {
  const auto n = static_cast<std::size_t>(chain.n_states);
  std::vector<double> v(n), w(n);
  Rng rng(0x5eed);
  for (auto& e : v) e = rng.uniform() - 0.5;
  auto orthonormalise = [&](std::vector<double>& u) {
    CompensatedSum d;
    for (std::size_t k = 0; k < n; ++k) d.add(u[k] * sqrt_pi[k]);
    for (std::size_t k = 0; k < n; ++k) u[k] -= d.value() * sqrt_pi[k];
    CompensatedSum nn;
    for (double e : u) nn.add(e * e);
    const double norm = std::sqrt(nn.value());
    for (double& e : u) e /= norm;
  };
  orthonormalise(v);
  double rho = 0.0;
  for (std::size_t it = 0; it < 200'000; ++it) {
    // w = (I + sign R) v / 2, spectrum in [0, 1].
    for (std::size_t x = 0; x < n; ++x) w[x] = 0.5 * v[x] * (1.0 + sign * chain.diagonal[x]);
    for (std::size_t x = 0; x < n; ++x) {
      for (const auto& e : chain.off_diagonal[x]) {
        const auto y = static_cast<std::size_t>(e.to);
        // R_yx = sqrt(pi_y / pi_x) P_yx = sqrt(pi_x / pi_y) P_xy by detailed balance.
        w[y] += 0.5 * sign * e.probability * sqrt_pi[x] / sqrt_pi[y] * v[x];
      }
    }
    CompensatedSum r;
    for (std::size_t k = 0; k < n; ++k) r.add(v[k] * w[k]);
    const double next = r.value();
    orthonormalise(w);
    std::swap(v, w);
    if (it > 10 && std::abs(next - rho) <= 1e-13 * std::max(1.0, std::abs(next))) return next;
    rho = next;
  }
  throw std::runtime_error("spectral_report: deflated power iteration did not converge");
}

}  // namespace

SpectralReport spectral_report(const ChainMatrix& chain) {
  const auto n = static_cast<std::size_t>(chain.n_states);
  const double pi_min = *std::min_element(chain.pi.begin(), chain.pi.end());
  if (n <= 1) {
    SpectralReport s;
    s.n_states = chain.n_states;
    s.degenerate = true;
    s.pi_min = pi_min;
    s.lambda_2 = s.lambda_min = 1.0;
    return s;
  }
  std::vector<double> sqrt_pi(n);
  for (std::size_t k = 0; k < n; ++k) sqrt_pi[k] = std::sqrt(chain.pi[k]);
  if (chain.n_states <= kDenseSpectralLimit) {
    const auto d = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t x = 0; x < n; ++x) {
      R(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = chain.diagonal[x];
      for (const auto& e : chain.off_diagonal[x]) {
        R(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(e.to)) =
            sqrt_pi[x] * e.probability / sqrt_pi[static_cast<std::size_t>(e.to)];
      }
    }
    return dense_spectrum(R, pi_min);
  }
  const double top = 2.0 * deflated_power(chain, sqrt_pi, 1.0) - 1.0;
  const double bottom = 1.0 - 2.0 * deflated_power(chain, sqrt_pi, -1.0);
  return finish_report(chain.n_states, top, bottom, pi_min);
}

SpectralReport spectral_report(const std::vector<std::vector<double>>& P, const std::vector<double>& pi) {
  const std::size_t n = P.size();
  if (pi.size() != n) throw std::invalid_argument("spectral_report: size mismatch");
  const double pi_min = *std::min_element(pi.begin(), pi.end());
  if (n <= 1) {
    SpectralReport s;
    s.n_states = n;
    s.degenerate = true;
    s.pi_min = pi_min;
    s.lambda_2 = s.lambda_min = 1.0;
    return s;
  }
  const auto d = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd R(d, d);
  for (std::size_t x = 0; x < n; ++x) {
    if (P[x].size() != n) throw std::invalid_argument("spectral_report: matrix is not square");
    for (std::size_t y = 0; y < n; ++y) {
      R(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = std::sqrt(pi[x] / pi[y]) * P[x][y];
    }
  }
  return dense_spectrum(R, pi_min);
}

}  // namespace spe::analysis
