#include "spe/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "spe/loops.hpp"
#include "spe/numeric.hpp"

namespace spe::oracle {

namespace {

constexpr std::size_t kSpectralSiteCap = 10;
constexpr std::size_t kCountSiteCap = 12;
constexpr std::size_t kCountLengthCap = 8;
constexpr std::uint64_t kEnumerationLimit = 10'000'000;

void check_dense(std::size_t n_sites, std::size_t cap = kDenseSiteCap) {
  if (n_sites > cap) throw std::length_error("dense oracle limited to " + std::to_string(cap) + " sites");
}

std::uint64_t bit(std::size_t site) { return std::uint64_t{1} << site; }

double fm_constant(const BipartiteModel& model) {
  double c = 0.0;
  for (const auto& e : model.fm_edges()) c += 0.5 * e.weight;
  return c;
}

// Calls emit(out_index, value) for every nonzero element of column `x` of
// -H~ (physical) or of the loop operator K.
template <class Emit>
void scatter_column(const BipartiteModel& model, bool loop_form, std::uint64_t x, Emit&& emit) {
  for (const auto& e : model.afm_edges()) {
    const bool bi = (x >> e.i) & 1U, bj = (x >> e.j) & 1U;
    if (bi == bj) continue;
    emit(x, 0.5 * e.weight);
    emit(x ^ (bit(e.i) | bit(e.j)), 0.5 * e.weight);
  }
  for (const auto& e : model.fm_edges()) {
    const bool bk = (x >> e.k) & 1U, bl = (x >> e.l) & 1U;
    if (bk == bl) {
      emit(x, loop_form ? 0.5 * e.weight : e.weight);
    } else {
      if (!loop_form) emit(x, 0.5 * e.weight);
      emit(x ^ (bit(e.k) | bit(e.l)), 0.5 * e.weight);
    }
  }
  const auto fields = model.fields();
  for (std::size_t m = 0; m < fields.size(); ++m) {
    if (fields[m] == 0.0) continue;
    emit(x, fields[m]);
    emit(x ^ bit(m), fields[m]);
  }
}

DenseState apply(const BipartiteModel& model, const DenseState& state, bool loop_form) {
  if (state.n_sites != model.n_sites()) throw std::invalid_argument("state and model sizes differ");
  DenseState out = zero_state(state.n_sites);
  const std::uint64_t dim = state.amplitudes.size();
  for (std::uint64_t x = 0; x < dim; ++x) {
    const double a = state.amplitudes[x];
    if (a == 0.0) continue;
    scatter_column(model, loop_form, x, [&](std::uint64_t y, double c) { out.amplitudes[y] += c * a; });
  }
  return out;
}

Eigen::MatrixXd dense_matrix(const BipartiteModel& model, bool loop_form) {
  check_dense(model.n_sites(), kSpectralSiteCap);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << model.n_sites());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    scatter_column(model, loop_form, static_cast<std::uint64_t>(x),
                   [&](std::uint64_t y, double c) { m(static_cast<Eigen::Index>(y), x) += c; });
  }
  return m;
}

}  // namespace

double DenseState::norm() const {
  CompensatedSum s;
  for (double a : amplitudes) s.add(a * a);
  return std::sqrt(s.value());
}

void DenseState::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalise the zero vector");
  for (double& a : amplitudes) a /= n;
}

DenseState zero_state(std::size_t n_sites) {
  check_dense(n_sites);
  return {n_sites, std::vector<double>(std::size_t{1} << n_sites, 0.0)};
}

DenseState basis_state(std::size_t n_sites, std::uint64_t bits) {
  DenseState s = zero_state(n_sites);
  if (bits >= s.amplitudes.size()) throw std::out_of_range("basis index out of range");
  s.amplitudes[bits] = 1.0;
  return s;
}

DenseState plus_state(std::size_t n_sites) {
  DenseState s = zero_state(n_sites);
  const double a = std::pow(2.0, -0.5 * static_cast<double>(n_sites));
  std::fill(s.amplitudes.begin(), s.amplitudes.end(), a);
  return s;
}

double inner(const DenseState& a, const DenseState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) throw std::invalid_argument("inner: size mismatch");
  CompensatedSum s;
  for (std::size_t k = 0; k < a.amplitudes.size(); ++k) s.add(a.amplitudes[k] * b.amplitudes[k]);
  return s.value();
}

DenseState apply_neg_h(const BipartiteModel& model, const DenseState& state) { return apply(model, state, false); }

DenseState apply_loop_operator(const BipartiteModel& model, const DenseState& state) {
  return apply(model, state, true);
}

DenseState apply_x(const DenseState& state, std::size_t site) {
  if (site >= state.n_sites) throw std::out_of_range("apply_x: site out of range");
  DenseState out = zero_state(state.n_sites);
  for (std::uint64_t x = 0; x < state.amplitudes.size(); ++x) out.amplitudes[x ^ bit(site)] = state.amplitudes[x];
  return out;
}

bool is_stoquastic(const BipartiteModel& model) {
  const Eigen::MatrixXd m = dense_matrix(model, false);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) < 0.0) return false;
    }
  }
  return true;
}

GroundState exact_ground_energy(const BipartiteModel& model, double residual_tol, std::size_t max_iterations) {
  require_valid(model);
  GroundState out;
  out.vector = plus_state(model.n_sites());
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    DenseState w = apply_neg_h(model, out.vector);
    const double rho = inner(out.vector, w);
    const double wn = w.norm();
    if (wn == 0.0) {
      out.energy = 0.0;
      out.iterations = it;
      return out;
    }
    CompensatedSum r;
    for (std::size_t k = 0; k < w.amplitudes.size(); ++k) {
      const double d = w.amplitudes[k] - rho * out.vector.amplitudes[k];
      r.add(d * d);
    }
    out.energy = -rho;
    out.iterations = it;
    if (std::sqrt(r.value()) <= residual_tol * std::max(1.0, rho)) return out;
    for (double& a : w.amplitudes) a /= wn;
    out.vector = std::move(w);
  }
  throw std::runtime_error("exact_ground_energy: power iteration did not converge");
}

std::vector<double> energy_spectrum(const BipartiteModel& model) {
  require_valid(model);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_matrix(model, false), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& mu = solver.eigenvalues();  // ascending eigenvalues of -H~
  std::vector<double> energies(static_cast<std::size_t>(mu.size()));
  for (Eigen::Index k = 0; k < mu.size(); ++k) energies[static_cast<std::size_t>(mu.size() - 1 - k)] = -mu(k);
  return energies;
}

double operator_norm(const BipartiteModel& model) {
  const auto e = energy_spectrum(model);
  return std::max(std::abs(e.front()), std::abs(e.back()));
}

std::uint64_t lieb_mattis_sector_dimension(const BipartiteModel& model) {
  const std::size_t n = model.n_sites();
  const std::size_t k = model.size_a();
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double lieb_mattis_ground_energy(const BipartiteModel& model) {
  require_valid(model);
  if (model.has_fields()) throw std::invalid_argument("lieb_mattis_ground_energy: model has fields");
  if (model.n_sites() > 63) throw std::length_error("lieb_mattis_ground_energy: at most 63 sites");
  const std::uint64_t dim = lieb_mattis_sector_dimension(model);
  if (dim > 200'000) throw std::length_error("lieb_mattis_ground_energy: sector too large");

  // Weight-|A| patterns in increasing order (Gosper's hack).
  const std::size_t weight = model.size_a();
  std::vector<std::uint64_t> basis;
  basis.reserve(dim);
  std::uint64_t x = weight == 0 ? 0 : (std::uint64_t{1} << weight) - 1;
  const std::uint64_t limit = std::uint64_t{1} << model.n_sites();
  while (x < limit) {
    basis.push_back(x);
    if (x == 0) break;
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(basis[k], k);

  // Sparse columns of -H~ restricted to the sector.
  struct Entry {
    std::size_t row;
    double value;
  };
  std::vector<std::vector<Entry>> columns(basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    scatter_column(model, false, basis[col],
                   [&](std::uint64_t y, double c) { columns[col].push_back({index.at(y), c}); });
  }

  if (basis.size() <= 4000) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t col = 0; col < columns.size(); ++col) {
      for (const auto& e : columns[col]) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(col)) += e.value;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return -solver.eigenvalues()(d - 1);
  }

  std::vector<double> v(basis.size(), 1.0 / std::sqrt(static_cast<double>(basis.size())));
  for (std::size_t it = 0; it < 2'000'000; ++it) {
    std::vector<double> w(basis.size(), 0.0);
    for (std::size_t col = 0; col < columns.size(); ++col) {
      for (const auto& e : columns[col]) w[e.row] += e.value * v[col];
    }
    CompensatedSum rho_acc, wn_acc;
    for (std::size_t k = 0; k < v.size(); ++k) {
      rho_acc.add(v[k] * w[k]);
      wn_acc.add(w[k] * w[k]);
    }
    const double rho = rho_acc.value();
    const double wn = std::sqrt(wn_acc.value());
    CompensatedSum res;
    for (std::size_t k = 0; k < v.size(); ++k) res.add((w[k] - rho * v[k]) * (w[k] - rho * v[k]));
    if (std::sqrt(res.value()) <= 1e-9 * std::max(1.0, rho)) return -rho;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = w[k] / wn;
  }
  throw std::runtime_error("lieb_mattis_ground_energy: power iteration did not converge");
}

namespace {

std::uint64_t count_from(const Configuration& config, std::size_t remaining, std::uint64_t sigma) {
  if (remaining == 0) return 1;
  const OperatorSlot& slot = config[remaining - 1];
  const std::size_t next = remaining - 1;
  switch (slot.kind) {
    case SlotKind::AfmBridge: {
      const std::uint64_t mask = bit(slot.a) | bit(slot.b);
      if (std::popcount(sigma & mask) != 1) return 0;
      return count_from(config, next, sigma) + count_from(config, next, sigma ^ mask);
    }
    case SlotKind::FmBridge: {
      const std::uint64_t mask = bit(slot.a) | bit(slot.b);
      if (std::popcount(sigma & mask) != 1) return count_from(config, next, sigma);  // I^F
      return count_from(config, next, sigma ^ mask);                                 // S
    }
    case SlotKind::Vertex:
      return count_from(config, next, sigma) + count_from(config, next, sigma ^ bit(slot.a));
  }
  return 0;
}

}  // namespace

std::uint64_t consistent_count(const BipartiteModel& model, const Configuration& config) {
  if (model.n_sites() > kCountSiteCap) throw std::length_error("consistent_count: too many sites");
  if (config.size() > kCountLengthCap) throw std::length_error("consistent_count: configuration too long");
  for (const auto& slot : config) {
    if (slot.a >= model.n_sites() || slot.b >= model.n_sites()) {
      throw std::out_of_range("consistent_count: slot outside the model");
    }
  }
  std::uint64_t total = 0;
  for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << model.n_sites()); ++sigma) {
    total += count_from(config, config.size(), sigma);
  }
  return total;
}

double enumerate_z(const BipartiteModel& model, std::size_t B, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("enumerate_z: alpha must be positive");
  const OperatorAlphabet alphabet = operator_alphabet(model);
  LoopCounter counter(model.n_sites());
  CompensatedSum z;
  for_each_configuration(alphabet, 2 * B, kEnumerationLimit, [&](const Configuration& x, std::uint64_t) {
    double w = std::pow(alpha, static_cast<double>(counter.count(x)));
    for (const auto& slot : x) w *= slot.weight;
    z.add(w);
  });
  return z.value();
}

double power_moment(const BipartiteModel& model, std::size_t p) {
  require_valid(model);
  const DenseState plus = plus_state(model.n_sites());
  DenseState v = plus;
  for (std::size_t k = 0; k < p; ++k) v = apply_loop_operator(model, v);
  return std::pow(2.0, static_cast<double>(model.n_sites() + p)) * inner(plus, v);
}

DenseState mb_state(const BipartiteModel& model, std::size_t B) {
  require_valid(model);
  DenseState v = plus_state(model.n_sites());
  for (std::size_t k = 0; k < B; ++k) {
    v = apply_loop_operator(model, v);
    v.normalize();
  }
  return v;
}

double mb_expectation(const BipartiteModel& model, std::size_t B, const DenseOperator& op) {
  const DenseState v = mb_state(model, B);
  return inner(v, op(v));
}

double mb_energy(const BipartiteModel& model, std::size_t B) {
  return -mb_expectation(model, B, [&](const DenseState& s) { return apply_neg_h(model, s); });
}

double mb_neel(const BipartiteModel& model, std::size_t B) {
  const DenseState v = mb_state(model, B);
  CompensatedSum s;
  for (std::size_t m = 0; m < model.n_sites(); ++m) s.add(inner(v, apply_x(v, m)));
  return s.value() / static_cast<double>(model.n_sites());
}

LeakageReport low_energy_leakage(const BipartiteModel& model, std::size_t B, double epsilon) {
  require_valid(model);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("low_energy_leakage: epsilon must be non-negative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_matrix(model, true));
  const Eigen::VectorXd& mu = solver.eigenvalues();  // ascending eigenvalues of K
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const Eigen::Index dim = mu.size();
  const double shift = fm_constant(model);
  const double lambda0 = mu(dim - 1);
  const double e0 = -lambda0 - shift;
  const double scale = std::max(std::abs(mu(0)), std::abs(lambda0));
  const double plus_amp = std::pow(2.0, -0.5 * static_cast<double>(model.n_sites()));
  const double degenerate_tol = 1e-9 * std::max(1.0, scale);

  CompensatedSum total, other, ground;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double c = vecs.col(k).sum() * plus_amp;
    const double r = scale > 0.0 ? mu(k) / scale : 0.0;
    const double weight = c * c * std::pow(r * r, static_cast<double>(B));
    const double energy = -mu(k) - shift;
    total.add(weight);
    if (energy > e0 + epsilon) other.add(weight);
    if (energy <= e0 + degenerate_tol) ground.add(c * c);
  }
  LeakageReport out;
  out.ground_energy = e0;
  out.lambda0 = lambda0;
  out.overlap = ground.value();
  out.leakage = total.value() > 0.0 ? std::clamp(other.value() / total.value(), 0.0, 1.0) : 0.0;
  if (lambda0 > 0.0 && out.overlap > 0.0) {
    const double exponent = static_cast<double>(model.n_sites()) - 2.0 * static_cast<double>(B) * epsilon / lambda0 -
                            std::log(out.overlap);
    out.bound = std::min(1.0, std::exp(exponent));
  } else {
    out.bound = 1.0;
  }
  return out;
}

}  // namespace spe::oracle
