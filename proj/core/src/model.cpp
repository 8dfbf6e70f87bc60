#include "spe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace spe {

char to_char(Sublattice s) { return s == Sublattice::A ? 'A' : 'B'; }

BipartiteModel::BipartiteModel(std::vector<Sublattice> sublattice, std::vector<AfmEdge> afm_edges,
                               std::vector<FmEdge> fm_edges, std::vector<double> fields)
    : sublattice_(std::move(sublattice)),
      afm_edges_(std::move(afm_edges)),
      fm_edges_(std::move(fm_edges)),
      fields_(std::move(fields)) {
  if (fields_.empty()) {
    fields_.assign(sublattice_.size(), 0.0);
  } else if (fields_.size() != sublattice_.size()) {
    throw std::invalid_argument("fields: expected " + std::to_string(sublattice_.size()) +
                                " entries, got " + std::to_string(fields_.size()));
  }
  const auto n_a = static_cast<std::size_t>(std::count(sublattice_.begin(), sublattice_.end(), Sublattice::A));
  if (n_a > sublattice_.size() - n_a) {
    swapped_ = true;
    for (auto& s : sublattice_) s = (s == Sublattice::A) ? Sublattice::B : Sublattice::A;
  }
}

Sublattice BipartiteModel::original_sublattice(std::size_t site) const {
  const Sublattice s = sublattice(site);
  if (!swapped_) return s;
  return s == Sublattice::A ? Sublattice::B : Sublattice::A;
}

std::size_t BipartiteModel::size_a() const {
  return static_cast<std::size_t>(std::count(sublattice_.begin(), sublattice_.end(), Sublattice::A));
}

bool BipartiteModel::has_fields() const {
  return std::any_of(fields_.begin(), fields_.end(), [](double g) { return g > 0.0; });
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SiteOutOfRange: return "site_out_of_range";
    case ViolationKind::SelfLoop: return "self_loop";
    case ViolationKind::AfmSameSublattice: return "afm_same_sublattice";
    case ViolationKind::FmCrossesPartition: return "fm_crosses_partition";
    case ViolationKind::NonPositiveWeight: return "non_positive_weight";
    case ViolationKind::NegativeField: return "negative_field";
    case ViolationKind::NotBipartite: return "not_bipartite";
  }
  return "unknown";
}

namespace {

std::string edge_name(const char* kind, std::size_t index, std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << kind << "[" << index << "] (" << a << ", " << b << ")";
  return os.str();
}

// Odd cycle in the AFM interaction graph, independent of declared labels.
bool afm_graph_is_two_colorable(const BipartiteModel& model) {
  const std::size_t n = model.n_sites();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& e : model.afm_edges()) {
    if (e.i >= n || e.j >= n || e.i == e.j) continue;
    adjacency[e.i].push_back(e.j);
    adjacency[e.j].push_back(e.i);
  }
  std::vector<int> color(n, -1);
  for (std::size_t start = 0; start < n; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : adjacency[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          frontier.push(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

std::vector<Violation> validate(const BipartiteModel& model) {
  std::vector<Violation> out;
  const std::size_t n = model.n_sites();
  auto in_range = [n](std::size_t s) { return s < n; };

  for (std::size_t idx = 0; idx < model.afm_edges().size(); ++idx) {
    const auto& e = model.afm_edges()[idx];
    const std::string name = edge_name("afm_edges", idx, e.i, e.j);
    if (!in_range(e.i) || !in_range(e.j)) {
      out.push_back({ViolationKind::SiteOutOfRange, name + ": site index out of range"});
      continue;
    }
    if (e.i == e.j) {
      out.push_back({ViolationKind::SelfLoop, name + ": edge joins a site to itself"});
    } else if (model.sublattice(e.i) == model.sublattice(e.j)) {
      out.push_back({ViolationKind::AfmSameSublattice,
                     name + ": AFM edge within one sublattice (" +
                         std::string(1, to_char(model.original_sublattice(e.i))) + ")"});
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      out.push_back({ViolationKind::NonPositiveWeight, name + ": weight must be positive"});
    }
  }

  for (std::size_t idx = 0; idx < model.fm_edges().size(); ++idx) {
    const auto& e = model.fm_edges()[idx];
    const std::string name = edge_name("fm_edges", idx, e.k, e.l);
    if (!in_range(e.k) || !in_range(e.l)) {
      out.push_back({ViolationKind::SiteOutOfRange, name + ": site index out of range"});
      continue;
    }
    if (e.k == e.l) {
      out.push_back({ViolationKind::SelfLoop, name + ": edge joins a site to itself"});
    } else if (model.sublattice(e.k) != model.sublattice(e.l)) {
      out.push_back({ViolationKind::FmCrossesPartition, name + ": FM edge crosses the bipartition"});
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      out.push_back({ViolationKind::NonPositiveWeight, name + ": weight must be positive"});
    }
  }

  for (std::size_t m = 0; m < n; ++m) {
    const double g = model.field(m);
    if (!(g >= 0.0) || !std::isfinite(g)) {
      out.push_back({ViolationKind::NegativeField,
                     "fields[" + std::to_string(m) + "]: field must be non-negative"});
    }
  }

  if (!afm_graph_is_two_colorable(model)) {
    out.push_back({ViolationKind::NotBipartite, "AFM interaction graph has an odd cycle; graph not bipartite"});
  }
  return out;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  return msg;
}

}  // namespace

InvalidModel::InvalidModel(const std::vector<Violation>& violations)
    : std::invalid_argument(describe(violations)), violations_(violations) {}

void require_valid(const BipartiteModel& model) {
  auto violations = validate(model);
  if (!violations.empty()) throw InvalidModel(violations);
}

OperatorSlot afm_slot(std::size_t i, std::size_t j, double weight) {
  return {SlotKind::AfmBridge, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), weight};
}

OperatorSlot fm_slot(std::size_t k, std::size_t l, double weight) {
  return {SlotKind::FmBridge, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l), weight};
}

OperatorSlot vertex_slot(std::size_t m, double weight) {
  return {SlotKind::Vertex, static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m), weight};
}

std::string to_string(const OperatorSlot& slot) {
  switch (slot.kind) {
    case SlotKind::AfmBridge: return "A:" + std::to_string(slot.a) + "-" + std::to_string(slot.b);
    case SlotKind::FmBridge: return "F:" + std::to_string(slot.a) + "-" + std::to_string(slot.b);
    case SlotKind::Vertex: return "V:" + std::to_string(slot.a);
  }
  return "?";
}

std::size_t OperatorAlphabet::find(const OperatorSlot& slot) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].same_operator(slot)) return i;
  }
  return slots_.size();
}

double OperatorAlphabet::min_weight() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& s : slots_) w = std::min(w, s.weight);
  return w;
}

double OperatorAlphabet::max_weight() const {
  double w = 0.0;
  for (const auto& s : slots_) w = std::max(w, s.weight);
  return w;
}

bool OperatorAlphabet::has_vertex_slots() const {
  return std::any_of(slots_.begin(), slots_.end(), [](const OperatorSlot& s) { return s.kind == SlotKind::Vertex; });
}

OperatorAlphabet operator_alphabet(const BipartiteModel& model) {
  require_valid(model);
  OperatorAlphabet alphabet;
  alphabet.n_sites_ = model.n_sites();
  for (const auto& e : model.afm_edges()) alphabet.slots_.push_back(afm_slot(e.i, e.j, e.weight));
  for (const auto& e : model.fm_edges()) alphabet.slots_.push_back(fm_slot(e.k, e.l, e.weight));
  for (std::size_t m = 0; m < model.n_sites(); ++m) {
    if (model.field(m) > 0.0) alphabet.slots_.push_back(vertex_slot(m, vertex_weight(model.field(m))));
  }
  if (alphabet.slots_.empty()) {
    throw std::invalid_argument("model has no operators; the loop chain is undefined");
  }
  return alphabet;
}

double norm_bound(const BipartiteModel& model) {
  double total = 0.0;
  for (const auto& e : model.afm_edges()) total += e.weight;
  for (const auto& e : model.fm_edges()) total += e.weight;
  for (double g : model.fields()) total += 2.0 * g;
  return total;
}

std::size_t required_b(const BipartiteModel& model, double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("required_b: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_b: delta must lie in (0, 1)");
  const double n = static_cast<double>(model.n_sites());
  const double norm = norm_bound(model);
  // ln(1 / (delta w)) with w = 2^-N
  const double log_term = -std::log(delta) + n * std::log(2.0);
  const double b = norm / (2.0 * epsilon) * (n + log_term);
  if (!(b < 1e15)) throw std::invalid_argument("required_b: B overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(b)));
}

std::size_t required_b(const BipartiteModel& model, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("required_b: epsilon must be positive");
  const double norm = norm_bound(model);
  const double delta = std::min(0.5, epsilon / norm);
  return required_b(model, epsilon, delta);
}

}  // namespace spe
