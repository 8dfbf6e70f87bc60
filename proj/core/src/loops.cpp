#include "spe/loops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spe {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_slot(const OperatorSlot& slot, std::size_t n_sites) {
  if (slot.a >= n_sites || slot.b >= n_sites) throw std::out_of_range("slot " + to_string(slot) + " acts outside the model");
  if (slot.is_bridge() && slot.a == slot.b) throw std::invalid_argument("bridge " + to_string(slot) + " joins a site to itself");
}

}  // namespace

std::size_t LoopDecomposition::segment_at(std::size_t site, std::size_t cut) const {
  if (site >= n_sites || cut > length) throw std::out_of_range("segment_at: site or cut out of range");
  const auto first = segments.begin() + static_cast<std::ptrdiff_t>(site_offset[site]);
  const auto last = segments.begin() + static_cast<std::ptrdiff_t>(site_offset[site + 1]);
  auto it = std::upper_bound(first, last, cut, [](std::size_t c, const Segment& s) { return c < s.first_cut; });
  return static_cast<std::size_t>(std::prev(it) - segments.begin());
}

const Loop& LoopDecomposition::loop(std::size_t label) const {
  auto it = std::lower_bound(loops.begin(), loops.end(), label,
                             [](const Loop& l, std::size_t value) { return l.label < value; });
  if (it == loops.end() || it->label != label) throw std::out_of_range("no loop with this label");
  return *it;
}

LoopDecomposition decompose(std::size_t n_sites, const Configuration& config) {
  LoopDecomposition out;
  out.n_sites = n_sites;
  out.length = config.size();

  std::vector<std::size_t> events(n_sites, 0);
  for (const auto& slot : config) {
    check_slot(slot, n_sites);
    ++events[slot.a];
    if (slot.is_bridge()) ++events[slot.b];
  }
  out.site_offset.assign(n_sites + 1, 0);
  for (std::size_t s = 0; s < n_sites; ++s) out.site_offset[s + 1] = out.site_offset[s] + events[s] + 1;

  const std::size_t n_segments = out.site_offset[n_sites];
  out.segments.resize(n_segments);
  for (std::size_t s = 0; s < n_sites; ++s) {
    for (std::size_t k = out.site_offset[s]; k < out.site_offset[s + 1]; ++k) out.segments[k].site = s;
    out.segments[out.site_offset[s]].first_cut = 0;
    out.segments[out.site_offset[s + 1] - 1].last_cut = out.length;
  }

  // Terminal at the start / end of each segment, if any.
  std::vector<std::vector<Terminal>> start_terminal(n_segments), end_terminal(n_segments);
  for (std::size_t s = 0; s < n_sites; ++s) {
    start_terminal[out.site_offset[s]].push_back({TerminalKind::LeftBoundary, s, 0});
    end_terminal[out.site_offset[s + 1] - 1].push_back({TerminalKind::RightBoundary, s, out.length});
  }

  DisjointSets sets(n_segments);
  std::vector<std::size_t> cursor(out.site_offset.begin(), out.site_offset.end() - 1);
  auto advance = [&](std::size_t site, std::size_t t) {
    const std::size_t before = cursor[site]++;
    out.segments[before].last_cut = t;
    out.segments[before + 1].first_cut = t + 1;
    return std::pair{before, before + 1};
  };

  for (std::size_t t = 0; t < config.size(); ++t) {
    const auto& slot = config[t];
    switch (slot.kind) {
      case SlotKind::AfmBridge: {
        auto [bi, ai] = advance(slot.a, t);
        auto [bj, aj] = advance(slot.b, t);
        sets.unite(bi, bj);
        sets.unite(ai, aj);
        break;
      }
      case SlotKind::FmBridge: {
        auto [bk, ak] = advance(slot.a, t);
        auto [bl, al] = advance(slot.b, t);
        sets.unite(bk, al);
        sets.unite(bl, ak);
        break;
      }
      case SlotKind::Vertex: {
        auto [before, after] = advance(slot.a, t);
        end_terminal[before].push_back({TerminalKind::Vertex, slot.a, t});
        start_terminal[after].push_back({TerminalKind::Vertex, slot.a, t});
        break;
      }
    }
  }

  // Canonical labels: the smallest segment index of each class. Iterating in
  // index order meets every class first at that index.
  out.segment_loop.assign(n_segments, 0);
  std::vector<std::size_t> root_label(n_segments, n_segments);
  std::vector<std::size_t> root_loop(n_segments, 0);
  for (std::size_t seg = 0; seg < n_segments; ++seg) {
    const std::size_t root = sets.find(seg);
    if (root_label[root] == n_segments) {
      root_label[root] = seg;
      root_loop[root] = out.loops.size();
      out.loops.push_back({seg, LoopKind::Closed, {}});
    }
    out.segment_loop[seg] = root_label[root];
    auto& loop = out.loops[root_loop[root]];
    for (const auto& term : start_terminal[seg]) loop.terminals.push_back(term);
    for (const auto& term : end_terminal[seg]) loop.terminals.push_back(term);
  }
  for (auto& loop : out.loops) {
    if (loop.terminals.empty()) {
      loop.kind = LoopKind::Closed;
    } else if (std::any_of(loop.terminals.begin(), loop.terminals.end(),
                           [](const Terminal& t) { return t.kind == TerminalKind::Vertex; })) {
      loop.kind = LoopKind::OpenVertex;
    } else {
      loop.kind = LoopKind::OpenBoundary;
    }
  }
  return out;
}

std::size_t crossing_count(const LoopDecomposition& decomposition, std::size_t cut) {
  if (cut > decomposition.length) throw std::out_of_range("crossing_count: cut out of range");
  std::vector<std::size_t> labels;
  labels.reserve(decomposition.n_sites);
  for (std::size_t s = 0; s < decomposition.n_sites; ++s) {
    labels.push_back(decomposition.segment_loop[decomposition.segment_at(s, cut)]);
  }
  std::sort(labels.begin(), labels.end());
  return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

std::size_t LoopCounter::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool LoopCounter::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  parent_[b] = a;
  return true;
}

std::size_t LoopCounter::count(std::span<const OperatorSlot> config) {
  parent_.resize(n_sites_ + 2 * config.size());
  current_.resize(n_sites_);
  for (std::size_t s = 0; s < n_sites_; ++s) {
    parent_[s] = s;
    current_[s] = s;
  }
  std::size_t next = n_sites_;
  std::size_t merges = 0;
  auto fresh = [&] {
    parent_[next] = next;
    return next++;
  };
  for (const auto& slot : config) {
    check_slot(slot, n_sites_);
    switch (slot.kind) {
      case SlotKind::AfmBridge: {
        const std::size_t bi = current_[slot.a], bj = current_[slot.b];
        const std::size_t ai = fresh(), aj = fresh();
        merges += unite(bi, bj);
        merges += unite(ai, aj);
        current_[slot.a] = ai;
        current_[slot.b] = aj;
        break;
      }
      case SlotKind::FmBridge: {
        const std::size_t bk = current_[slot.a], bl = current_[slot.b];
        const std::size_t ak = fresh(), al = fresh();
        merges += unite(bk, al);
        merges += unite(bl, ak);
        current_[slot.a] = ak;
        current_[slot.b] = al;
        break;
      }
      case SlotKind::Vertex:
        current_[slot.a] = fresh();
        break;
    }
  }
  return next - merges;
}

LogWeight log_weight(std::size_t n_sites, const Configuration& config, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("log_weight: alpha must be positive");
  const std::size_t loops = loop_count(n_sites, config);
  double log_t = 0.0;
  for (const auto& slot : config) log_t += std::log(slot.weight);
  return {loops, static_cast<double>(loops) * std::log(alpha) + log_t};
}

double weight_ratio(std::size_t n_sites, const Configuration& config, std::size_t position,
                    const OperatorSlot& new_slot, double alpha) {
  if (position >= config.size()) throw std::out_of_range("weight_ratio: position out of range");
  if (!(alpha > 0.0)) throw std::invalid_argument("weight_ratio: alpha must be positive");
  LoopCounter counter(n_sites);
  const auto before = static_cast<long long>(counter.count(config));
  Configuration proposed = config;
  proposed[position] = new_slot;
  const auto after = static_cast<long long>(counter.count(proposed));
  return std::pow(alpha, static_cast<double>(after - before)) * new_slot.weight / config[position].weight;
}

}  // namespace spe
