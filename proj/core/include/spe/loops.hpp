#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/model.hpp"

namespace spe {

// Space-time picture: every site carries a world line cut by the slots that
// touch it. Cut t (0 <= t <= length) is the spatial slice between slot t-1
// and slot t, so cut 0 is the left boundary and cut `length` the right one.
//
// Joining rules for a slot acting at time t:
//   AFM bridge (i, j): before_i <-> before_j and after_i <-> after_j (U-turn)
//   FM bridge  (k, l): before_k <-> after_l and before_l <-> after_k (swap)
//   vertex     m     : before_m and after_m both end at the operator

enum class LoopKind : std::uint8_t { Closed, OpenBoundary, OpenVertex };

enum class TerminalKind : std::uint8_t { LeftBoundary, RightBoundary, Vertex };

/// Where an open loop ends. `position` is the cut index for boundary
/// terminals and the slot index for vertex terminals.
struct Terminal {
  TerminalKind kind;
  std::size_t site;
  std::size_t position;

  friend bool operator==(const Terminal&, const Terminal&) = default;
};

/// World-line piece of one site spanning cuts [first_cut, last_cut].
struct Segment {
  std::size_t site;
  std::size_t first_cut;
  std::size_t last_cut;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Loop {
  std::size_t label;  // smallest segment index in the loop
  LoopKind kind;
  std::vector<Terminal> terminals;  // empty for closed loops, two otherwise

  friend bool operator==(const Loop&, const Loop&) = default;
};

struct LoopDecomposition {
  std::size_t n_sites = 0;
  std::size_t length = 0;
  /// Segments are grouped by site; site s owns indices
  /// [site_offset[s], site_offset[s + 1]) in time order.
  std::vector<Segment> segments;
  std::vector<std::size_t> site_offset;
  std::vector<std::size_t> segment_loop;  // loop label of each segment
  std::vector<Loop> loops;                // sorted by label

  std::size_t loop_count() const { return loops.size(); }
  /// Segment of `site` that spans `cut`.
  std::size_t segment_at(std::size_t site, std::size_t cut) const;
  const Loop& loop(std::size_t label) const;

  friend bool operator==(const LoopDecomposition&, const LoopDecomposition&) = default;
};

/// Full loop decomposition. Every operator string decomposes; slots must act
/// on sites below `n_sites` (std::out_of_range otherwise).
LoopDecomposition decompose(std::size_t n_sites, const Configuration& config);

inline LoopDecomposition decompose(const BipartiteModel& model, const Configuration& config) {
  return decompose(model.n_sites(), config);
}

/// Number of distinct loops among the N segments spanning `cut`.
std::size_t crossing_count(const LoopDecomposition& decomposition, std::size_t cut);

/// Loop counting without the bookkeeping of `decompose`. Reuses its buffers,
/// so one counter per thread.
class LoopCounter {
 public:
  explicit LoopCounter(std::size_t n_sites) : n_sites_(n_sites) {}

  std::size_t n_sites() const { return n_sites_; }
  std::size_t count(std::span<const OperatorSlot> config);

 private:
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);

  std::size_t n_sites_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> current_;
};

inline std::size_t loop_count(std::size_t n_sites, const Configuration& config) {
  return LoopCounter(n_sites).count(config);
}

struct LogWeight {
  std::size_t loop_count;
  double log_weight;  // L ln(alpha) + sum ln T
};

/// log of alpha^L(x) * prod_k T(x_k). Throws std::invalid_argument for alpha <= 0.
LogWeight log_weight(std::size_t n_sites, const Configuration& config, double alpha = 2.0);

inline LogWeight log_weight(const BipartiteModel& model, const Configuration& config, double alpha = 2.0) {
  return log_weight(model.n_sites(), config, alpha);
}

/// pi(x')/pi(x) for x' = x with slot `position` replaced by `new_slot`:
/// alpha^(L' - L) * T(new) / T(old), both loop counts recomputed.
double weight_ratio(std::size_t n_sites, const Configuration& config, std::size_t position,
                    const OperatorSlot& new_slot, double alpha = 2.0);

inline double weight_ratio(const BipartiteModel& model, const Configuration& config, std::size_t position,
                           const OperatorSlot& new_slot, double alpha = 2.0) {
  return weight_ratio(model.n_sites(), config, position, new_slot, alpha);
}

}  // namespace spe
