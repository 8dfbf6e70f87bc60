#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spe {

enum class Sublattice : std::uint8_t { A, B };

char to_char(Sublattice s);

/// Antiferromagnetic exchange w * h_ij between the two sublattices.
struct AfmEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;
};

/// Ferromagnetic exchange v * (1 - h_kl) inside one sublattice.
struct FmEdge {
  std::size_t k = 0;
  std::size_t l = 0;
  double weight = 1.0;
};

/// Bipartite Heisenberg Hamiltonian
///
///   H = - sum w_ij h_ij - sum v_kl (1 - h_kl) - sum g_m (1 +/- X_m)
///
/// with the field sign staggered by sublattice. The model is a value; it may
/// hold data that fails `validate`, and every consumer that needs a physical
/// model checks validity first.
///
/// Construction relabels A <-> B when the declared A side is the larger one,
/// so that |A| <= |B| always holds afterwards. `original_sublattice` keeps the
/// labels as the user supplied them.
class BipartiteModel {
 public:
  BipartiteModel() = default;

  /// `fields` is either empty (no fields) or has one entry per site.
  /// Throws std::invalid_argument when `fields` has the wrong length.
  BipartiteModel(std::vector<Sublattice> sublattice, std::vector<AfmEdge> afm_edges,
                 std::vector<FmEdge> fm_edges = {}, std::vector<double> fields = {});

  std::size_t n_sites() const { return sublattice_.size(); }
  Sublattice sublattice(std::size_t site) const { return sublattice_.at(site); }
  Sublattice original_sublattice(std::size_t site) const;
  bool sublattices_swapped() const { return swapped_; }

  std::size_t size_a() const;
  std::size_t size_b() const { return n_sites() - size_a(); }

  std::span<const Sublattice> sublattices() const { return sublattice_; }
  std::span<const AfmEdge> afm_edges() const { return afm_edges_; }
  std::span<const FmEdge> fm_edges() const { return fm_edges_; }
  std::span<const double> fields() const { return fields_; }
  double field(std::size_t site) const { return fields_.at(site); }
  bool has_fields() const;

 private:
  std::vector<Sublattice> sublattice_;
  std::vector<AfmEdge> afm_edges_;
  std::vector<FmEdge> fm_edges_;
  std::vector<double> fields_;
  bool swapped_ = false;
};

enum class ViolationKind {
  SiteOutOfRange,
  SelfLoop,
  AfmSameSublattice,
  FmCrossesPartition,
  NonPositiveWeight,
  NegativeField,
  NotBipartite,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string_view to_string(ViolationKind kind);

/// All problems with `model`; an empty result means the model is valid.
std::vector<Violation> validate(const BipartiteModel& model);

inline bool is_valid(const BipartiteModel& model) { return validate(model).empty(); }

class InvalidModel : public std::invalid_argument {
 public:
  explicit InvalidModel(const std::vector<Violation>& violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws InvalidModel when `validate` reports anything.
void require_valid(const BipartiteModel& model);

enum class SlotKind : std::uint8_t { AfmBridge, FmBridge, Vertex };

/// One operator of the loop representation. For bridges `a`/`b` are the two
/// sites; for a vertex operator `a == b` is the site. `weight` is the factor
/// T the slot contributes to a configuration weight.
struct OperatorSlot {
  SlotKind kind = SlotKind::AfmBridge;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 1.0;

  bool is_bridge() const { return kind != SlotKind::Vertex; }
  bool touches(std::size_t site) const { return a == site || b == site; }
  /// Same operator on the same sites, ignoring the weight.
  bool same_operator(const OperatorSlot& other) const {
    return kind == other.kind && a == other.a && b == other.b;
  }

  friend bool operator==(const OperatorSlot&, const OperatorSlot&) = default;
};

OperatorSlot afm_slot(std::size_t i, std::size_t j, double weight = 1.0);
OperatorSlot fm_slot(std::size_t k, std::size_t l, double weight = 1.0);
OperatorSlot vertex_slot(std::size_t m, double weight = 1.0);

/// `A:i-j`, `F:k-l` or `V:m`.
std::string to_string(const OperatorSlot& slot);

/// Ordered operator set of a model: AFM edges in input order, then FM edges,
/// then one vertex operator per site with a nonzero field.
class OperatorAlphabet {
 public:
  std::size_t n_sites() const { return n_sites_; }
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }
  const OperatorSlot& operator[](std::size_t index) const { return slots_[index]; }
  std::span<const OperatorSlot> slots() const { return slots_; }
  auto begin() const { return slots_.begin(); }
  auto end() const { return slots_.end(); }

  /// Index of the slot with the same operator, or size() when absent.
  std::size_t find(const OperatorSlot& slot) const;

  double min_weight() const;
  double max_weight() const;
  bool has_vertex_slots() const;

 private:
  friend OperatorAlphabet operator_alphabet(const BipartiteModel& model);
  std::size_t n_sites_ = 0;
  std::vector<OperatorSlot> slots_;
};

/// Loop weight T of a vertex operator for field strength g. Bridges enter -H
/// as (w/2)(I + S) and vertices as g(1 + X); scaling every slot by 2 makes the
/// bridge factor w, which leaves 2 g for the vertex.
inline double vertex_weight(double field) { return 2.0 * field; }

/// Throws InvalidModel for an invalid model and std::invalid_argument when the
/// model has no operators at all.
OperatorAlphabet operator_alphabet(const BipartiteModel& model);

/// Triangle-inequality bound sum w + sum v + 2 sum g >= ||H||.
double norm_bound(const BipartiteModel& model);

/// Smallest B with B >= (|H|/2 eps) (N + ln(1/delta) + N ln 2), using
/// `norm_bound` for |H| and the worst-case ground-state overlap 2^-N.
/// Never returns less than 1. Throws std::invalid_argument for eps <= 0 or
/// delta outside (0, 1).
std::size_t required_b(const BipartiteModel& model, double epsilon, double delta);

/// `required_b` with delta = eps / norm_bound (capped at 1/2).
std::size_t required_b(const BipartiteModel& model, double epsilon);

// JSON model files ---------------------------------------------------------

class ModelParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the model JSON document. Unknown keys, wrong types and malformed
/// edges raise ModelParseError with the offending field in the message.
BipartiteModel parse_model(std::string_view json_text);
BipartiteModel load_model(const std::string& path);

/// Canonical JSON text (sorted keys, original sublattice labels).
std::string model_to_json(const BipartiteModel& model);

}  // namespace spe
