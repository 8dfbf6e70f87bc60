#pragma once

#include <cstddef>
#include <vector>

#include "spe/configuration.hpp"
#include "spe/lattices.hpp"
#include "spe/model.hpp"
#include "spe/rng.hpp"

namespace spe::test {

inline Configuration random_configuration(const OperatorAlphabet& alphabet, std::size_t length, Rng& rng) {
  Configuration c(length);
  for (auto& s : c) s = alphabet[rng.index(alphabet.size())];
  return c;
}

/// The operator string of the 4-site path figure: (1,2),(1,2),(2,3),(3,4),(2,3)
/// in 1-based sites.
inline Configuration figure_path_config() {
  return {afm_slot(0, 1), afm_slot(0, 1), afm_slot(1, 2), afm_slot(2, 3), afm_slot(1, 2)};
}

inline BipartiteModel single_edge(double w = 1.0) { return BipartiteModel({Sublattice::A, Sublattice::B}, {{0, 1, w}}); }

inline BipartiteModel pair_with_fields(double g = 0.25) {
  return BipartiteModel({Sublattice::A, Sublattice::B}, {{0, 1, 1.0}}, {}, {g, g});
}

/// Star with an FM bond between the first two leaves.
inline BipartiteModel star_with_fm(std::size_t n, double v = 0.5) {
  const BipartiteModel s = lattices::star(n);
  std::vector<AfmEdge> afm(s.afm_edges().begin(), s.afm_edges().end());
  std::vector<Sublattice> sub(s.sublattices().begin(), s.sublattices().end());
  return BipartiteModel(sub, afm, {{1, 2, v}});
}

/// Star with FM bond and fields on every site.
inline BipartiteModel star_with_fm_and_fields(std::size_t n, double v = 0.5, double g = 0.3) {
  const BipartiteModel s = star_with_fm(n, v);
  std::vector<AfmEdge> afm(s.afm_edges().begin(), s.afm_edges().end());
  std::vector<FmEdge> fm(s.fm_edges().begin(), s.fm_edges().end());
  std::vector<Sublattice> sub(s.sublattices().begin(), s.sublattices().end());
  return BipartiteModel(sub, afm, fm, std::vector<double>(n, g));
}

/// Two centres with an FM bond between the centres.
inline BipartiteModel two_center_with_fm(std::size_t leaves, double v = 0.5) {
  const BipartiteModel s = lattices::two_center(leaves);
  std::vector<AfmEdge> afm(s.afm_edges().begin(), s.afm_edges().end());
  std::vector<Sublattice> sub(s.sublattices().begin(), s.sublattices().end());
  return BipartiteModel(sub, afm, {{0, 1, v}});
}

}  // namespace spe::test
