#include "spe/lattices.hpp"

#include <stdexcept>

namespace spe::lattices {

BipartiteModel star(std::size_t n_sites, double weight) {
  if (n_sites < 2) throw std::invalid_argument("star: need at least 2 sites");
  std::vector<Sublattice> labels(n_sites, Sublattice::B);
  labels[0] = Sublattice::A;
  std::vector<AfmEdge> edges;
  for (std::size_t leaf = 1; leaf < n_sites; ++leaf) edges.push_back({0, leaf, weight});
  return BipartiteModel(std::move(labels), std::move(edges));
}

BipartiteModel star_with_fields(std::size_t n_sites, double field, double weight) {
  const BipartiteModel base = star(n_sites, weight);
  return BipartiteModel({base.sublattices().begin(), base.sublattices().end()},
                        {base.afm_edges().begin(), base.afm_edges().end()}, {},
                        std::vector<double>(n_sites, field));
}

BipartiteModel path(std::size_t n_sites, double weight) {
  if (n_sites < 2) throw std::invalid_argument("path: need at least 2 sites");
  std::vector<Sublattice> labels(n_sites);
  std::vector<AfmEdge> edges;
  for (std::size_t i = 0; i < n_sites; ++i) labels[i] = (i % 2 == 0) ? Sublattice::A : Sublattice::B;
  for (std::size_t i = 0; i + 1 < n_sites; ++i) edges.push_back({i, i + 1, weight});
  return BipartiteModel(std::move(labels), std::move(edges));
}

BipartiteModel cycle(std::size_t n_sites, double weight) {
  if (n_sites < 4 || n_sites % 2 != 0) throw std::invalid_argument("cycle: need an even number of sites >= 4");
  std::vector<Sublattice> labels(n_sites);
  std::vector<AfmEdge> edges;
  for (std::size_t i = 0; i < n_sites; ++i) {
    labels[i] = (i % 2 == 0) ? Sublattice::A : Sublattice::B;
    edges.push_back({i, (i + 1) % n_sites, weight});
  }
  return BipartiteModel(std::move(labels), std::move(edges));
}

BipartiteModel complete_bipartite(std::size_t n_a, std::size_t n_b, double weight) {
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("complete_bipartite: both sides must be non-empty");
  std::vector<Sublattice> labels(n_a + n_b, Sublattice::B);
  std::vector<AfmEdge> edges;
  for (std::size_t a = 0; a < n_a; ++a) {
    labels[a] = Sublattice::A;
    for (std::size_t b = 0; b < n_b; ++b) edges.push_back({a, n_a + b, weight});
  }
  return BipartiteModel(std::move(labels), std::move(edges));
}

BipartiteModel two_center(std::size_t n_leaves, double weight) {
  return complete_bipartite(2, n_leaves, weight);
}

}  // namespace spe::lattices
