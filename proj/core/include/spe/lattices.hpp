#pragma once

#include <cstddef>
#include <vector>

#include "spe/model.hpp"

// Model builders for the graphs used throughout the tests and tools.
namespace spe::lattices {

/// Site 0 is the centre (A); sites 1..n-1 are leaves (B). Edge k joins the
/// centre to leaf k+1.
BipartiteModel star(std::size_t n_sites, double weight = 1.0);

/// Star with the same field g on every site.
BipartiteModel star_with_fields(std::size_t n_sites, double field, double weight = 1.0);

/// Open chain 0-1-...-(n-1) with alternating sublattices, site 0 in A.
BipartiteModel path(std::size_t n_sites, double weight = 1.0);

/// Ring of even length; edge k joins k and (k+1) mod n. Even sites are A.
BipartiteModel cycle(std::size_t n_sites, double weight = 1.0);

/// Every A site coupled to every B site; sites 0..n_a-1 form A.
BipartiteModel complete_bipartite(std::size_t n_a, std::size_t n_b, double weight = 1.0);

/// Two centres (sites 0 and 1) each coupled to all n_leaves leaves.
BipartiteModel two_center(std::size_t n_leaves, double weight = 1.0);

}  // namespace spe::lattices
