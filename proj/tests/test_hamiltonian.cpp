#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spe/lattices.hpp"
#include "spe/model.hpp"
#include "spe/oracle.hpp"
#include "support.hpp"

using namespace spe;

namespace {

bool has_violation(const BipartiteModel& m, ViolationKind kind) {
  const auto v = validate(m);
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("validate accepts bipartite models") {
  CHECK(is_valid(lattices::star(4)));
  CHECK(is_valid(lattices::path(4)));
  CHECK(is_valid(lattices::cycle(6)));
  CHECK(is_valid(test::star_with_fm_and_fields(4)));
}

TEST_CASE("validate rejects the AFM triangle") {
  const BipartiteModel triangle({Sublattice::A, Sublattice::B, Sublattice::B}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  CHECK(has_violation(triangle, ViolationKind::AfmSameSublattice));
  CHECK(has_violation(triangle, ViolationKind::NotBipartite));
}

TEST_CASE("validate reports every kind of violation") {
  const BipartiteModel fm_cross({Sublattice::A, Sublattice::B}, {{0, 1, 1.0}}, {{0, 1, 1.0}});
  CHECK(has_violation(fm_cross, ViolationKind::FmCrossesPartition));
  const BipartiteModel bad_weight({Sublattice::A, Sublattice::B}, {{0, 1, 0.0}});
  CHECK(has_violation(bad_weight, ViolationKind::NonPositiveWeight));
  const BipartiteModel bad_field({Sublattice::A, Sublattice::B}, {{0, 1, 1.0}}, {}, {-0.1, 0.0});
  CHECK(has_violation(bad_field, ViolationKind::NegativeField));
  const BipartiteModel out_of_range({Sublattice::A, Sublattice::B}, {{0, 5, 1.0}});
  CHECK(has_violation(out_of_range, ViolationKind::SiteOutOfRange));
  const BipartiteModel self_loop({Sublattice::A, Sublattice::B}, {{0, 1, 1.0}}, {{1, 1, 1.0}});
  CHECK(has_violation(self_loop, ViolationKind::SelfLoop));
  CHECK_THROWS_AS(require_valid(bad_weight), InvalidModel);
}

TEST_CASE("construction relabels so that |A| <= |B|") {
  const BipartiteModel m({Sublattice::B, Sublattice::A, Sublattice::A}, {{0, 1, 1.0}, {0, 2, 1.0}});
  CHECK(m.sublattices_swapped());
  CHECK(m.size_a() == 1);
  CHECK(m.sublattice(0) == Sublattice::A);
  CHECK(m.original_sublattice(0) == Sublattice::B);
  CHECK(is_valid(m));
}

TEST_CASE("operator alphabet ordering and size") {
  CHECK(operator_alphabet(lattices::star(4)).size() == 3);
  CHECK(operator_alphabet(lattices::path(4)).size() == 3);

  const BipartiteModel star_field({Sublattice::A, Sublattice::B, Sublattice::B}, {{0, 1, 1.0}, {0, 2, 1.0}}, {},
                                  {0.5, 0.0, 0.0});
  const OperatorAlphabet a = operator_alphabet(star_field);
  REQUIRE(a.size() == 3);
  CHECK(a[0].kind == SlotKind::AfmBridge);
  CHECK(a[1].kind == SlotKind::AfmBridge);
  CHECK(a[2].kind == SlotKind::Vertex);
  CHECK(a[2].a == 0);
  CHECK(a[2].weight == doctest::Approx(vertex_weight(0.5)));

  const OperatorAlphabet f = operator_alphabet(test::star_with_fm_and_fields(3));
  REQUIRE(f.size() == 2 + 1 + 3);
  CHECK(f[2].kind == SlotKind::FmBridge);
  CHECK(f.find(vertex_slot(1)) == 4);
  CHECK(f.find(afm_slot(1, 2)) == f.size());

  const BipartiteModel empty({Sublattice::A, Sublattice::B}, {});
  CHECK_THROWS_AS(operator_alphabet(empty), std::invalid_argument);
}

TEST_CASE("norm bound examples") {
  CHECK(norm_bound(test::single_edge()) == doctest::Approx(1.0));
  CHECK(norm_bound(lattices::star(3)) == doctest::Approx(2.0));
  CHECK(norm_bound(test::pair_with_fields(0.25)) == doctest::Approx(2.0));
}

TEST_CASE("norm bound dominates the exact operator norm") {
  const BipartiteModel models[] = {test::single_edge(),       test::pair_with_fields(0.25), lattices::star(5),
                                   lattices::path(6),         lattices::cycle(6),           test::star_with_fm(5),
                                   test::star_with_fm_and_fields(4), lattices::complete_bipartite(2, 4)};
  for (const auto& m : models) CHECK(norm_bound(m) >= oracle::operator_norm(m) - 1e-12);
}

TEST_CASE("required B") {
  // Single edge, eps = 0.1, delta = 0.1: ceil(5 (2 + ln(10 * 2^2))) = 29.
  CHECK(required_b(test::single_edge(), 0.1, 0.1) == 29);
  CHECK(required_b(test::single_edge(), 0.1) == 29);
  CHECK(required_b(lattices::star(3), 2.0, 0.9) >= 1);
  CHECK_THROWS_AS(required_b(lattices::star(3), 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(required_b(lattices::star(3), 0.1, 1.0), std::invalid_argument);

  // Monotone: non-increasing in eps, non-decreasing in N.
  std::size_t previous = required_b(lattices::star(3), 0.01, 0.01);
  for (double eps : {0.02, 0.05, 0.1, 0.2, 0.5}) {
    const std::size_t b = required_b(lattices::star(3), eps, 0.01);
    CHECK(b <= previous);
    previous = b;
  }
  for (std::size_t n = 3; n < 8; ++n) CHECK(required_b(lattices::star(n), 0.05, 0.01) <= required_b(lattices::star(n + 1), 0.05, 0.01));
}

TEST_CASE("model JSON round trip and diagnostics") {
  const BipartiteModel m = test::star_with_fm_and_fields(3);
  const BipartiteModel back = parse_model(model_to_json(m));
  CHECK(model_to_json(back) == model_to_json(m));
  CHECK(back.n_sites() == 3);
  CHECK(back.fm_edges().size() == 1);

  CHECK_THROWS_WITH_AS(parse_model(R"({"n_sites": 2, "sublattice": ["A","B"], "colour": 1})"),
                       doctest::Contains("colour"), ModelParseError);
  CHECK_THROWS_WITH_AS(parse_model(R"({"n_sites": 2, "sublattice": ["A","C"]})"), doctest::Contains("sublattice[1]"),
                       ModelParseError);
  CHECK_THROWS_WITH_AS(parse_model(R"({"n_sites": 2, "sublattice": ["A","B"], "afm_edges": [[0, 1]]})"),
                       doctest::Contains("afm_edges[0]"), ModelParseError);
  CHECK_THROWS_WITH_AS(parse_model("{\"n_sites\": 2,\n \"sublattice\": [\"A\",}"), doctest::Contains("line 2"),
                       ModelParseError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ModelParseError);
}
