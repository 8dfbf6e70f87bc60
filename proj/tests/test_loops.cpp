#include <doctest.h>

#include <cmath>
#include <cstddef>

#include "spe/configuration.hpp"
#include "spe/lattices.hpp"
#include "spe/loops.hpp"
#include "spe/oracle.hpp"
#include "support.hpp"

using namespace spe;

TEST_CASE("figure configuration on the 4-site path has 5 loops") {
  const BipartiteModel path = lattices::path(4);
  const Configuration x = test::figure_path_config();
  CHECK(loop_count(4, x) == 5);
  CHECK(decompose(path, x).loop_count() == 5);
  const LogWeight w = log_weight(path, x);
  CHECK(w.loop_count == 5);
  CHECK(w.log_weight == doctest::Approx(5.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(oracle::consistent_count(path, x) == 32);
}

TEST_CASE("empty sequence: N open strands") {
  const BipartiteModel star = lattices::star(4);
  const LoopDecomposition d = decompose(star, {});
  CHECK(d.loop_count() == 4);
  for (const auto& loop : d.loops) {
    CHECK(loop.kind == LoopKind::OpenBoundary);
    REQUIRE(loop.terminals.size() == 2);
    CHECK(loop.terminals[0].kind == TerminalKind::LeftBoundary);
    CHECK(loop.terminals[1].kind == TerminalKind::RightBoundary);
  }
  CHECK(crossing_count(d, 0) == 4);
  CHECK(log_weight(star, {}).log_weight == doctest::Approx(4.0 * std::log(2.0)));
}

TEST_CASE("repeated bridge on the star closes one loop") {
  const BipartiteModel star = lattices::star(3);
  const Configuration x = {afm_slot(0, 1), afm_slot(0, 1)};
  const LoopDecomposition d = decompose(star, x);
  CHECK(d.loop_count() == 4);
  CHECK(oracle::consistent_count(star, x) == 16);
  std::size_t closed = 0;
  for (const auto& loop : d.loops) closed += loop.kind == LoopKind::Closed;
  CHECK(closed == 1);
  // Between the two bridges the cut crosses the closed loop and the untouched leaf.
  CHECK(crossing_count(d, 1) == 2);
  CHECK(crossing_count(d, 0) == 2);
  CHECK(crossing_count(d, 2) == 2);
}

TEST_CASE("log weight includes the slot weights") {
  const BipartiteModel star({Sublattice::A, Sublattice::B, Sublattice::B}, {{0, 1, 1.0}, {0, 2, 3.0}});
  const OperatorAlphabet a = operator_alphabet(star);
  const Configuration x = {a[0], a[1]};
  const std::size_t L = loop_count(3, x);
  CHECK(std::pow(2.0, static_cast<double>(L)) == static_cast<double>(oracle::consistent_count(star, x)));
  CHECK(log_weight(star, x).log_weight == doctest::Approx(static_cast<double>(L) * std::log(2.0) + std::log(3.0)));
  CHECK_THROWS_AS(log_weight(star, x, 0.0), std::invalid_argument);
}

TEST_CASE("weight ratio") {
  const BipartiteModel path = lattices::path(4);
  const Configuration x = test::figure_path_config();
  CHECK(weight_ratio(path, x, 1, x[1]) == 1.0);

  const Configuration pair = {afm_slot(0, 1), afm_slot(0, 1)};
  CHECK(weight_ratio(test::single_edge(), pair, 0, afm_slot(0, 1)) == 1.0);

  Configuration replaced = x;
  replaced[2] = afm_slot(0, 1);
  const double expected = std::pow(2.0, static_cast<double>(loop_count(4, replaced)) - static_cast<double>(loop_count(4, x)));
  CHECK(weight_ratio(path, x, 2, afm_slot(0, 1)) == expected);
}

TEST_CASE("insert") {
  const Configuration empty;
  CHECK(insert(empty, 0, afm_slot(0, 1)).size() == 1);
  const Configuration x = {afm_slot(0, 1), afm_slot(0, 1)};
  const Configuration y = insert(x, 1, afm_slot(0, 1));
  CHECK(x.size() == 2);
  CHECK(y.size() == 3);
  CHECK(loop_count(3, y) == loop_count(3, x) + 1);
  CHECK_THROWS_AS(insert(x, 3, afm_slot(0, 1)), std::out_of_range);
}

TEST_CASE("vertex insertion changes L by 0 or 1") {
  // Closed loop between two equal bridges; the open strand of site 0 before them.
  const Configuration x = {afm_slot(0, 1), afm_slot(0, 1)};
  CHECK(loop_count(2, insert(x, 1, vertex_slot(0))) == loop_count(2, x));
  CHECK(loop_count(2, insert(x, 0, vertex_slot(0))) == loop_count(2, x) + 1);

  Rng rng(11);
  const BipartiteModel m = test::star_with_fm_and_fields(4);
  const OperatorAlphabet a = operator_alphabet(m);
  for (int trial = 0; trial < 500; ++trial) {
    const Configuration c = test::random_configuration(a, 1 + rng.index(6), rng);
    const std::size_t pos = rng.index(c.size() + 1);
    const std::size_t site = rng.index(4);
    const LoopDecomposition d = decompose(m, c);
    const std::size_t cut = pos;
    const Loop& host = d.loop(d.segment_loop[d.segment_at(site, cut)]);
    const std::size_t before = d.loop_count();
    const std::size_t after = loop_count(4, insert(c, pos, vertex_slot(site)));
    if (host.kind == LoopKind::Closed) {
      CHECK(after == before);
    } else {
      CHECK(after == before + 1);
    }
  }
}

TEST_CASE("segment bookkeeping") {
  Rng rng(5);
  const BipartiteModel m = test::star_with_fm_and_fields(5);
  const OperatorAlphabet a = operator_alphabet(m);
  for (int trial = 0; trial < 200; ++trial) {
    const Configuration c = test::random_configuration(a, rng.index(9), rng);
    const LoopDecomposition d = decompose(m, c);
    CHECK(d.segment_loop.size() == d.segments.size());
    CHECK(d == decompose(m, c));
    CHECK(LoopCounter(5).count(c) == d.loop_count());
    std::size_t terminals = 0;
    for (const auto& loop : d.loops) {
      CHECK(loop.terminals.size() == (loop.kind == LoopKind::Closed ? 0u : 2u));
      terminals += loop.terminals.size();
      CHECK(d.segment_loop[loop.label] == loop.label);
    }
    std::size_t vertices = 0;
    for (const auto& s : c) vertices += s.kind == SlotKind::Vertex;
    CHECK(terminals == 2 * 5 + 2 * vertices);
    for (std::size_t cut = 0; cut <= c.size(); ++cut) CHECK(crossing_count(d, cut) >= 1);
  }
}

TEST_CASE("removing a slot changes L by at most one, replacing it by at most two") {
  Rng rng(8);
  for (const BipartiteModel& m : {lattices::star(5), lattices::two_center(3), lattices::path(6)}) {
    const OperatorAlphabet a = operator_alphabet(m);
    for (int trial = 0; trial < 300; ++trial) {
      const Configuration c = test::random_configuration(a, 2 + rng.index(7), rng);
      const std::size_t k = rng.index(c.size());
      Configuration removed = c;
      removed.erase(removed.begin() + static_cast<std::ptrdiff_t>(k));
      const auto L = static_cast<long>(loop_count(m.n_sites(), c));
      CHECK(std::abs(static_cast<long>(loop_count(m.n_sites(), removed)) - L) <= 1);
      const double r = weight_ratio(m, c, k, a[rng.index(a.size())]);
      CHECK(r >= 0.25);
      CHECK(r <= 4.0);
    }
  }
}

TEST_CASE("serialization") {
  const BipartiteModel m = test::star_with_fm_and_fields(3);
  const OperatorAlphabet a = operator_alphabet(m);
  const Configuration c = {a[0], a[2], a[3], a[1]};
  const std::string text = serialize(c);
  CHECK(text == "A:0-1 F:1-2 V:0 A:0-2");
  CHECK(parse_configuration(text, a) == c);
  CHECK(in_alphabet(c, a));
  CHECK_THROWS_AS(parse_configuration("Q:1", a), std::invalid_argument);
  CHECK_THROWS_AS(parse_configuration("A:0-9", a), std::invalid_argument);
  CHECK_THROWS_AS(decompose(2, {afm_slot(0, 4)}), std::out_of_range);
}
