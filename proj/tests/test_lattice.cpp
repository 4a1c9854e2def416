#include <doctest.h>

#include "aklt/errors.hpp"
#include "aklt/lattice.hpp"

#include <algorithm>
#include <set>
#include <sstream>

using namespace aklt;

namespace {

std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> edge_set(const LatticeGraph& g) {
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> out;
  for (const auto& e : g.edges()) out.insert({{e.a.x, e.a.y}, {e.b.x, e.b.y}});
  return out;
}

}  // namespace

TEST_CASE("chain sizes and degrees") {
  for (int n : {2, 3, 5, 20, 29}) {
    CAPTURE(n);
    const auto g = hexagonal_chain(n);
    CHECK(g.num_sites() == 4 * n);
    CHECK(g.edges().size() == static_cast<std::size_t>(5 * n));
    CHECK(g.vertical_period() == 2 * n);
    CHECK(g.count_class(EdgeClass::horizontal) == static_cast<std::size_t>(n));
    CHECK(g.count_class(EdgeClass::diag_up) == static_cast<std::size_t>(2 * n));
    CHECK(g.count_class(EdgeClass::diag_down) == static_cast<std::size_t>(2 * n));
    for (const auto& v : g.vertices()) CHECK(g.degree(v) == (v.y % 2 == 0 ? 3 : 2));
  }
  CHECK_THROWS_AS(hexagonal_chain(1), DomainError);
}

TEST_CASE("chain(2) adjacency") {
  const auto g = hexagonal_chain(2);
  const decltype(edge_set(g)) expected = {
      {{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}, {{0, 2}, {0, 3}}, {{0, 0}, {0, 3}},
      {{1, 0}, {1, 1}}, {{1, 1}, {1, 2}}, {{1, 2}, {1, 3}}, {{1, 0}, {1, 3}},
      {{0, 0}, {1, 0}}, {{0, 2}, {1, 2}},
  };
  CHECK(edge_set(g) == expected);
}

TEST_CASE("subsystem A") {
  const auto g = subsystem(SubsystemKind::A);
  CHECK(g.num_sites() == 14);
  CHECK(g.edges().size() == 15);
  const decltype(edge_set(g)) expected = {
      {{0, 1}, {0, 2}}, {{0, 2}, {0, 3}}, {{0, 3}, {0, 4}}, {{0, 4}, {0, 5}}, {{0, 5}, {0, 6}},
      {{0, 6}, {0, 7}}, {{1, 1}, {1, 2}}, {{1, 2}, {1, 3}}, {{1, 3}, {1, 4}}, {{1, 4}, {1, 5}},
      {{1, 5}, {1, 6}}, {{1, 6}, {1, 7}}, {{0, 2}, {1, 2}}, {{0, 4}, {1, 4}}, {{0, 6}, {1, 6}},
  };
  CHECK(edge_set(g) == expected);
  CHECK(g.count_class(EdgeClass::horizontal) == 3);
  CHECK(g.count_class(EdgeClass::diag_up) == 6);
  CHECK(g.count_class(EdgeClass::diag_down) == 6);
  for (const auto& e : g.edges()) {
    if (e.a == Vertex{0, 1}) CHECK(e.edge_class == EdgeClass::diag_down);
    if (e.a == Vertex{0, 2} && e.b == Vertex{0, 3}) CHECK(e.edge_class == EdgeClass::diag_up);
    if (e.a == Vertex{1, 1} && e.b == Vertex{1, 2}) CHECK(e.edge_class == EdgeClass::diag_up);
  }
}

TEST_CASE("subsystem B") {
  const auto g = subsystem(SubsystemKind::B);
  CHECK(g.num_sites() == 14);
  CHECK(g.edges().size() == 16);
  const decltype(edge_set(g)) expected = {
      {{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}, {{0, 2}, {0, 3}}, {{0, 3}, {0, 4}}, {{0, 4}, {0, 5}},
      {{0, 5}, {0, 6}}, {{1, 0}, {1, 1}}, {{1, 1}, {1, 2}}, {{1, 2}, {1, 3}}, {{1, 3}, {1, 4}},
      {{1, 4}, {1, 5}}, {{1, 5}, {1, 6}}, {{0, 0}, {1, 0}}, {{0, 2}, {1, 2}}, {{0, 4}, {1, 4}},
      {{0, 6}, {1, 6}},
  };
  CHECK(edge_set(g) == expected);
  CHECK(g.count_class(EdgeClass::horizontal) == 4);
}

TEST_CASE("subsystem C paths") {
  for (int K : {2, 3, 5, 12}) {
    const auto c = subsystem(SubsystemKind::C, K);
    const auto ct = subsystem(SubsystemKind::C_tilde, K);
    CHECK(c.num_sites() == K);
    CHECK(c.edges().size() == static_cast<std::size_t>(K - 1));
    for (const auto& v : c.vertices()) CHECK(v.x == 0);
    for (const auto& v : ct.vertices()) CHECK(v.x == 1);
    CHECK(c.vertices().front().y == 1);
    CHECK(c.vertices().back().y == K);
  }
  CHECK_THROWS_AS(subsystem(SubsystemKind::C), StructuralError);
  CHECK_THROWS_AS(subsystem(SubsystemKind::C, 1), DomainError);
}

TEST_CASE("hexagonal sun") {
  const auto g = subsystem(SubsystemKind::sun, std::nullopt, 1.4);
  CHECK(g.num_sites() == 12);
  CHECK(g.edges().size() == 12);
  CHECK(g.count_region(Region::inner) == 6);
  CHECK(g.count_region(Region::outer) == 6);
  for (const auto& e : g.edges())
    CHECK(e.weight == doctest::Approx(e.region == Region::inner ? 1.4 : 1.0));
  for (int k = 0; k < 6; ++k) {
    CHECK(g.degree({k, 0}) == 3);
    CHECK(g.degree({k, 1}) == 1);
  }
  CHECK_THROWS_AS(subsystem(SubsystemKind::sun, std::nullopt, 0.9), DomainError);
}

TEST_CASE("structural validation") {
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}, {0, 0}}, {}), StructuralError);
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}}, {Edge{{0, 0}, {0, 0}}}), StructuralError);
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}}, {Edge{{0, 0}, {0, 1}}}), StructuralError);
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}, {0, 1}}, {Edge{{0, 0}, {0, 1}}, Edge{{0, 1}, {0, 0}}}),
                  StructuralError);
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}, {0, 1}}, {Edge{{0, 0}, {0, 1}, -1.0}}), DomainError);
  CHECK_THROWS_AS(LatticeGraph("x", {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}},
                               {Edge{{0, 0}, {1, 0}}, Edge{{0, 0}, {2, 0}}, Edge{{0, 0}, {3, 0}},
                                Edge{{0, 0}, {4, 0}}}),
                  StructuralError);
  const auto g = hexagonal_chain(3);
  CHECK_THROWS_AS(g.site_index({2, 0}), StructuralError);
  CHECK_THROWS_AS(parse_subsystem("D"), StructuralError);
}

TEST_CASE("translated subsystems") {
  const int n = 20;
  for (int s = 0; s < 2 * n; s += 2) {
    CHECK(shift_subsystem(SubsystemKind::A, s, n).size() == 15);
    CHECK(shift_subsystem(SubsystemKind::B, s, n).size() == 16);
  }
  for (int s = 0; s < 2 * n; ++s) CHECK(shift_subsystem(SubsystemKind::C, s, n, 8).size() == 7);
  CHECK_THROWS_AS(shift_subsystem(SubsystemKind::A, 1, n), DomainError);
  CHECK_THROWS_AS(shift_subsystem(SubsystemKind::sun, 0, n), StructuralError);

  // A translated past the top wraps onto rows 0 and 1.
  const auto wrapped = shift_subsystem(SubsystemKind::A, 2 * n - 2, n);
  CHECK(std::binary_search(wrapped.begin(), wrapped.end(), make_key({0, 39}, {0, 0})));
  CHECK(std::binary_search(wrapped.begin(), wrapped.end(), make_key({0, 4}, {1, 4})));

  // Every translated edge is an edge of the chain.
  const auto chain = hexagonal_chain(n);
  std::set<EdgeKey> chain_keys;
  for (const auto& e : chain.edges()) chain_keys.insert(key_of(e));
  for (auto kind : {SubsystemKind::A, SubsystemKind::B})
    for (int s = 0; s < 2 * n; s += 2)
      for (const auto& k : shift_subsystem(kind, s, n)) CHECK(chain_keys.count(k) == 1);
  for (int s = 0; s < 2 * n; ++s)
    for (const auto& k : shift_subsystem(SubsystemKind::C_tilde, s, n, 10))
      CHECK(chain_keys.count(k) == 1);
}

TEST_CASE("edge pair classification") {
  const auto g = hexagonal_chain(4);
  auto find = [&](Vertex u, Vertex v) {
    const auto k = make_key(u, v);
    return *std::find_if(g.edges().begin(), g.edges().end(),
                         [&](const Edge& e) { return key_of(e) == k; });
  };
  const auto up = find({0, 2}, {0, 3});
  const auto down = find({0, 1}, {0, 2});
  const auto rung2 = find({0, 2}, {1, 2});
  CHECK(classify_edge_pair(up, up) == PairClass::identical);
  CHECK(classify_edge_pair(up, rung2) == PairClass::diag_horizontal);
  CHECK(classify_edge_pair(down, up) == PairClass::wedge_left);
  CHECK(classify_edge_pair(find({0, 3}, {0, 4}), up) == PairClass::wedge_right);
  CHECK(classify_edge_pair(find({1, 1}, {1, 2}), find({1, 2}, {1, 3})) == PairClass::wedge_right);
  CHECK(classify_edge_pair(up, find({1, 5}, {1, 6})) == PairClass::disjoint);

  // Column reflection exchanges the two wedge types.
  const auto r = reflect_columns(g);
  int left = 0, right = 0, left_r = 0, right_r = 0;
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    for (std::size_t j = i + 1; j < g.edges().size(); ++j) {
      const auto c = classify_edge_pair(g.edges()[i], g.edges()[j]);
      const auto cr = classify_edge_pair(r.edges()[i], r.edges()[j]);
      left += c == PairClass::wedge_left;
      right += c == PairClass::wedge_right;
      left_r += cr == PairClass::wedge_left;
      right_r += cr == PairClass::wedge_right;
      if (c == PairClass::wedge_left) CHECK(cr == PairClass::wedge_right);
    }
  CHECK(left == right);
  CHECK(left == left_r);
  CHECK(right == right_r);
}

TEST_CASE("reflection swaps diagonal classes") {
  const auto a = subsystem(SubsystemKind::A);
  const auto r = reflect_columns(a);
  CHECK(r.name() == "A~");
  CHECK(r.count_class(EdgeClass::diag_up) == a.count_class(EdgeClass::diag_down));
  CHECK(r.count_class(EdgeClass::horizontal) == 3);
  const auto rr = reflect_columns(r);
  CHECK(edge_set(rr) == edge_set(a));
  for (std::size_t i = 0; i < a.edges().size(); ++i)
    CHECK(rr.edges()[i].edge_class == a.edges()[i].edge_class);
  CHECK_THROWS_AS(reflect_columns(subsystem(SubsystemKind::sun)), StructuralError);
}

TEST_CASE("edge list export") {
  std::ostringstream out;
  write_edge_list(out, subsystem(SubsystemKind::C, 3));
  CHECK(out.str() == "# C(3): 3 sites, 2 edges\n0 1 0 2 1 diag_down\n0 2 0 3 1 diag_up\n");
}
