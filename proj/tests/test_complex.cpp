#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "sheaflab/complex.hpp"
#include "support/oracles.hpp"

using namespace sheaflab;

namespace {

SimplicialComplex path_complex(int n) {
  std::vector<std::vector<VertexId>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  if (edges.empty()) edges.push_back({0});
  return SimplicialComplex::from_maximal_faces(edges);
}

SimplicialComplex from_oracle_graph(const oracle::Graph& g) {
  std::vector<std::vector<VertexId>> maximal;
  std::set<int> covered;
  for (auto [u, w] : g.edges) {
    maximal.push_back({u, w});
    covered.insert(u);
    covered.insert(w);
  }
  for (int v = 0; v < g.n; ++v)
    if (!covered.count(v)) maximal.push_back({v});
  return SimplicialComplex::from_maximal_faces(maximal);
}

// Random small complex: a handful of random faces of dimension <= 3.
SimplicialComplex random_complex(std::mt19937& rng) {
  std::uniform_int_distribution<int> nfaces(1, 6), sz(1, 4), vid(0, 7);
  std::vector<std::vector<VertexId>> maximal;
  for (int i = nfaces(rng); i > 0; --i) {
    std::vector<VertexId> f;
    for (int j = sz(rng); j > 0; --j) f.push_back(vid(rng));
    maximal.push_back(f);
  }
  return SimplicialComplex::from_maximal_faces(maximal);
}

}  // namespace

TEST_CASE("faces canonicalize and validate") {
  CHECK(Face({2, 0, 1}).vertices() == std::vector<VertexId>{0, 1, 2});
  CHECK(Face({1, 0, 1}).vertices() == std::vector<VertexId>{0, 1});
  CHECK(Face{5}.dimension() == 0);
  CHECK(Face({0, 1, 2}).dimension() == 2);
  CHECK_THROWS_AS(Face(std::vector<VertexId>{}), InvalidFaceError);
}

TEST_CASE("from_maximal_faces generates the subset closure") {
  SECTION("one 2-simplex") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1, 2}});
    CHECK(x.face_count() == 7);
    CHECK(x.dimension() == 2);
    for (const Face& f :
         {Face{0}, Face{1}, Face{2}, Face{0, 1}, Face{0, 2}, Face{1, 2}, Face{0, 1, 2}})
      CHECK(x.has_face(f));
  }
  SECTION("hollow triangle has no 2-face") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1}, {1, 2}, {0, 2}});
    CHECK(x.face_count() == 6);
    CHECK(x.dimension() == 1);
    CHECK_FALSE(x.has_face(Face{0, 1, 2}));
  }
  SECTION("star with center 0") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1}, {0, 2}, {0, 3}});
    CHECK(x.faces(0).size() == 4);
    CHECK(x.faces(1).size() == 3);
    CHECK(x.degree(0) == 3);
    CHECK(x.degree(1) == 1);
  }
  SECTION("duplicate vertices in input are dropped") {
    auto x = SimplicialComplex::from_maximal_faces({{1, 0, 1}});
    CHECK(x.face_count() == 3);
    CHECK(x.has_face(Face{0, 1}));
  }
  SECTION("empty input face rejected") {
    CHECK_THROWS_AS(SimplicialComplex::from_maximal_faces({{}}), InvalidFaceError);
  }
  SECTION("random complexes are closed (validator agrees)") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      auto x = random_complex(rng);
      auto all = x.all_faces();
      CHECK(x.is_closed_subset(std::set<Face>(all.begin(), all.end())));
    }
  }
  SECTION("maximal faces regenerate the complex") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1, 2}, {2, 3}, {4}});
    const std::vector<Face> expected = {Face{4}, Face{2, 3}, Face{0, 1, 2}};
    CHECK(x.maximal_faces() == expected);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      auto y = random_complex(rng);
      std::vector<std::vector<VertexId>> lists;
      for (const Face& f : y.maximal_faces()) lists.push_back(f.vertices());
      CHECK(SimplicialComplex::from_maximal_faces(lists) == y);
    }
  }
}

TEST_CASE("from_faces rejects non-closed sets") {
  CHECK_THROWS_AS(SimplicialComplex::from_faces({Face{0, 1}}), NotClosedError);
  CHECK_NOTHROW(SimplicialComplex::from_faces({Face{0}, Face{1}, Face{0, 1}}));
}

TEST_CASE("attached is proper-subset attachment") {
  auto x = SimplicialComplex::from_maximal_faces({{0, 1}, {1, 2}});
  CHECK(x.attached(Face{0}, Face{0, 1}));
  CHECK_FALSE(x.attached(Face{0, 1}, Face{0, 1}));
  CHECK_FALSE(x.attached(Face{2}, Face{0, 1}));
  CHECK_FALSE(x.attached(Face{0, 1}, Face{0}));
  CHECK_THROWS_AS(x.attached(Face{5}, Face{0, 1}), UnknownFaceError);
  CHECK_THROWS_AS(x.attached(Face{0}, Face{0, 5}), UnknownFaceError);
}

TEST_CASE("orientation_index sign convention") {
  CHECK(orientation_index(Face{0, 1}, Face{1}) == 1);
  CHECK(orientation_index(Face{0, 1}, Face{0}) == -1);
  CHECK(orientation_index(Face{0, 1, 2}, Face{0, 2}) == -1);
  CHECK(orientation_index(Face{0, 1, 2}, Face{1, 2}) == 1);
  CHECK(orientation_index(Face{0, 1, 2}, Face{0, 1}) == 1);
  // zero in every non-codimension-1 case
  CHECK(orientation_index(Face{0, 1}, Face{0, 1}) == 0);
  CHECK(orientation_index(Face{0, 1, 2}, Face{0}) == 0);
  CHECK(orientation_index(Face{0, 1}, Face{2}) == 0);
  CHECK(orientation_index(Face{0}, Face{0, 1}) == 0);

  SECTION("agrees with the independently written incidence sign") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      auto x = random_complex(rng);
      for (const Face& b : x.all_faces())
        for (const Face& a : x.all_faces())
          CHECK(orientation_index(b, a) == oracle::incidence_sign(b.vertices(), a.vertices()));
    }
  }
  SECTION("orientation consistency: signed double boundary cancels") {
    // For |b| = |a| + 2, the two deletion orders pick up opposite signs.
    std::mt19937 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
      auto x = random_complex(rng);
      for (int k = 0; k + 2 <= x.dimension() + 1; ++k) {
        for (const Face& b : x.faces(k + 1)) {
          for (const Face& a : x.faces(k - 1 < 0 ? 0 : k - 1)) {
            if (a.dimension() != b.dimension() - 2 || !b.contains(a)) continue;
            int sum = 0;
            int intermediates = 0;
            for (const Face& c : x.faces(k)) {
              const int s = orientation_index(b, c) * orientation_index(c, a);
              if (s != 0) ++intermediates;
              sum += s;
            }
            CHECK(intermediates == 2);
            CHECK(sum == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("nerve of covers") {
  SECTION("pairwise and triple overlap gives the solid triangle") {
    Cover c;
    c.add("A", {1, 2, 3, 7});
    c.add("B", {3, 4, 5, 7});
    c.add("C", {5, 6, 1, 7});
    auto n = nerve(c);
    CHECK(n.dimension() == 2);
    CHECK(n.has_face(Face{0, 1, 2}));
    CHECK(n.face_count() == 7);
  }
  SECTION("pairwise overlaps only give the hollow triangle") {
    Cover c;
    c.add("A", {1, 2, 3});
    c.add("B", {3, 4, 5});
    c.add("C", {5, 6, 1});
    auto n = nerve(c);
    CHECK(n.dimension() == 1);
    CHECK_FALSE(n.has_face(Face{0, 1, 2}));
    CHECK(n.faces(1).size() == 3);
  }
  SECTION("disjoint sets give isolated vertices") {
    Cover c;
    c.add("A", {1});
    c.add("B", {2});
    auto n = nerve(c);
    CHECK(n.dimension() == 0);
    CHECK(n.face_count() == 2);
  }
  SECTION("cover invariants enforced") {
    Cover c;
    c.add("A", {1});
    CHECK_THROWS_AS(c.add("A", {2}), InvalidFaceError);
    CHECK_THROWS_AS(c.add("B", {}), InvalidFaceError);
  }
  SECTION("nerve dimension is bounded by set count minus one") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> nsets(1, 5), pt(0, 6), npts(1, 4);
    for (int trial = 0; trial < 40; ++trial) {
      Cover c;
      const int n = nsets(rng);
      for (int i = 0; i < n; ++i) {
        Cover::PointSet s;
        for (int j = npts(rng); j > 0; --j) s.insert(pt(rng));
        c.add("S" + std::to_string(i), s);
      }
      CHECK(nerve(c).dimension() <= n - 1);
    }
  }
}

TEST_CASE("skeleton keeps faces up to a dimension") {
  auto solid = SimplicialComplex::from_maximal_faces({{0, 1, 2}});
  CHECK(solid.skeleton(0).face_count() == 3);
  CHECK(solid.skeleton(0).dimension() == 0);
  auto sk1 = solid.skeleton(1);
  CHECK(sk1 == SimplicialComplex::from_maximal_faces({{0, 1}, {1, 2}, {0, 2}}));
  CHECK(solid.skeleton(5) == solid);
}

TEST_CASE("edge_distance") {
  auto p = path_complex(5);
  CHECK(p.edge_distance(2, 2) == 0);
  CHECK(p.edge_distance(1, 2) == 1);
  CHECK(p.edge_distance(0, 4) == 4);  // endpoints of a 4-edge path
  CHECK_THROWS_AS(p.edge_distance(0, 9), UnknownFaceError);

  SECTION("disconnected pairs give infinity") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1}, {2, 3}});
    CHECK_FALSE(x.edge_distance(0, 3).has_value());
  }
  SECTION("matches BFS oracle on random graphs, and is a metric") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 25; ++trial) {
      auto g = oracle::random_connected_graph(rng, 9);
      auto x = from_oracle_graph(g);
      for (int v = 0; v < g.n; ++v)
        for (int w = 0; w < g.n; ++w) {
          auto d = x.edge_distance(v, w);
          REQUIRE(d == oracle::bfs_distance(g, v, w));
          CHECK(d == x.edge_distance(w, v));             // symmetry
          CHECK((*d == 0) == (v == w));                  // identity
          for (int u = 0; u < g.n; ++u)                  // triangle inequality
            CHECK(*x.edge_distance(v, w) <= *x.edge_distance(v, u) + *x.edge_distance(u, w));
        }
    }
  }
}

TEST_CASE("max_edge_distance") {
  auto p3 = path_complex(3);
  CHECK(p3.max_edge_distance({0, 1, 2}) == 0);
  CHECK(p3.max_edge_distance({1}) == 1);
  CHECK(path_complex(5).max_edge_distance({0}) == 4);
  CHECK_FALSE(p3.max_edge_distance({}).has_value());  // no samples: infinite

  SECTION("unreachable vertices give infinity") {
    auto x = SimplicialComplex::from_maximal_faces({{0, 1}, {2, 3}});
    CHECK_FALSE(x.max_edge_distance({0}).has_value());
    CHECK(x.max_edge_distance({0, 2}) == 1);
  }
  SECTION("matches the BFS oracle on random graphs") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      auto g = oracle::random_connected_graph(rng, 10);
      auto x = from_oracle_graph(g);
      auto y = oracle::random_vertex_subset(rng, g.n);
      CHECK(x.max_edge_distance(std::set<VertexId>(y.begin(), y.end())) ==
            oracle::max_min_distance(g, y));
    }
  }
}
