#include "doctest.h"

#include "ebc/mesh.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <utility>

using namespace ebc;

TEST_CASE("smallest grid counts") {
  const Mesh m = build_structured(2);
  CHECK(m.node_count() == 9);
  CHECK(m.triangle_count() == 8);
  CHECK(m.boundary_count() == 8);
  CHECK(m.interior_count() == 1);
}

TEST_CASE("n=16 counts match the closed formulas and enumeration") {
  const Mesh m = build_structured(16);
  CHECK(m.node_count() == 17 * 17);
  CHECK(m.triangle_count() == 2 * 16 * 16);
  std::set<int> seen;
  for (const auto& t : m.triangles) {
    for (int v : t) seen.insert(v);
  }
  CHECK(static_cast<int>(seen.size()) == m.node_count());
}

TEST_CASE("n_per_side below 2 rejected") {
  CHECK_THROWS(build_structured(1));
  CHECK_THROWS(build_structured(0));
}

TEST_CASE("triangles positively oriented, areas sum to 1") {
  for (int n : {2, 5, 16}) {
    const Mesh m = build_structured(n);
    double total = 0.0;
    for (int t = 0; t < m.triangle_count(); ++t) {
      const double a = triangle_area(m, t);
      CHECK(a > 0.0);
      total += a;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("boundary/interior partition is disjoint and exhaustive") {
  const Mesh m = build_structured(5);
  std::set<int> b(m.boundary_nodes.begin(), m.boundary_nodes.end());
  std::set<int> i(m.interior_nodes.begin(), m.interior_nodes.end());
  CHECK(static_cast<int>(b.size() + i.size()) == m.node_count());
  for (int v : b) CHECK(i.count(v) == 0);
}

TEST_CASE("boundary edges form a single closed loop") {
  const Mesh m = build_structured(4);
  const int nb = m.boundary_count();
  CHECK(static_cast<int>(m.boundary_edges.size()) == nb);
  for (int k = 0; k < nb; ++k) {
    CHECK(m.boundary_edges[k].a == m.boundary_nodes[k]);
    CHECK(m.boundary_edges[k].b == m.boundary_nodes[(k + 1) % nb]);
  }
}

TEST_CASE("each boundary edge belongs to one triangle, interior edges to two") {
  const Mesh m = build_structured(4);
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  std::set<std::pair<int, int>> boundary;
  for (const auto& e : m.boundary_edges) {
    int a = e.a, b = e.b;
    if (a > b) std::swap(a, b);
    boundary.insert({a, b});
  }
  for (const auto& [edge, count] : edge_count) {
    if (boundary.count(edge)) {
      CHECK(count == 1);
    } else {
      CHECK(count == 2);
    }
  }
}

TEST_CASE("locate at the center of the n=2 grid") {
  const Mesh m = build_structured(2);
  const PointLocation loc = locate(m, {0.5, 0.5});
  const int center = 4;  // middle vertex of the 3x3 grid
  const auto& tri = m.triangles[loc.triangle_index];
  CHECK((tri[0] == center || tri[1] == center || tri[2] == center));
  double sum = loc.barycentric[0] + loc.barycentric[1] + loc.barycentric[2];
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("locate agrees with an exhaustive containment scan") {
  const Mesh m = build_structured(16);
  const std::array<double, 2> p{0.3, 0.7};
  const PointLocation loc = locate(m, p);

  // brute force: lowest-index triangle containing the point
  int expected = -1;
  for (int t = 0; t < m.triangle_count() && expected < 0; ++t) {
    const auto& tri = m.triangles[t];
    const auto& p0 = m.vertices[tri[0]];
    const auto& p1 = m.vertices[tri[1]];
    const auto& p2 = m.vertices[tri[2]];
    const double two_a = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                         (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double b1 = ((p[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p[1] - p0[1])) / two_a;
    const double b2 = ((p1[0] - p0[0]) * (p[1] - p0[1]) -
                       (p[0] - p0[0]) * (p1[1] - p0[1])) / two_a;
    if (b1 >= -1e-13 && b2 >= -1e-13 && 1.0 - b1 - b2 >= -1e-13) expected = t;
  }
  CHECK(loc.triangle_index == expected);
}

TEST_CASE("boundary and exterior points rejected") {
  const Mesh m = build_structured(4);
  CHECK_THROWS(locate(m, {1.0, 0.5}));
  CHECK_THROWS(locate(m, {0.0, 0.0}));
  CHECK_THROWS(locate(m, {1.5, 0.5}));
}

TEST_CASE("barycentric interpolation reproduces the query point") {
  const Mesh m = build_structured(7);
  for (auto p : {std::array<double, 2>{0.111, 0.93}, {0.5, 0.5}, {0.25, 0.75},
                 {1.0 / 7.0, 0.4}}) {
    const PointLocation loc = locate(m, p);
    for (double b : loc.barycentric) {
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
    }
    const auto q = location_point(m, loc);
    CHECK(std::abs(q[0] - p[0]) < 1e-12);
    CHECK(std::abs(q[1] - p[1]) < 1e-12);
  }
}

TEST_CASE("lumped boundary mass sums to the perimeter") {
  const Mesh m = build_structured(6);
  const auto mass = boundary_lumped_mass(m);
  double total = 0.0;
  for (double v : mass) total += v;
  CHECK(std::abs(total - 4.0) < 1e-12);
}

TEST_CASE("identical parameters give identical meshes") {
  const Mesh a = build_structured(8);
  const Mesh b = build_structured(8);
  CHECK(a.vertices == b.vertices);
  CHECK(a.triangles == b.triangles);
  CHECK(a.boundary_nodes == b.boundary_nodes);
}
