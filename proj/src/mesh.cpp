#include "ebc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ebc {

Mesh build_structured(int n_per_side) {
  if (n_per_side < 2) {
    throw std::invalid_argument("build_structured: n_per_side must be >= 2");
  }
  const int n = n_per_side;
  const int side = n + 1;
  const double h = 1.0 / n;

  Mesh mesh;
  mesh.n_per_side = n;
  mesh.vertices.reserve(side * side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      mesh.vertices.push_back({i * h, j * h});
    }
  }

  auto vid = [side](int i, int j) { return j * side + i; };

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v0 = vid(i, j);
      const int v1 = vid(i + 1, j);
      const int v2 = vid(i, j + 1);
      const int v3 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v0, v1, v3});  // below the diagonal
      mesh.triangles.push_back({v0, v3, v2});  // above the diagonal
    }
  }

  // boundary loop, counterclockwise from the origin
  for (int i = 0; i < n; ++i) mesh.boundary_nodes.push_back(vid(i, 0));
  for (int j = 0; j < n; ++j) mesh.boundary_nodes.push_back(vid(n, j));
  for (int i = n; i > 0; --i) mesh.boundary_nodes.push_back(vid(i, n));
  for (int j = n; j > 0; --j) mesh.boundary_nodes.push_back(vid(0, j));

  const int nb = static_cast<int>(mesh.boundary_nodes.size());
  for (int k = 0; k < nb; ++k) {
    const int a = mesh.boundary_nodes[k];
    const int b = mesh.boundary_nodes[(k + 1) % nb];
    mesh.boundary_edges.push_back({a, b, h});
  }

  mesh.boundary_position.assign(mesh.node_count(), -1);
  mesh.interior_position.assign(mesh.node_count(), -1);
  for (int k = 0; k < nb; ++k) mesh.boundary_position[mesh.boundary_nodes[k]] = k;
  for (int v = 0; v < mesh.node_count(); ++v) {
    if (mesh.boundary_position[v] < 0) {
      mesh.interior_position[v] = static_cast<int>(mesh.interior_nodes.size());
      mesh.interior_nodes.push_back(v);
    }
  }
  return mesh;
}

double triangle_area(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

std::array<std::array<double, 2>, 3> basis_gradients(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  const double two_a = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
  // grad(phi_i) = perp of the opposite edge / (2A)
  return {{{(p1[1] - p2[1]) / two_a, (p2[0] - p1[0]) / two_a},
           {(p2[1] - p0[1]) / two_a, (p0[0] - p2[0]) / two_a},
           {(p0[1] - p1[1]) / two_a, (p1[0] - p0[0]) / two_a}}};
}

namespace {

bool barycentric_in(const Mesh& mesh, int t, std::array<double, 2> p,
                    std::array<double, 3>& bary) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  const double two_a = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const double b1 = ((p[0] - p0[0]) * (p2[1] - p0[1]) -
                     (p2[0] - p0[0]) * (p[1] - p0[1])) / two_a;
  const double b2 = ((p1[0] - p0[0]) * (p[1] - p0[1]) -
                     (p[0] - p0[0]) * (p1[1] - p0[1])) / two_a;
  const double b0 = 1.0 - b1 - b2;
  const double eps = 1e-13;
  if (b0 < -eps || b1 < -eps || b2 < -eps) return false;
  bary = {std::clamp(b0, 0.0, 1.0), std::clamp(b1, 0.0, 1.0),
          std::clamp(b2, 0.0, 1.0)};
  return true;
}

}  // namespace

PointLocation locate(const Mesh& mesh, std::array<double, 2> p) {
  if (!(p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0)) {
    throw std::invalid_argument(
        "locate: point must be strictly inside the unit square");
  }
  const int n = mesh.n_per_side;
  int ci = std::min(static_cast<int>(p[0] * n), n - 1);
  int cj = std::min(static_cast<int>(p[1] * n), n - 1);

  // Scan the cell and its lower-index neighbours so edge/vertex hits
  // resolve to the lowest-index containing triangle.
  PointLocation loc;
  for (int j = std::max(0, cj - 1); j <= cj; ++j) {
    for (int i = std::max(0, ci - 1); i <= ci; ++i) {
      for (int t = 0; t < 2; ++t) {
        const int idx = 2 * (j * n + i) + t;
        std::array<double, 3> bary;
        if (barycentric_in(mesh, idx, p, bary)) {
          loc.triangle_index = idx;
          loc.barycentric = bary;
          return loc;
        }
      }
    }
  }
  throw std::runtime_error("locate: containment scan failed");
}

std::array<double, 2> location_point(const Mesh& mesh, const PointLocation& loc) {
  const auto& tri = mesh.triangles[loc.triangle_index];
  std::array<double, 2> p{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    p[0] += loc.barycentric[k] * mesh.vertices[tri[k]][0];
    p[1] += loc.barycentric[k] * mesh.vertices[tri[k]][1];
  }
  return p;
}

std::vector<double> boundary_lumped_mass(const Mesh& mesh) {
  const int nb = mesh.boundary_count();
  std::vector<double> m(nb, 0.0);
  for (int k = 0; k < nb; ++k) {
    const auto& e = mesh.boundary_edges[k];
    m[mesh.boundary_position[e.a]] += 0.5 * e.length;
    m[mesh.boundary_position[e.b]] += 0.5 * e.length;
  }
  return m;
}

std::vector<double> boundary_loop_parameter(const Mesh& mesh) {
  const int nb = mesh.boundary_count();
  std::vector<double> t(nb, 0.0);
  for (int k = 1; k < nb; ++k) {
    t[k] = t[k - 1] + mesh.boundary_edges[k - 1].length;
  }
  return t;
}

std::string dump_mesh(const Mesh& mesh) {
  std::ostringstream os;
  os << "# vertices " << mesh.node_count() << "\n";
  os << "# id x y boundary_position\n";
  for (int v = 0; v < mesh.node_count(); ++v) {
    os << v << " " << mesh.vertices[v][0] << " " << mesh.vertices[v][1] << " "
       << mesh.boundary_position[v] << "\n";
  }
  os << "# triangles " << mesh.triangle_count() << "\n";
  os << "# id v0 v1 v2\n";
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << t << " " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  return os.str();
}

}  // namespace ebc
