#pragma once

#include <array>
#include <string>
#include <vector>

namespace ebc {

/// Location of a point inside the mesh: containing triangle plus
/// barycentric coordinates with respect to its three vertices.
struct PointLocation {
  int triangle_index = -1;
  std::array<double, 3> barycentric{};
};

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  double length = 0.0;
};

/// Conforming P1 triangulation of the unit square [0,1]^2.
///
/// Structured grid, two triangles per cell with a fixed diagonal
/// (lower-left to upper-right), so identical parameters always produce
/// bit-identical meshes. Immutable after construction.
struct Mesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<int> boundary_nodes;            // single closed loop, CCW from (0,0)
  std::vector<BoundaryEdge> boundary_edges;   // consecutive loop edges
  std::vector<int> interior_nodes;

  // node -> position in boundary_nodes / interior_nodes, -1 if not a member
  std::vector<int> boundary_position;
  std::vector<int> interior_position;

  int n_per_side = 0;

  int node_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int boundary_count() const { return static_cast<int>(boundary_nodes.size()); }
  int interior_count() const { return static_cast<int>(interior_nodes.size()); }
};

Mesh build_structured(int n_per_side);

double triangle_area(const Mesh& mesh, int triangle_index);

/// Gradients of the three P1 basis functions on a triangle (constant there).
std::array<std::array<double, 2>, 3> basis_gradients(const Mesh& mesh,
                                                     int triangle_index);

/// Locate a strictly interior point. Points on internal edges or vertices
/// resolve to the lowest-index containing triangle.
PointLocation locate(const Mesh& mesh, std::array<double, 2> point);

/// Cartesian coordinates reproduced from a PointLocation.
std::array<double, 2> location_point(const Mesh& mesh, const PointLocation& loc);

/// Lumped boundary mass per boundary node (half the adjacent edge lengths),
/// indexed in boundary-loop order.
std::vector<double> boundary_lumped_mass(const Mesh& mesh);

/// Arc-length parameter of each boundary node along the loop, starting at 0.
std::vector<double> boundary_loop_parameter(const Mesh& mesh);

/// Plain-text dump: vertex table then triangle table, one record per line.
std::string dump_mesh(const Mesh& mesh);

}  // namespace ebc
