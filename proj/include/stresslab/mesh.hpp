#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stresslab/errors.hpp"

namespace stresslab {

/// A boundary edge (a, b) traversed counterclockwise along its owning
/// triangle, so the interior lies to its left and `normal` points outward.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int triangle = 0;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double length = 0.0;

  Eigen::Vector2d midpoint(const std::vector<Eigen::Vector2d>& vertices) const {
    return 0.5 * (vertices[a] + vertices[b]);
  }
};

/// A 2-D triangulation of a connected polygonal domain. Triangles are stored
/// counterclockwise; boundary edges are exactly the edges incident to a
/// single triangle.
class TriangleMesh {
 public:
  TriangleMesh() = default;  // empty; fill via from_data

  /// Validates orientation (optionally repairing it), manifoldness and
  /// connectivity, and extracts the boundary.
  static TriangleMesh from_data(std::vector<Eigen::Vector2d> vertices,
                                std::vector<std::array<int, 3>> triangles,
                                bool fix_orientation = false);

  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const {
    return boundary_edges_;
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  double area(int t) const { return areas_[t]; }
  const Eigen::VectorXd& areas() const { return areas_; }
  double total_area() const { return areas_.sum(); }
  Eigen::Vector2d centroid(int t) const;

 private:
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  Eigen::VectorXd areas_;
};

enum class EdgeLabel { Dirichlet, Traction };

/// Per-boundary-edge labels, parallel to mesh.boundary_edges().
struct BoundaryPartition {
  std::vector<EdgeLabel> labels;
};

enum class BCMode { DisplacementOnly, Mixed };

struct PartitionDiagnostics {
  double dirichlet_length = 0.0;
  double traction_length = 0.0;
  int dirichlet_edges = 0;
  int traction_edges = 0;
};

/// Uniform triangulation of [0,1]^2 with m subdivisions per side:
/// (m+1)^2 vertices, 2 m^2 right triangles, 4 m boundary edges.
TriangleMesh structured_unit_square(int m);

/// Labels each boundary edge by evaluating `rule` at its midpoint.
BoundaryPartition label_boundary(
    const TriangleMesh& mesh,
    const std::function<EdgeLabel(const Eigen::Vector2d&)>& rule);

BoundaryPartition all_dirichlet(const TriangleMesh& mesh);

/// Checks the partition against the requested boundary-condition mode.
/// The Dirichlet set must be nonempty in both modes; displacement-only
/// mode additionally forbids traction edges.
PartitionDiagnostics validate_partition(const TriangleMesh& mesh,
                                        const BoundaryPartition& partition,
                                        BCMode mode);

/// Parses the mesh text format:
///   v x y        vertex
///   t i j k      triangle (counterclockwise)
///   bd i j       Dirichlet boundary edge
///   bt i j       traction boundary edge
///   # ...        comment
/// Indices are 0-based. Every boundary edge must be labeled exactly once and
/// only boundary edges may be labeled.
std::pair<TriangleMesh, BoundaryPartition> parse_mesh(
    std::string_view text, bool fix_orientation = false);

/// Canonical serialization: vertices sorted lexicographically, triangle index
/// triples rotated to start at the smallest vertex and sorted, labeled edges
/// sorted. Re-parsing the output reproduces the mesh bit-identically.
std::string emit_mesh(const TriangleMesh& mesh,
                      const BoundaryPartition& partition);

}  // namespace stresslab
