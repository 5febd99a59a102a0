#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <string_view>
#include <vector>

#include "stresslab/errors.hpp"

namespace stresslab {

struct Bar {
  int i = 0;
  int j = 0;
  double stiffness = 1.0;  // axial rigidity: tension = stiffness * strain
  double length = 0.0;     // from node coordinates
};

struct PinnedDof {
  int node = 0;
  int axis = 0;
  double value = 0.0;  // prescribed displacement
};

struct DofLoad {
  int node = 0;
  int axis = 0;
  double value = 0.0;
};

/// A pin-jointed bar framework in R^n: the exact finite-dimensional analogue
/// of the elasticity problem. Pinned dofs play the role of the displacement
/// boundary, per-dof loads the role of the force data, and the bar tensions
/// are the stress variable with the energy inner product
/// <s, t> = sum_b (L_b / k_b) s_b t_b.
class BarFramework {
 public:
  BarFramework(Eigen::MatrixXd nodes, std::vector<Bar> bars,
               std::vector<PinnedDof> pins, std::vector<DofLoad> loads);

  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const std::vector<Bar>& bars() const { return bars_; }
  const std::vector<PinnedDof>& pins() const { return pins_; }
  const std::vector<DofLoad>& loads() const { return loads_; }

  int dim() const { return static_cast<int>(nodes_.cols()); }
  int num_nodes() const { return static_cast<int>(nodes_.rows()); }
  int num_bars() const { return static_cast<int>(bars_.size()); }
  int num_dofs() const { return dim() * num_nodes(); }
  int num_free() const { return static_cast<int>(free_dofs_.size()); }

  int dof(int node, int axis) const { return node * dim() + axis; }
  bool is_pinned(int d) const { return pinned_[d] != 0; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  int free_index(int d) const { return free_index_[d]; }

  /// Full nodal vector with prescribed values at pinned dofs, zero elsewhere.
  Eigen::VectorXd prescribed_full() const;
  /// Load vector restricted to the free dofs.
  Eigen::VectorXd load_free() const;
  /// True when a bar has at least one endpoint with a free dof; only such
  /// bars have a load path into the structure's statics.
  bool bar_is_active(int b) const;

 private:
  Eigen::MatrixXd nodes_;
  std::vector<Bar> bars_;
  std::vector<PinnedDof> pins_;
  std::vector<DofLoad> loads_;
  std::vector<char> pinned_;
  std::vector<double> prescribed_;
  std::vector<int> free_dofs_;
  std::vector<int> free_index_;
};

/// Compatibility matrix on all dofs: row b maps nodal displacements to the
/// axial strain of bar b, i.e. entries -d/L at endpoint i and +d/L at
/// endpoint j for the unit direction d.
Eigen::SparseMatrix<double> compatibility_matrix(const BarFramework& fw);

/// Equilibrium matrix: the adjoint of the stiffness-weighted compatibility
/// map with respect to the weighted bar-tension inner product and the
/// Euclidean dof inner product. In coordinates it is B^T diag(L) restricted
/// to the free-dof rows; it sends bar tensions to net nodal forces.
Eigen::SparseMatrix<double> equilibrium_matrix(const BarFramework& fw);

/// Basis of infinitesimal rigid motions a + Bx (B skew) sampled at the
/// nodes: dim translations followed by dim(dim-1)/2 rotations.
Eigen::MatrixXd rigid_motion_basis(const Eigen::MatrixXd& nodes, int dim);

struct Classification {
  int mechanisms = 0;
  int self_stresses = 0;
  int free_dof_count = 0;
  int active_bar_count = 0;

  /// Maxwell count: mechanisms - self_stresses = free dofs - active bars.
  bool maxwell_holds() const {
    return mechanisms - self_stresses == free_dof_count - active_bar_count;
  }
};

/// Rank-based rigidity classification via singular values with relative
/// threshold `rank_tol`. Bars joining two fully pinned nodes carry no load
/// path to the free dofs and are excluded from the self-stress count.
Classification classify(const BarFramework& fw, double rank_tol = 1e-9);

struct BarSolution {
  Eigen::VectorXd tensions;       // per bar
  Eigen::VectorXd displacements;  // per free dof
  Eigen::VectorXd u_full;         // all dofs, prescribed values included
  double equilibrium_residual = 0.0;
};

/// Solves the framework: tensions = P_V g + Q f with g the tension field
/// induced by the prescribed displacements and f the applied loads. Requires
/// a mechanism-free framework.
BarSolution solve_bar_stress(const BarFramework& fw, double rank_tol = 1e-9);

/// Parses the framework text format:
///   node x y
///   bar i j k        (k > 0: axial rigidity)
///   pin node axis [value]
///   load node axis value
///   # comment
/// Axes are 0/1 or x/y; indices 0-based.
BarFramework parse_framework(std::string_view text);

std::string emit_framework(const BarFramework& fw);

}  // namespace stresslab
