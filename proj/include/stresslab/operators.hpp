#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "stresslab/kernels.hpp"
#include "stresslab/mesh.hpp"
#include "stresslab/tensor.hpp"

namespace stresslab {

/// The discrete strain map E_h from nodal displacements to per-element
/// constant Mandel strains, together with the free-dof bookkeeping induced by
/// the Dirichlet part of the boundary. Dof 2v is the x-component at vertex v,
/// dof 2v+1 the y-component; a vertex touching any Dirichlet edge has both
/// components pinned.
struct StrainOperator {
  Eigen::SparseMatrix<double> matrix;  // 3|T| x 2|V|, all dofs
  std::vector<int> free_dofs;          // ascending dof ids off Gamma_D
  std::vector<int> all_dofs;           // 0 .. 2|V|-1
  std::vector<int> free_index;         // dof -> position in free_dofs, or -1
  kernels::ElementGeometry geometry;

  int num_free() const { return static_cast<int>(free_dofs.size()); }
  int num_elements() const { return geometry.num_elements(); }

  /// eps = E_h u for a full nodal vector (2|V| entries).
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

  /// Scatters a free-dof vector into a full nodal vector (zeros elsewhere).
  Eigen::VectorXd expand(const Eigen::VectorXd& free_values) const;
  /// Restricts a full nodal vector to the free dofs.
  Eigen::VectorXd restrict_free(const Eigen::VectorXd& full) const;

  /// Dense E_h restricted to the free dofs (verification-scale only).
  Eigen::MatrixXd dense_free_matrix() const;
};

/// The weighted inner-product structure on element-wise stresses:
/// <s, t> = sum_e area_e s_e : (C_e^-1 t_e).
struct StressSpace {
  Eigen::VectorXd areas;
  std::vector<Eigen::Matrix3d> material;    // C_e
  std::vector<Eigen::Matrix3d> compliance;  // C_e^-1
};

/// Given data of a 2-D elasticity problem: mesh and boundary partition,
/// per-element material, nodal Dirichlet datum u0, per-element constant body
/// force and per-traction-edge constant traction.
struct ProblemSpec {
  TriangleMesh mesh;
  BoundaryPartition partition;
  std::vector<ElasticityTensor> material;    // size 1 (uniform) or |T|
  Eigen::VectorXd u0;                        // 2|V|
  std::vector<Eigen::Vector2d> body_force;   // size 1 (uniform) or |T|
  std::vector<Eigen::Vector2d> traction;     // per boundary edge; D entries ignored
  BCMode mode = BCMode::Mixed;

  const ElasticityTensor& material_of(int element) const {
    return material.size() == 1 ? material[0] : material[element];
  }
  Eigen::Vector2d body_force_of(int element) const {
    if (body_force.empty()) return Eigen::Vector2d::Zero();
    return body_force.size() == 1 ? body_force[0] : body_force[element];
  }
  Eigen::Vector2d traction_of(int edge) const {
    if (traction.empty()) return Eigen::Vector2d::Zero();
    return traction[edge];
  }
  void validate() const;
};

StrainOperator assemble_strain(const TriangleMesh& mesh,
                               const BoundaryPartition& partition);

/// Variant pinning every boundary vertex (the discrete [W_0^{1,2}]^n space),
/// used by the Korn audits.
StrainOperator assemble_strain_all_pinned(const TriangleMesh& mesh);

/// Variant with no pinned dofs (kernel = rigid motions).
StrainOperator assemble_strain_unpinned(const TriangleMesh& mesh);

/// Variant with exactly the listed vertices pinned (both components).
StrainOperator assemble_strain_pinned_vertices(const TriangleMesh& mesh,
                                               const std::vector<int>& vertices);

StressSpace build_stress_space(const ProblemSpec& spec);

double weighted_ip(const StressSpace& space, const Eigen::VectorXd& s,
                   const Eigen::VectorXd& t);

double weighted_norm(const StressSpace& space, const Eigen::VectorXd& s);

/// Load functional on the free dofs:
/// f[dof] = int_Omega F . phi_dof dx + int_Gamma_T T . phi_dof dS,
/// assembled with exact quadrature for the piecewise-constant data.
Eigen::VectorXd assemble_load_f(const ProblemSpec& spec,
                                const StrainOperator& strain_op);

/// Shift stress g_e = C_e (E_h u0)_e, the parallel translation of the
/// kinematically admissible affine set.
Eigen::VectorXd assemble_shift_g(const ProblemSpec& spec,
                                 const StrainOperator& strain_op,
                                 const StressSpace& space);

/// Adjoint action on the free dofs: (result . u) = sum_e area_e s_e:(E_h u)_e
/// for every admissible u. The minus-divergence and traction blocks of the
/// continuous operator are merged per dof; the discrete Green identity holds
/// by construction.
Eigen::VectorXd apply_divergence(const StressSpace& space,
                                 const StrainOperator& strain_op,
                                 const Eigen::VectorXd& sigma);

}  // namespace stresslab
