#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "stresslab/mesh.hpp"

namespace stresslab::kernels {

/// Per-element geometry of the P1 strain map. `strain_blocks[e]` takes the
/// six nodal displacement components of element e to its constant Mandel
/// strain. `dof_incidence[d]` lists the (element, local slot) pairs touching
/// global dof d in ascending element order, which fixes the accumulation
/// order of every gather and keeps results independent of the thread count.
struct ElementGeometry {
  std::vector<Eigen::Matrix<double, 3, 6>> strain_blocks;
  std::vector<std::array<int, 6>> element_dofs;
  std::vector<std::vector<std::pair<int, int>>> dof_incidence;
  Eigen::VectorXd areas;
  int num_dofs = 0;

  int num_elements() const { return static_cast<int>(strain_blocks.size()); }
};

ElementGeometry build_geometry(const TriangleMesh& mesh);

/// eps = E_h u: per-element constant Mandel strain of the P1 interpolant.
/// `u` has 2 |V| entries, `eps` 3 |T|.
void element_strains(const ElementGeometry& geom, const Eigen::VectorXd& u,
                     Eigen::VectorXd& eps);

/// out_e = M_e in_e for a per-element field of 3x3 Mandel maps (material or
/// compliance application).
void apply_tensor_field(const std::vector<Eigen::Matrix3d>& maps,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out);

/// Weighted stress inner product  sum_e area_e s_e : (Cinv_e t_e).
/// Per-element terms are computed in parallel and folded serially in element
/// order, so the value is identical to the serial reference bit for bit.
double weighted_inner_product(const Eigen::VectorXd& areas,
                              const std::vector<Eigen::Matrix3d>& compliance,
                              const Eigen::VectorXd& s,
                              const Eigen::VectorXd& t);

/// Plain L2 inner product of element-wise Mandel fields,
/// sum_e area_e s_e : t_e.
double l2_inner_product(const Eigen::VectorXd& areas, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& t);

/// r = E_h^T diag(area) sigma on all dofs: the discrete adjoint pairing
/// r . u = sum_e area_e sigma_e : (E_h u)_e. Parallel over dofs through the
/// incidence lists.
void adjoint_forces(const ElementGeometry& geom, const Eigen::VectorXd& sigma,
                    Eigen::VectorXd& r);

/// Per-element stiffness blocks k_e = area_e B_e^T C_e B_e.
void element_stiffness(const ElementGeometry& geom,
                       const std::vector<Eigen::Matrix3d>& material,
                       std::vector<Eigen::Matrix<double, 6, 6>>& blocks);

/// Squared L2 norm of the pointwise gradient of the P1 field u
/// (per-element constant 2x2 gradients).
double gradient_norm_sq(const ElementGeometry& geom,
                        const std::vector<Eigen::Matrix<double, 2, 6>>&
                            gradient_blocks,
                        const Eigen::VectorXd& u);

std::vector<Eigen::Matrix<double, 2, 6>> build_gradient_blocks(
    const TriangleMesh& mesh);

/// Serial reference implementations, kept for correctness tests and the
/// kernel benchmark.
namespace serial {

void element_strains(const ElementGeometry& geom, const Eigen::VectorXd& u,
                     Eigen::VectorXd& eps);
void apply_tensor_field(const std::vector<Eigen::Matrix3d>& maps,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out);
double weighted_inner_product(const Eigen::VectorXd& areas,
                              const std::vector<Eigen::Matrix3d>& compliance,
                              const Eigen::VectorXd& s,
                              const Eigen::VectorXd& t);
double l2_inner_product(const Eigen::VectorXd& areas, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& t);
void adjoint_forces(const ElementGeometry& geom, const Eigen::VectorXd& sigma,
                    Eigen::VectorXd& r);
void element_stiffness(const ElementGeometry& geom,
                       const std::vector<Eigen::Matrix3d>& material,
                       std::vector<Eigen::Matrix<double, 6, 6>>& blocks);

}  // namespace serial

}  // namespace stresslab::kernels
