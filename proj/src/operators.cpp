#include "stresslab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace stresslab {

Eigen::VectorXd StrainOperator::apply(const Eigen::VectorXd& u) const {
  if (u.size() != geometry.num_dofs) {
    throw DimensionMismatch("displacement vector has wrong length");
  }
  Eigen::VectorXd eps;
  kernels::element_strains(geometry, u, eps);
  return eps;
}

Eigen::VectorXd StrainOperator::expand(const Eigen::VectorXd& free_values) const {
  if (free_values.size() != num_free()) {
    throw DimensionMismatch("free-dof vector has wrong length");
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(geometry.num_dofs);
  for (int i = 0; i < num_free(); ++i) full[free_dofs[i]] = free_values[i];
  return full;
}

Eigen::VectorXd StrainOperator::restrict_free(const Eigen::VectorXd& full) const {
  if (full.size() != geometry.num_dofs) {
    throw DimensionMismatch("nodal vector has wrong length");
  }
  Eigen::VectorXd r(num_free());
  for (int i = 0; i < num_free(); ++i) r[i] = full[free_dofs[i]];
  return r;
}

Eigen::MatrixXd StrainOperator::dense_free_matrix() const {
  Eigen::MatrixXd dense(matrix.rows(), num_free());
  for (int i = 0; i < num_free(); ++i) {
    dense.col(i) = matrix.col(free_dofs[i]);
  }
  return dense;
}

namespace {

StrainOperator assemble_with_pins(const TriangleMesh& mesh,
                                  const std::vector<char>& pinned) {
  StrainOperator op;
  op.geometry = kernels::build_geometry(mesh);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(18 * mesh.num_triangles());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& B = op.geometry.strain_blocks[e];
    const auto& dofs = op.geometry.element_dofs[e];
    for (int r = 0; r < 3; ++r) {
      for (int l = 0; l < 6; ++l) {
        if (B(r, l) != 0.0) triplets.emplace_back(3 * e + r, dofs[l], B(r, l));
      }
    }
  }
  op.matrix.resize(3 * mesh.num_triangles(), 2 * mesh.num_vertices());
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());

  op.all_dofs.resize(2 * mesh.num_vertices());
  for (size_t d = 0; d < op.all_dofs.size(); ++d) op.all_dofs[d] = d;
  op.free_index.assign(2 * mesh.num_vertices(), -1);
  for (int d = 0; d < 2 * mesh.num_vertices(); ++d) {
    if (!pinned[d]) {
      op.free_index[d] = static_cast<int>(op.free_dofs.size());
      op.free_dofs.push_back(d);
    }
  }
  return op;
}

}  // namespace

StrainOperator assemble_strain(const TriangleMesh& mesh,
                               const BoundaryPartition& partition) {
  if (partition.labels.size() != mesh.boundary_edges().size()) {
    throw DimensionMismatch("partition labels do not match boundary edges");
  }
  std::vector<char> pinned(2 * mesh.num_vertices(), 0);
  for (size_t i = 0; i < mesh.boundary_edges().size(); ++i) {
    if (partition.labels[i] == EdgeLabel::Dirichlet) {
      const auto& e = mesh.boundary_edges()[i];
      pinned[2 * e.a] = pinned[2 * e.a + 1] = 1;
      pinned[2 * e.b] = pinned[2 * e.b + 1] = 1;
    }
  }
  return assemble_with_pins(mesh, pinned);
}

StrainOperator assemble_strain_all_pinned(const TriangleMesh& mesh) {
  std::vector<char> pinned(2 * mesh.num_vertices(), 0);
  for (const auto& e : mesh.boundary_edges()) {
    pinned[2 * e.a] = pinned[2 * e.a + 1] = 1;
    pinned[2 * e.b] = pinned[2 * e.b + 1] = 1;
  }
  return assemble_with_pins(mesh, pinned);
}

StrainOperator assemble_strain_unpinned(const TriangleMesh& mesh) {
  std::vector<char> pinned(2 * mesh.num_vertices(), 0);
  return assemble_with_pins(mesh, pinned);
}

StrainOperator assemble_strain_pinned_vertices(
    const TriangleMesh& mesh, const std::vector<int>& vertices) {
  std::vector<char> pinned(2 * mesh.num_vertices(), 0);
  for (int v : vertices) {
    if (v < 0 || v >= mesh.num_vertices()) {
      throw InputError("pinned vertex out of range");
    }
    pinned[2 * v] = pinned[2 * v + 1] = 1;
  }
  return assemble_with_pins(mesh, pinned);
}

void ProblemSpec::validate() const {
  const int nt = mesh.num_triangles();
  if (material.size() != 1 && static_cast<int>(material.size()) != nt) {
    throw DimensionMismatch("material field must have 1 or |T| entries");
  }
  for (const auto& c : material) {
    if (c.dim() != 2) throw DimensionMismatch("FEM path requires 2-D material");
  }
  if (u0.size() != 2 * mesh.num_vertices()) {
    throw DimensionMismatch("u0 must be defined on all vertices");
  }
  if (!u0.allFinite()) throw InputError("u0 has non-finite entries");
  if (!body_force.empty() && body_force.size() != 1 &&
      static_cast<int>(body_force.size()) != nt) {
    throw DimensionMismatch("body force must have 0, 1 or |T| entries");
  }
  for (const auto& f : body_force) {
    if (!f.allFinite()) throw InputError("body force has non-finite entries");
  }
  if (!traction.empty() &&
      traction.size() != mesh.boundary_edges().size()) {
    throw DimensionMismatch("traction must have one entry per boundary edge");
  }
  for (const auto& t : traction) {
    if (!t.allFinite()) throw InputError("traction has non-finite entries");
  }
}

StressSpace build_stress_space(const ProblemSpec& spec) {
  StressSpace space;
  space.areas = spec.mesh.areas();
  const int nt = spec.mesh.num_triangles();
  space.material.resize(nt);
  space.compliance.resize(nt);
  for (int e = 0; e < nt; ++e) {
    const auto& c = spec.material_of(e);
    space.material[e] = c.mandel();
    space.compliance[e] = c.compliance();
  }
  return space;
}

double weighted_ip(const StressSpace& space, const Eigen::VectorXd& s,
                   const Eigen::VectorXd& t) {
  if (s.size() != t.size() ||
      s.size() != 3 * static_cast<int>(space.compliance.size())) {
    throw DimensionMismatch("stress fields do not match element count");
  }
  return kernels::weighted_inner_product(space.areas, space.compliance, s, t);
}

double weighted_norm(const StressSpace& space, const Eigen::VectorXd& s) {
  return std::sqrt(std::max(0.0, weighted_ip(space, s, s)));
}

Eigen::VectorXd assemble_load_f(const ProblemSpec& spec,
                                const StrainOperator& strain_op) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * spec.mesh.num_vertices());

  // Body force: int F . phi_v dx = area/3 F per vertex for constant F.
  for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
    const Eigen::Vector2d F = spec.body_force_of(e);
    if (F.isZero(0.0)) continue;
    const double w = spec.mesh.area(e) / 3.0;
    for (int v : spec.mesh.triangles()[e]) {
      full[2 * v] += w * F.x();
      full[2 * v + 1] += w * F.y();
    }
  }

  // Traction: int_edge T . phi_v dS = length/2 T per endpoint for constant T.
  for (size_t i = 0; i < spec.mesh.boundary_edges().size(); ++i) {
    if (spec.partition.labels[i] != EdgeLabel::Traction) continue;
    const Eigen::Vector2d T = spec.traction_of(static_cast<int>(i));
    if (T.isZero(0.0)) continue;
    const auto& edge = spec.mesh.boundary_edges()[i];
    const double w = 0.5 * edge.length;
    for (int v : {edge.a, edge.b}) {
      full[2 * v] += w * T.x();
      full[2 * v + 1] += w * T.y();
    }
  }
  return strain_op.restrict_free(full);
}

Eigen::VectorXd assemble_shift_g(const ProblemSpec& spec,
                                 const StrainOperator& strain_op,
                                 const StressSpace& space) {
  const Eigen::VectorXd eps0 = strain_op.apply(spec.u0);
  Eigen::VectorXd g;
  kernels::apply_tensor_field(space.material, eps0, g);
  return g;
}

Eigen::VectorXd apply_divergence(const StressSpace& space,
                                 const StrainOperator& strain_op,
                                 const Eigen::VectorXd& sigma) {
  if (sigma.size() != 3 * strain_op.num_elements()) {
    throw DimensionMismatch("stress field does not match element count");
  }
  Eigen::VectorXd all;
  kernels::adjoint_forces(strain_op.geometry, sigma, all);
  return strain_op.restrict_free(all);
}

}  // namespace stresslab
