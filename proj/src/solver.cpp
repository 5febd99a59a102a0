#include "stresslab/solver.hpp"

#include <cmath>
#include <vector>

namespace stresslab {

StiffnessSystem::StiffnessSystem(const StrainOperator& strain_op,
                                 const StressSpace& space) {
  const int nf = strain_op.num_free();
  if (nf == 0) {
    // Fully constrained problem: the admissible set is a single point and
    // every solve is the empty solve.
    K_.resize(0, 0);
    return;
  }
  std::vector<Eigen::Matrix<double, 6, 6>> blocks;
  kernels::element_stiffness(strain_op.geometry, space.material, blocks);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * blocks.size());
  for (int e = 0; e < static_cast<int>(blocks.size()); ++e) {
    const auto& dofs = strain_op.geometry.element_dofs[e];
    for (int a = 0; a < 6; ++a) {
      const int ia = strain_op.free_index[dofs[a]];
      if (ia < 0) continue;
      for (int b = 0; b < 6; ++b) {
        const int ib = strain_op.free_index[dofs[b]];
        if (ib < 0) continue;
        triplets.emplace_back(ia, ib, blocks[e](a, b));
      }
    }
  }
  K_.resize(nf, nf);
  K_.setFromTriplets(triplets.begin(), triplets.end());

  ldlt_.compute(K_);
  if (ldlt_.info() != Eigen::Success) {
    throw SingularStiffness("stiffness factorization failed");
  }
  const Eigen::VectorXd d = ldlt_.vectorD();
  const double dmax = d.maxCoeff();
  if (!(d.minCoeff() > 0.0) || !(dmax > 0.0) ||
      d.minCoeff() < 1e-14 * dmax) {
    throw SingularStiffness(
        "stiffness matrix is not positive definite: a mechanism survives or "
        "the Dirichlet set is empty");
  }
}

Eigen::VectorXd StiffnessSystem::solve(const Eigen::VectorXd& rhs) const {
  if (K_.rows() == 0) {
    if (rhs.size() != 0) {
      throw DimensionMismatch("nonempty right-hand side on an empty system");
    }
    return Eigen::VectorXd();
  }
  Eigen::VectorXd x = ldlt_.solve(rhs);
  const double scale = 1.0 + rhs.norm();
  int it = 0;
  while (it < 3) {
    const Eigen::VectorXd r = rhs - K_ * x;
    if (r.norm() <= 1e-12 * scale) break;
    x += ldlt_.solve(r);
    ++it;
  }
  refinement_iterations_ = it;
  if (!x.allFinite()) {
    throw SolveFailure("stiffness solve produced non-finite values");
  }
  return x;
}

Eigen::VectorXd lift_q(const StiffnessSystem& system,
                       const StrainOperator& strain_op,
                       const StressSpace& space, const Eigen::VectorXd& f) {
  const Eigen::VectorXd w = system.solve(f);
  const Eigen::VectorXd eps = strain_op.apply(strain_op.expand(w));
  Eigen::VectorXd q;
  kernels::apply_tensor_field(space.material, eps, q);
  return q;
}

Eigen::VectorXd project_v(const StiffnessSystem& system,
                          const StrainOperator& strain_op,
                          const StressSpace& space, const Eigen::VectorXd& g) {
  const Eigen::VectorXd rhs = apply_divergence(space, strain_op, g);
  const Eigen::VectorXd w = system.solve(rhs);
  const Eigen::VectorXd eps = strain_op.apply(strain_op.expand(w));
  Eigen::VectorXd cg;
  kernels::apply_tensor_field(space.material, eps, cg);
  return g - cg;
}

namespace {

StressSolution solve_impl(const ProblemSpec& spec, BCMode mode) {
  spec.validate();
  validate_partition(spec.mesh, spec.partition, mode);

  const StrainOperator strain_op = assemble_strain(spec.mesh, spec.partition);
  const StressSpace space = build_stress_space(spec);
  const StiffnessSystem system(strain_op, space);

  const Eigen::VectorXd g = assemble_shift_g(spec, strain_op, space);
  const Eigen::VectorXd f = assemble_load_f(spec, strain_op);

  StressSolution sol;
  sol.sigma = project_v(system, strain_op, space, g) +
              lift_q(system, strain_op, space, f);

  // Displacement recovery: u = u0 + w with K w = f - (adjoint of g).
  const Eigen::VectorXd w =
      system.solve(f - apply_divergence(space, strain_op, g));
  sol.u = spec.u0 + strain_op.expand(w);
  sol.epsilon = strain_op.apply(sol.u);

  const Eigen::VectorXd equilibrium =
      apply_divergence(space, strain_op, sol.sigma);
  sol.diagnostics.equilibrium_residual =
      (equilibrium - f).norm() / (1.0 + f.norm());

  const Eigen::VectorXd shifted = sol.sigma - g;
  const Eigen::VectorXd leak = project_v(system, strain_op, space, shifted);
  sol.diagnostics.orthogonality_residual =
      weighted_norm(space, leak) / (1.0 + weighted_norm(space, shifted));

  sol.diagnostics.complementary_energy =
      complementary_energy(space, sol.sigma, g);
  sol.diagnostics.potential_energy =
      potential_energy(spec, strain_op, space, sol.u);
  sol.diagnostics.refinement_iterations = system.last_refinement_iterations();
  return sol;
}

}  // namespace

StressSolution solve_mixed(const ProblemSpec& spec) {
  return solve_impl(spec, BCMode::Mixed);
}

StressSolution solve_displacement_bc(const ProblemSpec& spec) {
  return solve_impl(spec, BCMode::DisplacementOnly);
}

double complementary_energy(const StressSpace& space,
                            const Eigen::VectorXd& sigma,
                            const Eigen::VectorXd& g) {
  return 0.5 * weighted_ip(space, sigma, sigma) - weighted_ip(space, g, sigma);
}

double potential_energy(const ProblemSpec& spec,
                        const StrainOperator& strain_op,
                        const StressSpace& space, const Eigen::VectorXd& u) {
  if (u.size() != 2 * spec.mesh.num_vertices()) {
    throw DimensionMismatch("u must be defined on all vertices");
  }
  const Eigen::VectorXd eps = strain_op.apply(u);
  Eigen::VectorXd ceps;
  kernels::apply_tensor_field(space.material, eps, ceps);
  double phi = 0.5 * kernels::l2_inner_product(space.areas, eps, ceps);

  for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
    const Eigen::Vector2d F = spec.body_force_of(e);
    if (F.isZero(0.0)) continue;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (int v : spec.mesh.triangles()[e]) {
      mean += Eigen::Vector2d(u[2 * v], u[2 * v + 1]);
    }
    phi -= spec.mesh.area(e) / 3.0 * F.dot(mean);
  }

  for (size_t i = 0; i < spec.mesh.boundary_edges().size(); ++i) {
    if (spec.partition.labels[i] != EdgeLabel::Traction) continue;
    const Eigen::Vector2d T = spec.traction_of(static_cast<int>(i));
    if (T.isZero(0.0)) continue;
    const auto& edge = spec.mesh.boundary_edges()[i];
    const Eigen::Vector2d usum(u[2 * edge.a] + u[2 * edge.b],
                               u[2 * edge.a + 1] + u[2 * edge.b + 1]);
    phi -= 0.5 * edge.length * T.dot(usum);
  }
  return phi;
}

}  // namespace stresslab
