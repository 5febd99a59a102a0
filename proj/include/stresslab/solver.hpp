#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "stresslab/operators.hpp"

namespace stresslab {

struct SolveDiagnostics {
  double equilibrium_residual = 0.0;   // |D sigma - f| / (1 + |f|)
  double orthogonality_residual = 0.0; // |P_V(sigma - g)|_w / (1 + |sigma - g|_w)
  double complementary_energy = 0.0;
  double potential_energy = 0.0;
  int refinement_iterations = 0;
};

/// The solved triple: per-element stress and strain plus the full nodal
/// displacement (Dirichlet values included). epsilon = E_h u exactly.
struct StressSolution {
  Eigen::VectorXd sigma;    // 3|T|
  Eigen::VectorXd epsilon;  // 3|T|
  Eigen::VectorXd u;        // 2|V|
  SolveDiagnostics diagnostics;
};

/// K = E_h^T diag(area) C E_h on the free dofs, factorized once and reused
/// for every right-hand side. Construction fails with SingularStiffness when
/// the LDLT pivots are not strictly positive (an undetected mechanism or an
/// empty Dirichlet set); no regularization is applied.
class StiffnessSystem {
 public:
  StiffnessSystem(const StrainOperator& strain_op, const StressSpace& space);

  /// Solves K x = rhs with iterative refinement to 1e-12 relative residual.
  /// Reentrant; concurrent solves on one factorization are safe.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  const Eigen::SparseMatrix<double>& matrix() const { return K_; }
  int last_refinement_iterations() const { return refinement_iterations_; }

 private:
  Eigen::SparseMatrix<double> K_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  mutable int refinement_iterations_ = 0;
};

/// Q f: the unique stress in Im(C E_h) whose adjoint image is f, computed as
/// C E_h (K^-1 f).
Eigen::VectorXd lift_q(const StiffnessSystem& system,
                       const StrainOperator& strain_op,
                       const StressSpace& space, const Eigen::VectorXd& f);

/// P_V g = g - C E_h w with K w = (adjoint of g): the orthogonal projection
/// onto the self-equilibrated subspace in the weighted inner product.
Eigen::VectorXd project_v(const StiffnessSystem& system,
                          const StrainOperator& strain_op,
                          const StressSpace& space, const Eigen::VectorXd& g);

StressSolution solve_mixed(const ProblemSpec& spec);
StressSolution solve_displacement_bc(const ProblemSpec& spec);

/// Complementary energy  S(sigma) = 1/2 <sigma, sigma>_w - <g, sigma>_w,
/// minimized by the stress solution over the equilibrated affine set.
double complementary_energy(const StressSpace& space,
                            const Eigen::VectorXd& sigma,
                            const Eigen::VectorXd& g);

/// Potential energy
/// Phi(u) = 1/2 int E(u):C E(u) - int F . u - int_Gamma_T T . u,
/// with exact quadrature for P1 u and piecewise-constant data.
double potential_energy(const ProblemSpec& spec,
                        const StrainOperator& strain_op,
                        const StressSpace& space, const Eigen::VectorXd& u);

}  // namespace stresslab
