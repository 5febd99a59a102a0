#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "stresslab/framework.hpp"
#include "stresslab/operators.hpp"
#include "stresslab/solver.hpp"

namespace stresslab {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Independent RNG stream for one named audit, derived from (seed, name).
std::mt19937_64 audit_rng(std::uint64_t seed, std::string_view audit_name);

/// A closed-form (u, eps, sigma, F) quadruple satisfying the elasticity
/// system exactly; used as a convergence oracle. The internal consistency
/// (sigma = C eps and F = -div sigma) is certifiable by finite differences
/// before the case is trusted.
struct ManufacturedCase {
  std::string name;
  std::function<Eigen::Vector2d(double, double)> u_exact;
  std::function<Eigen::Matrix2d(double, double)> eps_exact;
  std::function<Eigen::Matrix2d(double, double)> sigma_exact;
  std::function<Eigen::Vector2d(double, double)> f_exact;
  ElasticityTensor material;
};

/// u = (x, 0) with lambda = mu = 1: constant sigma = [[3,0],[0,1]], F = 0.
ManufacturedCase patch_case();

/// u = (sin(pi x) sin(pi y), 0) with lambda = mu = 1 on the unit square.
ManufacturedCase sine_case();

/// Checks sigma = C eps and F = -div sigma at random sample points with
/// central differences (step 1e-6). Returns the max residual and throws
/// InconsistentCase when it exceeds 1e-5.
double certify_manufactured(const ManufacturedCase& mc, int samples,
                            std::uint64_t seed = kDefaultSeed);

/// Discretization of a manufactured case on the unit square: Dirichlet data
/// from u_exact, body force sampled at centroids, consistent tractions
/// sigma_exact * nu at edge midpoints (mixed mode pins the left edge only).
ProblemSpec make_problem(const ManufacturedCase& mc, int m, BCMode mode);

/// Bivariate polynomial of degree <= 2:
/// c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2.
class Poly2 {
 public:
  Poly2() : c_(Eigen::Matrix<double, 6, 1>::Zero()) {}
  explicit Poly2(Eigen::Matrix<double, 6, 1> c) : c_(std::move(c)) {}
  static Poly2 constant(double v);
  static Poly2 linear(double c0, double cx, double cy);

  double operator()(double x, double y) const;
  Poly2 dx() const;
  Poly2 dy() const;
  int degree() const;
  const Eigen::Matrix<double, 6, 1>& coeffs() const { return c_; }

 private:
  Eigen::Matrix<double, 6, 1> c_;
};

struct PolyDisplacement {
  Poly2 x, y;
};
struct PolyStress {
  Poly2 xx, yy, xy;
};

/// Residual of the Green identity
///  int_Gamma_T u . (sigma nu) dS - int sigma : E(u) dx - int (div sigma) . u dx
/// evaluated with exact quadrature on the continuous polynomial fields.
/// The displacement must vanish on the Dirichlet part; degree(poly) <= 2.
double green_residual(const TriangleMesh& mesh,
                      const BoundaryPartition& partition,
                      const PolyStress& sigma, const PolyDisplacement& u);

/// Max over random all-boundary-pinned fields of |grad u| / |E_h u|;
/// bounded by sqrt(2) for the discrete space.
double korn_audit(const StrainOperator& pinned_op, const TriangleMesh& mesh,
                  int trials, std::uint64_t seed = kDefaultSeed);

/// Kernel dimension of E_h restricted to the free dofs, via SVD with a
/// relative singular-value threshold.
int strain_kernel_dimension(const StrainOperator& op, double rank_tol = 1e-9);

/// Smallest singular value of E_h on the free dofs; 1/value is the discrete
/// constant of the Korn-derived bound |u| <= c |E(u)|.
double strain_min_singular_value(const StrainOperator& op);

struct ConvergenceRow {
  int m = 0;
  double h = 0.0;
  double error = 0.0;
};
struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double rate = 0.0;
  bool exact = false;  // all errors below 1e-10: rate is meaningless
};

/// Stress L2 errors via the 3-point edge-midpoint rule and the least-squares
/// slope of log(error) against log(h).
ConvergenceResult convergence_study(const ManufacturedCase& mc,
                                    const std::vector<int>& sizes, BCMode mode);

/// L2 norm of sigma_h - sigma_exact over the mesh (3-point midpoint rule).
double stress_l2_error(const TriangleMesh& mesh, const Eigen::VectorXd& sigma_h,
                       const std::function<Eigen::Matrix2d(double, double)>&
                           sigma_exact);

/// Classical displacement-method truss solver, implemented independently of
/// the projection machinery: dense assembly from node coordinates, dense
/// factorization, tension post-processing.
BarSolution direct_stiffness_solve(const BarFramework& fw);

/// Max relative deviation between solve_bar_stress and the direct stiffness
/// oracle over tensions and free displacements.
double framework_cross_check(const BarFramework& fw);

/// Random rigid framework on a jittered triangulated grid with the bottom
/// row pinned; loads and prescribed pin displacements randomized.
BarFramework random_triangulated_framework(std::mt19937_64& rng,
                                           int max_side = 4);

/// Random boundary partition with at least one Dirichlet and one traction
/// edge.
BoundaryPartition random_mixed_partition(const TriangleMesh& mesh,
                                         std::mt19937_64& rng);

/// Random SPD Mandel material with eigenvalues in [0.5, 5].
ElasticityTensor random_material(std::mt19937_64& rng);

/// Orthonormal basis of Ker D_h (the self-equilibrated stresses) via dense
/// SVD; verification-scale only.
Eigen::MatrixXd divergence_kernel_basis(const StressSpace& space,
                                        const StrainOperator& op,
                                        double rank_tol = 1e-9);

/// Rank of the compatible subspace Im(C E_h) via dense SVD.
int image_rank(const StressSpace& space, const StrainOperator& op,
               double rank_tol = 1e-9);

struct AuditResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // pass bound
  std::string detail;
};

/// The full audit suite behind `verify`: every result carries the measured
/// value, its bound, and the seed-dependent detail needed to replay it.
std::vector<AuditResult> run_audit_suite(std::uint64_t seed = kDefaultSeed);

}  // namespace stresslab
