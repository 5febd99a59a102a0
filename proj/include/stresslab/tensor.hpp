#pragma once

#include <Eigen/Dense>
#include <utility>

#include "stresslab/errors.hpp"

namespace stresslab {

/// Number of independent components of a symmetric n x n matrix.
inline constexpr int mandel_size(int dim) { return dim * (dim + 1) / 2; }

/// A symmetric 2-tensor stored as a Mandel vector: diagonal entries first,
/// then the off-diagonal entries (i < j, row-major) scaled by sqrt(2).
/// The scaling makes the Euclidean dot of two Mandel vectors equal to the
/// Frobenius double contraction of the represented matrices, so every
/// orthogonality statement can be read off the plain coordinates.
class SymTensor {
 public:
  SymTensor(Eigen::VectorXd components, int dim);

  /// Converts a symmetric matrix to Mandel form. The input must be symmetric
  /// to 1e-12 relative; otherwise AsymmetricInput is thrown.
  static SymTensor from_matrix(const Eigen::MatrixXd& m,
                               double symmetry_tol = 1e-12);

  Eigen::MatrixXd to_matrix() const;

  double dot(const SymTensor& other) const;
  double norm() const { return components_.norm(); }
  double trace() const { return components_.head(dim_).sum(); }

  const Eigen::VectorXd& components() const { return components_; }
  int dim() const { return dim_; }

 private:
  Eigen::VectorXd components_;
  int dim_;
};

/// The material map sigma = C eps acting on Mandel vectors, with certified
/// eigenvalue bounds 0 < c0 <= C0. The matrix is symmetric positive definite;
/// its inverse (the compliance map) then has eigenvalues in [1/C0, 1/c0].
class ElasticityTensor {
 public:
  /// Identity material map in 2-D (c0 = C0 = 1).
  ElasticityTensor()
      : mandel_(Eigen::Matrix3d::Identity()),
        compliance_(Eigen::Matrix3d::Identity()),
        c0_(1.0),
        C0_(1.0),
        dim_(2) {}

  /// Accepts any SPD Mandel matrix; bounds are certified on construction.
  static ElasticityTensor from_mandel(Eigen::MatrixXd mandel,
                                      double symmetry_tol = 1e-12);

  /// Isotropic material sigma = 2 mu eps + lambda tr(eps) I.
  /// Requires mu > 0 and lambda >= 0; then c0 = 2 mu and C0 = 2 mu + n lambda.
  static ElasticityTensor isotropic(double lambda, double mu, int dim = 2);

  SymTensor apply(const SymTensor& strain) const;
  SymTensor apply_inverse(const SymTensor& stress) const;

  const Eigen::MatrixXd& mandel() const { return mandel_; }
  const Eigen::MatrixXd& compliance() const { return compliance_; }
  double c0() const { return c0_; }
  double C0() const { return C0_; }
  int dim() const { return dim_; }

 private:
  ElasticityTensor(Eigen::MatrixXd mandel, Eigen::MatrixXd compliance,
                   double c0, double C0, int dim)
      : mandel_(std::move(mandel)),
        compliance_(std::move(compliance)),
        c0_(c0),
        C0_(C0),
        dim_(dim) {}

  Eigen::MatrixXd mandel_;
  Eigen::MatrixXd compliance_;
  double c0_;
  double C0_;
  int dim_;
};

/// Smallest and largest eigenvalue of a symmetric Mandel matrix.
/// Throws NotCoercive when the smallest eigenvalue is not positive.
std::pair<double, double> certify_bounds(const Eigen::MatrixXd& mandel);

}  // namespace stresslab
