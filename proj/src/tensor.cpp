#include "stresslab/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace stresslab {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

SymTensor::SymTensor(Eigen::VectorXd components, int dim)
    : components_(std::move(components)), dim_(dim) {
  if (dim_ < 2 || components_.size() != mandel_size(dim_)) {
    throw DimensionMismatch("Mandel vector of length " +
                            std::to_string(components_.size()) +
                            " does not match dimension " + std::to_string(dim_));
  }
}

SymTensor SymTensor::from_matrix(const Eigen::MatrixXd& m, double symmetry_tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n || n < 2) {
    throw DimensionMismatch("expected a square matrix of size >= 2");
  }
  const double asym = (m - m.transpose()).norm();
  if (asym > symmetry_tol * (1.0 + m.norm())) {
    throw AsymmetricInput("matrix is not symmetric: |A - A^T| = " +
                          std::to_string(asym));
  }
  Eigen::VectorXd c(mandel_size(n));
  for (int i = 0; i < n; ++i) c[i] = m(i, i);
  int k = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      c[k++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return SymTensor(std::move(c), n);
}

Eigen::MatrixXd SymTensor::to_matrix() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) m(i, i) = components_[i];
  int k = dim_;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      const double v = components_[k++] / kSqrt2;
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

double SymTensor::dot(const SymTensor& other) const {
  if (other.dim_ != dim_) {
    throw DimensionMismatch("tensor dimensions differ");
  }
  return components_.dot(other.components_);
}

ElasticityTensor ElasticityTensor::from_mandel(Eigen::MatrixXd mandel,
                                               double symmetry_tol) {
  const int s = static_cast<int>(mandel.rows());
  int dim = -1;
  for (int n = 2; mandel_size(n) <= s; ++n) {
    if (mandel_size(n) == s) dim = n;
  }
  if (mandel.cols() != s || dim < 0) {
    throw DimensionMismatch("Mandel matrix size " + std::to_string(s) +
                            " is not n(n+1)/2 for any n >= 2");
  }
  if ((mandel - mandel.transpose()).norm() >
      symmetry_tol * (1.0 + mandel.norm())) {
    throw AsymmetricInput("elasticity Mandel matrix is not symmetric");
  }
  auto [c0, C0] = certify_bounds(mandel);
  Eigen::MatrixXd compliance = mandel.inverse();
  // Symmetrize to kill roundoff from the inverse.
  compliance = 0.5 * (compliance + compliance.transpose()).eval();
  return ElasticityTensor(std::move(mandel), std::move(compliance), c0, C0, dim);
}

ElasticityTensor ElasticityTensor::isotropic(double lambda, double mu, int dim) {
  if (!(mu > 0.0) || !(lambda >= 0.0) || !std::isfinite(mu) ||
      !std::isfinite(lambda)) {
    throw InvalidModuli("isotropic moduli require mu > 0 and lambda >= 0");
  }
  if (dim < 2) {
    throw DimensionMismatch("isotropic tensor needs dim >= 2");
  }
  const int s = mandel_size(dim);
  // In the Mandel basis the volumetric part acts only on the diagonal block
  // and every shear component is an eigenvector with eigenvalue 2 mu.
  Eigen::MatrixXd m = 2.0 * mu * Eigen::MatrixXd::Identity(s, s);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) += lambda;
  }
  const double c0 = 2.0 * mu;
  const double C0 = 2.0 * mu + dim * lambda;
  Eigen::MatrixXd compliance = m.inverse();
  compliance = 0.5 * (compliance + compliance.transpose()).eval();
  return ElasticityTensor(std::move(m), std::move(compliance), c0, C0, dim);
}

SymTensor ElasticityTensor::apply(const SymTensor& strain) const {
  if (strain.dim() != dim_) {
    throw DimensionMismatch("strain dimension does not match tensor");
  }
  return SymTensor(mandel_ * strain.components(), dim_);
}

SymTensor ElasticityTensor::apply_inverse(const SymTensor& stress) const {
  if (stress.dim() != dim_) {
    throw DimensionMismatch("stress dimension does not match tensor");
  }
  if (!(c0_ > 0.0)) {
    throw SingularTensor("compliance undefined: c0 <= 0");
  }
  return SymTensor(compliance_ * stress.components(), dim_);
}

std::pair<double, double> certify_bounds(const Eigen::MatrixXd& mandel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mandel,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NotCoercive("eigenvalue computation failed");
  }
  const double c0 = es.eigenvalues().minCoeff();
  const double C0 = es.eigenvalues().maxCoeff();
  if (!(c0 > 0.0)) {
    throw NotCoercive("material map is not coercive: min eigenvalue = " +
                      std::to_string(c0));
  }
  return {c0, C0};
}

}  // namespace stresslab
