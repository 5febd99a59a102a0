#include "stresslab/kernels.hpp"

#include <gtest/gtest.h>

#include <random>

namespace stresslab::kernels {
namespace {

struct Fixture {
  TriangleMesh mesh = structured_unit_square(9);
  ElementGeometry geom = build_geometry(mesh);
  Eigen::VectorXd u;
  Eigen::VectorXd sigma;
  std::vector<Eigen::Matrix3d> maps;

  Fixture() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    u.resize(geom.num_dofs);
    for (int i = 0; i < u.size(); ++i) u[i] = uni(rng);
    sigma.resize(3 * geom.num_elements());
    for (int i = 0; i < sigma.size(); ++i) sigma[i] = uni(rng);
    maps.resize(geom.num_elements());
    for (auto& m : maps) {
      Eigen::Matrix3d a;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a(r, c) = uni(rng);
      }
      m = a.transpose() * a + Eigen::Matrix3d::Identity();
    }
  }
};

TEST(Kernels, StrainsMatchSerialBitwise) {
  Fixture f;
  Eigen::VectorXd parallel, reference;
  element_strains(f.geom, f.u, parallel);
  serial::element_strains(f.geom, f.u, reference);
  ASSERT_EQ(parallel.size(), reference.size());
  for (int i = 0; i < parallel.size(); ++i) {
    EXPECT_EQ(parallel[i], reference[i]) << "component " << i;
  }
}

TEST(Kernels, TensorFieldMatchesSerialBitwise) {
  Fixture f;
  Eigen::VectorXd parallel, reference;
  apply_tensor_field(f.maps, f.sigma, parallel);
  serial::apply_tensor_field(f.maps, f.sigma, reference);
  for (int i = 0; i < parallel.size(); ++i) {
    EXPECT_EQ(parallel[i], reference[i]);
  }
}

TEST(Kernels, WeightedIpMatchesSerialBitwise) {
  Fixture f;
  Eigen::VectorXd tau = f.sigma.reverse();
  EXPECT_EQ(weighted_inner_product(f.geom.areas, f.maps, f.sigma, tau),
            serial::weighted_inner_product(f.geom.areas, f.maps, f.sigma, tau));
  EXPECT_EQ(l2_inner_product(f.geom.areas, f.sigma, tau),
            serial::l2_inner_product(f.geom.areas, f.sigma, tau));
}

TEST(Kernels, AdjointForcesMatchSerialBitwise) {
  Fixture f;
  Eigen::VectorXd parallel, reference;
  adjoint_forces(f.geom, f.sigma, parallel);
  serial::adjoint_forces(f.geom, f.sigma, reference);
  for (int i = 0; i < parallel.size(); ++i) {
    EXPECT_EQ(parallel[i], reference[i]) << "dof " << i;
  }
}

TEST(Kernels, StiffnessBlocksMatchSerialBitwise) {
  Fixture f;
  std::vector<Eigen::Matrix<double, 6, 6>> parallel, reference;
  element_stiffness(f.geom, f.maps, parallel);
  serial::element_stiffness(f.geom, f.maps, reference);
  for (size_t e = 0; e < parallel.size(); ++e) {
    EXPECT_EQ((parallel[e] - reference[e]).norm(), 0.0) << "element " << e;
  }
}

TEST(Kernels, AdjointIsTransposeOfStrainMap) {
  // <adjoint(sigma), u> must equal sum_e area_e sigma_e : (E u)_e.
  Fixture f;
  Eigen::VectorXd eps, forces;
  element_strains(f.geom, f.u, eps);
  adjoint_forces(f.geom, f.sigma, forces);
  const double lhs = forces.dot(f.u);
  const double rhs = l2_inner_product(f.geom.areas, f.sigma, eps);
  EXPECT_NEAR(lhs, rhs, 1e-13 * (1.0 + std::abs(rhs)));
}

TEST(Kernels, GradientNormDominatesStrainNorm) {
  // |E u| <= |grad u| pointwise for the symmetric part.
  Fixture f;
  const auto grads = build_gradient_blocks(f.mesh);
  Eigen::VectorXd eps;
  element_strains(f.geom, f.u, eps);
  const double strain_sq = l2_inner_product(f.geom.areas, eps, eps);
  const double grad_sq = gradient_norm_sq(f.geom, grads, f.u);
  EXPECT_LE(strain_sq, grad_sq + 1e-12);
}

}  // namespace
}  // namespace stresslab::kernels
