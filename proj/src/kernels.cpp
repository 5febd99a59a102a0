#include "stresslab/kernels.hpp"

#include <cmath>

namespace stresslab::kernels {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

ElementGeometry build_geometry(const TriangleMesh& mesh) {
  const int nt = mesh.num_triangles();
  ElementGeometry geom;
  geom.strain_blocks.resize(nt);
  geom.element_dofs.resize(nt);
  geom.areas = mesh.areas();
  geom.num_dofs = 2 * mesh.num_vertices();

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    const auto& tri = mesh.triangles()[e];
    const Eigen::Vector2d p0 = mesh.vertices()[tri[0]];
    const Eigen::Vector2d p1 = mesh.vertices()[tri[1]];
    const Eigen::Vector2d p2 = mesh.vertices()[tri[2]];
    const double inv2A = 1.0 / (2.0 * mesh.area(e));
    // Constant shape-function gradients: grad phi_i = (b_i, c_i) / (2A).
    const double b[3] = {(p1.y() - p2.y()) * inv2A, (p2.y() - p0.y()) * inv2A,
                         (p0.y() - p1.y()) * inv2A};
    const double c[3] = {(p2.x() - p1.x()) * inv2A, (p0.x() - p2.x()) * inv2A,
                         (p1.x() - p0.x()) * inv2A};
    Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
    for (int i = 0; i < 3; ++i) {
      B(0, 2 * i) = b[i];                       // eps_xx from u_x
      B(1, 2 * i + 1) = c[i];                   // eps_yy from u_y
      B(2, 2 * i) = 0.5 * kSqrt2 * c[i];        // sqrt(2) eps_xy
      B(2, 2 * i + 1) = 0.5 * kSqrt2 * b[i];
    }
    geom.strain_blocks[e] = B;
    geom.element_dofs[e] = {2 * tri[0], 2 * tri[0] + 1, 2 * tri[1],
                            2 * tri[1] + 1, 2 * tri[2], 2 * tri[2] + 1};
  }

  geom.dof_incidence.resize(geom.num_dofs);
  for (int e = 0; e < nt; ++e) {
    for (int l = 0; l < 6; ++l) {
      geom.dof_incidence[geom.element_dofs[e][l]].emplace_back(e, l);
    }
  }
  return geom;
}

void element_strains(const ElementGeometry& geom, const Eigen::VectorXd& u,
                     Eigen::VectorXd& eps) {
  const int nt = geom.num_elements();
  eps.resize(3 * nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    Eigen::Matrix<double, 6, 1> ue;
    for (int l = 0; l < 6; ++l) ue[l] = u[geom.element_dofs[e][l]];
    eps.segment<3>(3 * e) = geom.strain_blocks[e] * ue;
  }
}

void apply_tensor_field(const std::vector<Eigen::Matrix3d>& maps,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  const int nt = static_cast<int>(maps.size());
  out.resize(3 * nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    out.segment<3>(3 * e) = maps[e] * in.segment<3>(3 * e);
  }
}

double weighted_inner_product(const Eigen::VectorXd& areas,
                              const std::vector<Eigen::Matrix3d>& compliance,
                              const Eigen::VectorXd& s,
                              const Eigen::VectorXd& t) {
  const int nt = static_cast<int>(compliance.size());
  Eigen::VectorXd terms(nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    terms[e] =
        areas[e] * s.segment<3>(3 * e).dot(compliance[e] * t.segment<3>(3 * e));
  }
  double sum = 0.0;
  for (int e = 0; e < nt; ++e) sum += terms[e];
  return sum;
}

double l2_inner_product(const Eigen::VectorXd& areas, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& t) {
  const int nt = static_cast<int>(areas.size());
  Eigen::VectorXd terms(nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    terms[e] = areas[e] * s.segment<3>(3 * e).dot(t.segment<3>(3 * e));
  }
  double sum = 0.0;
  for (int e = 0; e < nt; ++e) sum += terms[e];
  return sum;
}

void adjoint_forces(const ElementGeometry& geom, const Eigen::VectorXd& sigma,
                    Eigen::VectorXd& r) {
  r.resize(geom.num_dofs);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int d = 0; d < geom.num_dofs; ++d) {
    double acc = 0.0;
    for (const auto& [e, l] : geom.dof_incidence[d]) {
      acc += geom.areas[e] *
             geom.strain_blocks[e].col(l).dot(sigma.segment<3>(3 * e));
    }
    r[d] = acc;
  }
}

void element_stiffness(const ElementGeometry& geom,
                       const std::vector<Eigen::Matrix3d>& material,
                       std::vector<Eigen::Matrix<double, 6, 6>>& blocks) {
  const int nt = geom.num_elements();
  blocks.resize(nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    const auto& B = geom.strain_blocks[e];
    const Eigen::Matrix<double, 6, 6> ke =
        geom.areas[e] * B.transpose() * material[e] * B;
    // Exact symmetry: the product alone can drift by an ulp across the
    // diagonal.
    blocks[e] = 0.5 * (ke + ke.transpose());
  }
}

std::vector<Eigen::Matrix<double, 2, 6>> build_gradient_blocks(
    const TriangleMesh& mesh) {
  const int nt = mesh.num_triangles();
  std::vector<Eigen::Matrix<double, 2, 6>> blocks(nt);
  for (int e = 0; e < nt; ++e) {
    const auto& tri = mesh.triangles()[e];
    const Eigen::Vector2d p0 = mesh.vertices()[tri[0]];
    const Eigen::Vector2d p1 = mesh.vertices()[tri[1]];
    const Eigen::Vector2d p2 = mesh.vertices()[tri[2]];
    const double inv2A = 1.0 / (2.0 * mesh.area(e));
    const double b[3] = {(p1.y() - p2.y()) * inv2A, (p2.y() - p0.y()) * inv2A,
                         (p0.y() - p1.y()) * inv2A};
    const double c[3] = {(p2.x() - p1.x()) * inv2A, (p0.x() - p2.x()) * inv2A,
                         (p1.x() - p0.x()) * inv2A};
    Eigen::Matrix<double, 2, 6> G = Eigen::Matrix<double, 2, 6>::Zero();
    for (int i = 0; i < 3; ++i) {
      G(0, 2 * i) = b[i];  // d/dx weight of vertex i
      G(1, 2 * i) = c[i];  // d/dy weight
    }
    blocks[e] = G;
  }
  return blocks;
}

double gradient_norm_sq(
    const ElementGeometry& geom,
    const std::vector<Eigen::Matrix<double, 2, 6>>& gradient_blocks,
    const Eigen::VectorXd& u) {
  const int nt = geom.num_elements();
  Eigen::VectorXd terms(nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < nt; ++e) {
    Eigen::Matrix<double, 6, 1> ue;
    for (int l = 0; l < 6; ++l) ue[l] = u[geom.element_dofs[e][l]];
    // Rows of G give (d/dx, d/dy) applied to the x-slots; the same weights
    // on the y-slots give the gradient of u_y.
    const auto& G = gradient_blocks[e];
    double frob = 0.0;
    for (int comp = 0; comp < 2; ++comp) {
      Eigen::Vector2d grad = Eigen::Vector2d::Zero();
      for (int i = 0; i < 3; ++i) {
        grad.x() += G(0, 2 * i) * ue[2 * i + comp];
        grad.y() += G(1, 2 * i) * ue[2 * i + comp];
      }
      frob += grad.squaredNorm();
    }
    terms[e] = geom.areas[e] * frob;
  }
  double sum = 0.0;
  for (int e = 0; e < nt; ++e) sum += terms[e];
  return sum;
}

namespace serial {

void element_strains(const ElementGeometry& geom, const Eigen::VectorXd& u,
                     Eigen::VectorXd& eps) {
  const int nt = geom.num_elements();
  eps.resize(3 * nt);
  for (int e = 0; e < nt; ++e) {
    Eigen::Matrix<double, 6, 1> ue;
    for (int l = 0; l < 6; ++l) ue[l] = u[geom.element_dofs[e][l]];
    eps.segment<3>(3 * e) = geom.strain_blocks[e] * ue;
  }
}

void apply_tensor_field(const std::vector<Eigen::Matrix3d>& maps,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  const int nt = static_cast<int>(maps.size());
  out.resize(3 * nt);
  for (int e = 0; e < nt; ++e) {
    out.segment<3>(3 * e) = maps[e] * in.segment<3>(3 * e);
  }
}

double weighted_inner_product(const Eigen::VectorXd& areas,
                              const std::vector<Eigen::Matrix3d>& compliance,
                              const Eigen::VectorXd& s,
                              const Eigen::VectorXd& t) {
  const int nt = static_cast<int>(compliance.size());
  double sum = 0.0;
  for (int e = 0; e < nt; ++e) {
    sum +=
        areas[e] * s.segment<3>(3 * e).dot(compliance[e] * t.segment<3>(3 * e));
  }
  return sum;
}

double l2_inner_product(const Eigen::VectorXd& areas, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& t) {
  const int nt = static_cast<int>(areas.size());
  double sum = 0.0;
  for (int e = 0; e < nt; ++e) {
    sum += areas[e] * s.segment<3>(3 * e).dot(t.segment<3>(3 * e));
  }
  return sum;
}

void adjoint_forces(const ElementGeometry& geom, const Eigen::VectorXd& sigma,
                    Eigen::VectorXd& r) {
  r = Eigen::VectorXd::Zero(geom.num_dofs);
  // Element-order scatter; for each dof the contributions arrive in the same
  // ascending element order as the incidence-list gather, with the same
  // per-contribution arithmetic.
  for (int e = 0; e < geom.num_elements(); ++e) {
    for (int l = 0; l < 6; ++l) {
      r[geom.element_dofs[e][l]] +=
          geom.areas[e] *
          geom.strain_blocks[e].col(l).dot(sigma.segment<3>(3 * e));
    }
  }
}

void element_stiffness(const ElementGeometry& geom,
                       const std::vector<Eigen::Matrix3d>& material,
                       std::vector<Eigen::Matrix<double, 6, 6>>& blocks) {
  const int nt = geom.num_elements();
  blocks.resize(nt);
  for (int e = 0; e < nt; ++e) {
    const auto& B = geom.strain_blocks[e];
    const Eigen::Matrix<double, 6, 6> ke =
        geom.areas[e] * B.transpose() * material[e] * B;
    blocks[e] = 0.5 * (ke + ke.transpose());
  }
}

}  // namespace serial

}  // namespace stresslab::kernels
