#include "stresslab/verify.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace stresslab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d mandel3(const Eigen::Matrix2d& m) {
  return {m(0, 0), m(1, 1), 1.4142135623730951 * 0.5 * (m(0, 1) + m(1, 0))};
}

}  // namespace

std::mt19937_64 audit_rng(std::uint64_t seed, std::string_view audit_name) {
  std::uint64_t h = seed;
  for (char c : audit_name) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  }
  return std::mt19937_64(splitmix64(h));
}

ManufacturedCase patch_case() {
  ManufacturedCase mc;
  mc.name = "patch";
  mc.material = ElasticityTensor::isotropic(1.0, 1.0, 2);
  mc.u_exact = [](double x, double) { return Eigen::Vector2d(x, 0.0); };
  mc.eps_exact = [](double, double) {
    Eigen::Matrix2d e;
    e << 1.0, 0.0, 0.0, 0.0;
    return e;
  };
  mc.sigma_exact = [](double, double) {
    Eigen::Matrix2d s;
    s << 3.0, 0.0, 0.0, 1.0;
    return s;
  };
  mc.f_exact = [](double, double) { return Eigen::Vector2d::Zero().eval(); };
  return mc;
}

ManufacturedCase sine_case() {
  ManufacturedCase mc;
  mc.name = "sine";
  mc.material = ElasticityTensor::isotropic(1.0, 1.0, 2);
  mc.u_exact = [](double x, double y) {
    return Eigen::Vector2d(std::sin(kPi * x) * std::sin(kPi * y), 0.0);
  };
  mc.eps_exact = [](double x, double y) {
    const double dudx = kPi * std::cos(kPi * x) * std::sin(kPi * y);
    const double dudy = kPi * std::sin(kPi * x) * std::cos(kPi * y);
    Eigen::Matrix2d e;
    e << dudx, 0.5 * dudy, 0.5 * dudy, 0.0;
    return e;
  };
  mc.sigma_exact = [](double x, double y) {
    // sigma = 2 eps + tr(eps) I for lambda = mu = 1.
    const double dudx = kPi * std::cos(kPi * x) * std::sin(kPi * y);
    const double dudy = kPi * std::sin(kPi * x) * std::cos(kPi * y);
    Eigen::Matrix2d s;
    s << 3.0 * dudx, dudy, dudy, dudx;
    return s;
  };
  mc.f_exact = [](double x, double y) {
    return Eigen::Vector2d(
        4.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y),
        -2.0 * kPi * kPi * std::cos(kPi * x) * std::cos(kPi * y));
  };
  return mc;
}

double certify_manufactured(const ManufacturedCase& mc, int samples,
                            std::uint64_t seed) {
  std::mt19937_64 rng = audit_rng(seed, "certify:" + mc.name);
  std::uniform_real_distribution<double> interior(0.05, 0.95);
  const double h = 1e-6;
  double max_residual = 0.0;

  for (int s = 0; s < samples; ++s) {
    const double x = interior(rng);
    const double y = interior(rng);

    // eps = sym grad u by central differences.
    const Eigen::Vector2d ux1 = mc.u_exact(x + h, y), ux0 = mc.u_exact(x - h, y);
    const Eigen::Vector2d uy1 = mc.u_exact(x, y + h), uy0 = mc.u_exact(x, y - h);
    Eigen::Matrix2d grad;
    grad.col(0) = (ux1 - ux0) / (2 * h);
    grad.col(1) = (uy1 - uy0) / (2 * h);
    const Eigen::Matrix2d eps_fd = 0.5 * (grad + grad.transpose());
    max_residual =
        std::max(max_residual, (eps_fd - mc.eps_exact(x, y)).norm());

    // sigma = C eps, checked algebraically in Mandel coordinates.
    const SymTensor eps_m = SymTensor::from_matrix(mc.eps_exact(x, y));
    const SymTensor sig_m = mc.material.apply(eps_m);
    max_residual = std::max(
        max_residual,
        (sig_m.to_matrix() - mc.sigma_exact(x, y)).norm());

    // F = -div sigma by central differences.
    const Eigen::Matrix2d sx1 = mc.sigma_exact(x + h, y);
    const Eigen::Matrix2d sx0 = mc.sigma_exact(x - h, y);
    const Eigen::Matrix2d sy1 = mc.sigma_exact(x, y + h);
    const Eigen::Matrix2d sy0 = mc.sigma_exact(x, y - h);
    const Eigen::Vector2d div(
        (sx1(0, 0) - sx0(0, 0)) / (2 * h) + (sy1(0, 1) - sy0(0, 1)) / (2 * h),
        (sx1(1, 0) - sx0(1, 0)) / (2 * h) + (sy1(1, 1) - sy0(1, 1)) / (2 * h));
    max_residual =
        std::max(max_residual, (div + mc.f_exact(x, y)).norm());
  }
  if (max_residual > 1e-5) {
    throw InconsistentCase("manufactured case '" + mc.name +
                           "' is internally inconsistent: residual " +
                           std::to_string(max_residual));
  }
  return max_residual;
}

ProblemSpec make_problem(const ManufacturedCase& mc, int m, BCMode mode) {
  ProblemSpec spec;
  spec.mesh = structured_unit_square(m);
  spec.mode = mode;
  if (mode == BCMode::DisplacementOnly) {
    spec.partition = all_dirichlet(spec.mesh);
  } else {
    spec.partition = label_boundary(spec.mesh, [](const Eigen::Vector2d& mid) {
      return mid.x() < 1e-12 ? EdgeLabel::Dirichlet : EdgeLabel::Traction;
    });
  }
  spec.material = {mc.material};

  spec.u0.resize(2 * spec.mesh.num_vertices());
  for (int v = 0; v < spec.mesh.num_vertices(); ++v) {
    const Eigen::Vector2d u = mc.u_exact(spec.mesh.vertices()[v].x(),
                                         spec.mesh.vertices()[v].y());
    spec.u0[2 * v] = u.x();
    spec.u0[2 * v + 1] = u.y();
  }

  spec.body_force.resize(spec.mesh.num_triangles());
  for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
    const Eigen::Vector2d c = spec.mesh.centroid(e);
    spec.body_force[e] = mc.f_exact(c.x(), c.y());
  }

  spec.traction.assign(spec.mesh.boundary_edges().size(),
                       Eigen::Vector2d::Zero());
  for (size_t i = 0; i < spec.mesh.boundary_edges().size(); ++i) {
    if (spec.partition.labels[i] != EdgeLabel::Traction) continue;
    const auto& edge = spec.mesh.boundary_edges()[i];
    const Eigen::Vector2d mid = edge.midpoint(spec.mesh.vertices());
    spec.traction[i] = mc.sigma_exact(mid.x(), mid.y()) * edge.normal;
  }
  return spec;
}

Poly2 Poly2::constant(double v) {
  Eigen::Matrix<double, 6, 1> c = Eigen::Matrix<double, 6, 1>::Zero();
  c[0] = v;
  return Poly2(c);
}

Poly2 Poly2::linear(double c0, double cx, double cy) {
  Eigen::Matrix<double, 6, 1> c = Eigen::Matrix<double, 6, 1>::Zero();
  c[0] = c0;
  c[1] = cx;
  c[2] = cy;
  return Poly2(c);
}

double Poly2::operator()(double x, double y) const {
  return c_[0] + c_[1] * x + c_[2] * y + c_[3] * x * x + c_[4] * x * y +
         c_[5] * y * y;
}

Poly2 Poly2::dx() const {
  return linear(c_[1], 2.0 * c_[3], c_[4]);
}

Poly2 Poly2::dy() const {
  return linear(c_[2], c_[4], 2.0 * c_[5]);
}

int Poly2::degree() const {
  if (c_[3] != 0.0 || c_[4] != 0.0 || c_[5] != 0.0) return 2;
  if (c_[1] != 0.0 || c_[2] != 0.0) return 1;
  return 0;
}

namespace {

// Degree-4 triangle rule (6 points) in barycentric coordinates; weights sum
// to 1 so each term is scaled by the triangle area.
struct TriRulePoint {
  double l0, l1, l2, w;
};
const TriRulePoint kTriRule[6] = {
    {0.108103018168070, 0.445948490915965, 0.445948490915965,
     0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965,
     0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070,
     0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771,
     0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771,
     0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459,
     0.109951743655322},
};

// 3-point Gauss rule on [0, 1], exact to degree 5.
struct EdgeRulePoint {
  double t, w;
};
const EdgeRulePoint kEdgeRule[3] = {
    {0.5 - 0.5 * 0.7745966692414834, 5.0 / 18.0},
    {0.5, 8.0 / 18.0},
    {0.5 + 0.5 * 0.7745966692414834, 5.0 / 18.0},
};

}  // namespace

double green_residual(const TriangleMesh& mesh,
                      const BoundaryPartition& partition,
                      const PolyStress& sigma, const PolyDisplacement& u) {
  for (const Poly2* p : {&sigma.xx, &sigma.yy, &sigma.xy, &u.x, &u.y}) {
    if (p->degree() > 2) {
      throw DegreeTooHigh("green_residual integrates degree <= 2 exactly");
    }
  }
  if (partition.labels.size() != mesh.boundary_edges().size()) {
    throw DimensionMismatch("partition labels do not match boundary edges");
  }

  const Poly2 ux_dx = u.x.dx(), ux_dy = u.x.dy();
  const Poly2 uy_dx = u.y.dx(), uy_dy = u.y.dy();
  const Poly2 sxx_dx = sigma.xx.dx(), sxy_dy = sigma.xy.dy();
  const Poly2 sxy_dx = sigma.xy.dx(), syy_dy = sigma.yy.dy();

  double volume = 0.0;
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const Eigen::Vector2d p0 = mesh.vertices()[tri[0]];
    const Eigen::Vector2d p1 = mesh.vertices()[tri[1]];
    const Eigen::Vector2d p2 = mesh.vertices()[tri[2]];
    double acc = 0.0;
    for (const auto& q : kTriRule) {
      const Eigen::Vector2d p = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
      const double x = p.x(), y = p.y();
      const double exx = ux_dx(x, y);
      const double eyy = uy_dy(x, y);
      const double exy = 0.5 * (ux_dy(x, y) + uy_dx(x, y));
      const double contraction = sigma.xx(x, y) * exx + sigma.yy(x, y) * eyy +
                                 2.0 * sigma.xy(x, y) * exy;
      const double divx = sxx_dx(x, y) + sxy_dy(x, y);
      const double divy = sxy_dx(x, y) + syy_dy(x, y);
      acc += q.w * (contraction + divx * u.x(x, y) + divy * u.y(x, y));
    }
    volume += mesh.area(e) * acc;
  }

  double boundary = 0.0;
  for (size_t i = 0; i < mesh.boundary_edges().size(); ++i) {
    if (partition.labels[i] != EdgeLabel::Traction) continue;
    const auto& edge = mesh.boundary_edges()[i];
    const Eigen::Vector2d a = mesh.vertices()[edge.a];
    const Eigen::Vector2d b = mesh.vertices()[edge.b];
    double acc = 0.0;
    for (const auto& q : kEdgeRule) {
      const Eigen::Vector2d p = a + q.t * (b - a);
      const double x = p.x(), y = p.y();
      Eigen::Matrix2d s;
      s << sigma.xx(x, y), sigma.xy(x, y), sigma.xy(x, y), sigma.yy(x, y);
      const Eigen::Vector2d traction = s * edge.normal;
      acc += q.w * (traction.x() * u.x(x, y) + traction.y() * u.y(x, y));
    }
    boundary += edge.length * acc;
  }
  return std::abs(boundary - volume);
}

double korn_audit(const StrainOperator& pinned_op, const TriangleMesh& mesh,
                  int trials, std::uint64_t seed) {
  if (pinned_op.num_free() == 0) {
    throw InputError("korn audit needs interior vertices (m >= 2)");
  }
  const auto gradient_blocks = kernels::build_gradient_blocks(mesh);
  std::mt19937_64 rng = audit_rng(seed, "korn");
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double max_ratio = 0.0;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd w(pinned_op.num_free());
    for (int i = 0; i < w.size(); ++i) w[i] = uni(rng);
    const Eigen::VectorXd u = pinned_op.expand(w);
    const Eigen::VectorXd eps = pinned_op.apply(u);
    const double strain_sq =
        kernels::l2_inner_product(pinned_op.geometry.areas, eps, eps);
    const double grad_sq =
        kernels::gradient_norm_sq(pinned_op.geometry, gradient_blocks, u);
    if (strain_sq <= 0.0) continue;  // excluded: kernel is trivial here
    max_ratio = std::max(max_ratio, std::sqrt(grad_sq / strain_sq));
  }
  return max_ratio;
}

int strain_kernel_dimension(const StrainOperator& op, double rank_tol) {
  const Eigen::MatrixXd dense = op.dense_free_matrix();
  if (dense.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return static_cast<int>(dense.cols()) - rank;
}

double strain_min_singular_value(const StrainOperator& op) {
  const Eigen::MatrixXd dense = op.dense_free_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues().minCoeff();
}

double stress_l2_error(const TriangleMesh& mesh, const Eigen::VectorXd& sigma_h,
                       const std::function<Eigen::Matrix2d(double, double)>&
                           sigma_exact) {
  // Edge-midpoint rule: exact to degree 2, weights area/3.
  double err_sq = 0.0;
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const Eigen::Vector2d p0 = mesh.vertices()[tri[0]];
    const Eigen::Vector2d p1 = mesh.vertices()[tri[1]];
    const Eigen::Vector2d p2 = mesh.vertices()[tri[2]];
    const Eigen::Vector2d mids[3] = {0.5 * (p0 + p1), 0.5 * (p1 + p2),
                                     0.5 * (p2 + p0)};
    const Eigen::Vector3d sh = sigma_h.segment<3>(3 * e);
    double acc = 0.0;
    for (const auto& mid : mids) {
      acc += (sh - mandel3(sigma_exact(mid.x(), mid.y()))).squaredNorm();
    }
    err_sq += mesh.area(e) / 3.0 * acc;
  }
  return std::sqrt(err_sq);
}

ConvergenceResult convergence_study(const ManufacturedCase& mc,
                                    const std::vector<int>& sizes,
                                    BCMode mode) {
  if (sizes.size() < 3 ||
      !std::is_sorted(sizes.begin(), sizes.end(), std::less_equal<int>())) {
    throw InputError("convergence study needs >= 3 strictly increasing sizes");
  }
  ConvergenceResult result;
  for (int m : sizes) {
    const ProblemSpec spec = make_problem(mc, m, mode);
    const StressSolution sol = mode == BCMode::DisplacementOnly
                                   ? solve_displacement_bc(spec)
                                   : solve_mixed(spec);
    ConvergenceRow row;
    row.m = m;
    row.h = 1.0 / m;
    row.error = stress_l2_error(spec.mesh, sol.sigma, mc.sigma_exact);
    result.rows.push_back(row);
  }
  result.exact = std::all_of(result.rows.begin(), result.rows.end(),
                             [](const auto& r) { return r.error <= 1e-10; });
  if (!result.exact) {
    // Least-squares slope of log(error) against log(h).
    const int n = static_cast<int>(result.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : result.rows) {
      const double lx = std::log(r.h);
      const double ly = std::log(r.error);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    result.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return result;
}

BarSolution direct_stiffness_solve(const BarFramework& fw) {
  const int n = fw.dim();
  const int nd = fw.num_dofs();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nd, nd);
  for (const auto& bar : fw.bars()) {
    const Eigen::VectorXd d =
        (fw.nodes().row(bar.j) - fw.nodes().row(bar.i)).transpose() /
        bar.length;
    const double spring = bar.stiffness / bar.length;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double v = spring * d[a] * d[b];
        K(fw.dof(bar.i, a), fw.dof(bar.i, b)) += v;
        K(fw.dof(bar.j, a), fw.dof(bar.j, b)) += v;
        K(fw.dof(bar.i, a), fw.dof(bar.j, b)) -= v;
        K(fw.dof(bar.j, a), fw.dof(bar.i, b)) -= v;
      }
    }
  }

  const auto& free = fw.free_dofs();
  const int nf = static_cast<int>(free.size());
  const Eigen::VectorXd u_pres = fw.prescribed_full();
  Eigen::MatrixXd Kff(nf, nf);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) Kff(i, j) = K(free[i], free[j]);
  }
  Eigen::VectorXd rhs = fw.load_free();
  for (int i = 0; i < nf; ++i) {
    rhs[i] -= K.row(free[i]).dot(u_pres);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(Kff);
  const Eigen::VectorXd uf = ldlt.solve(rhs);
  if (!uf.allFinite()) {
    throw MechanismPresent("direct stiffness system is singular");
  }

  BarSolution sol;
  sol.displacements = uf;
  sol.u_full = u_pres;
  for (int i = 0; i < nf; ++i) sol.u_full[free[i]] += uf[i];
  sol.tensions.resize(fw.num_bars());
  for (int b = 0; b < fw.num_bars(); ++b) {
    const auto& bar = fw.bars()[b];
    const Eigen::VectorXd d =
        (fw.nodes().row(bar.j) - fw.nodes().row(bar.i)).transpose() /
        bar.length;
    double elong = 0.0;
    for (int a = 0; a < n; ++a) {
      elong += d[a] * (sol.u_full[fw.dof(bar.j, a)] -
                       sol.u_full[fw.dof(bar.i, a)]);
    }
    sol.tensions[b] = bar.stiffness * elong / bar.length;
  }
  sol.equilibrium_residual = (Kff * uf - rhs).norm() / (1.0 + rhs.norm());
  return sol;
}

double framework_cross_check(const BarFramework& fw) {
  const BarSolution a = solve_bar_stress(fw);
  const BarSolution b = direct_stiffness_solve(fw);
  const double t_dev = (a.tensions - b.tensions).lpNorm<Eigen::Infinity>() /
                       (1.0 + b.tensions.lpNorm<Eigen::Infinity>());
  double u_dev = 0.0;
  if (a.displacements.size() > 0) {
    u_dev = (a.displacements - b.displacements).lpNorm<Eigen::Infinity>() /
            (1.0 + b.displacements.lpNorm<Eigen::Infinity>());
  }
  return std::max(t_dev, u_dev);
}

BarFramework random_triangulated_framework(std::mt19937_64& rng,
                                           int max_side) {
  std::uniform_int_distribution<int> side(2, max_side);
  std::uniform_real_distribution<double> jitter(-0.22, 0.22);
  std::uniform_real_distribution<double> stiff(0.5, 2.0);
  std::uniform_real_distribution<double> load(-1.0, 1.0);
  std::uniform_real_distribution<double> pin_value(-0.2, 0.2);
  std::bernoulli_distribution diag_flip(0.5);
  std::bernoulli_distribution with_load(0.7);

  const int w = side(rng);
  const int h = side(rng);
  const int nn = (w + 1) * (h + 1);
  Eigen::MatrixXd nodes(nn, 2);
  auto id = [&](int i, int j) { return j * (w + 1) + i; };
  for (int j = 0; j <= h; ++j) {
    for (int i = 0; i <= w; ++i) {
      nodes(id(i, j), 0) = i + (j > 0 ? jitter(rng) : 0.0);
      nodes(id(i, j), 1) = j + (j > 0 ? jitter(rng) : 0.0);
    }
  }

  std::vector<Bar> bars;
  for (int j = 0; j <= h; ++j) {
    for (int i = 0; i < w; ++i) {
      bars.push_back({id(i, j), id(i + 1, j), stiff(rng), 0.0});
    }
  }
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i <= w; ++i) {
      bars.push_back({id(i, j), id(i, j + 1), stiff(rng), 0.0});
    }
  }
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (diag_flip(rng)) {
        bars.push_back({id(i, j), id(i + 1, j + 1), stiff(rng), 0.0});
      } else {
        bars.push_back({id(i + 1, j), id(i, j + 1), stiff(rng), 0.0});
      }
    }
  }

  std::vector<PinnedDof> pins;
  for (int i = 0; i <= w; ++i) {
    pins.push_back({id(i, 0), 0, pin_value(rng)});
    pins.push_back({id(i, 0), 1, pin_value(rng)});
  }
  std::vector<DofLoad> loads;
  for (int j = 1; j <= h; ++j) {
    for (int i = 0; i <= w; ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        if (with_load(rng)) loads.push_back({id(i, j), axis, load(rng)});
      }
    }
  }
  return BarFramework(std::move(nodes), std::move(bars), std::move(pins),
                      std::move(loads));
}

BoundaryPartition random_mixed_partition(const TriangleMesh& mesh,
                                         std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  BoundaryPartition partition;
  partition.labels.resize(mesh.boundary_edges().size());
  for (auto& l : partition.labels) {
    l = coin(rng) ? EdgeLabel::Dirichlet : EdgeLabel::Traction;
  }
  const bool has_d = std::any_of(partition.labels.begin(),
                                 partition.labels.end(), [](EdgeLabel l) {
                                   return l == EdgeLabel::Dirichlet;
                                 });
  const bool has_t = std::any_of(partition.labels.begin(),
                                 partition.labels.end(), [](EdgeLabel l) {
                                   return l == EdgeLabel::Traction;
                                 });
  if (!has_d) partition.labels.front() = EdgeLabel::Dirichlet;
  if (!has_t) partition.labels.back() = EdgeLabel::Traction;
  return partition;
}

ElasticityTensor random_material(std::mt19937_64& rng) {
  std::bernoulli_distribution iso(0.5);
  if (iso(rng)) {
    std::uniform_real_distribution<double> lam(0.0, 2.0);
    std::uniform_real_distribution<double> mu(0.3, 2.0);
    return ElasticityTensor::isotropic(lam(rng), mu(rng), 2);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> eig(0.5, 5.0);
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
  }
  const Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  const Eigen::Matrix3d q = qr.householderQ();
  Eigen::Vector3d d;
  for (int i = 0; i < 3; ++i) d[i] = eig(rng);
  Eigen::Matrix3d m = q * d.asDiagonal() * q.transpose();
  m = 0.5 * (m + m.transpose()).eval();
  return ElasticityTensor::from_mandel(m);
}

namespace {

Eigen::MatrixXd dense_divergence(const StressSpace& space,
                                 const StrainOperator& op) {
  Eigen::MatrixXd d = op.dense_free_matrix().transpose();
  for (int e = 0; e < op.num_elements(); ++e) {
    d.middleCols(3 * e, 3) *= space.areas[e];
  }
  return d;  // nf x 3|T|
}

}  // namespace

Eigen::MatrixXd divergence_kernel_basis(const StressSpace& space,
                                        const StrainOperator& op,
                                        double rank_tol) {
  if (op.num_free() == 0) {
    // No admissible displacements: every stress is self-equilibrated.
    return Eigen::MatrixXd::Identity(3 * op.num_elements(),
                                     3 * op.num_elements());
  }
  const Eigen::MatrixXd d = dense_divergence(space, op);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rank_tol * sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(d.cols() - rank);
}

int image_rank(const StressSpace& space, const StrainOperator& op,
               double rank_tol) {
  if (op.num_free() == 0) return 0;
  Eigen::MatrixXd ce = op.dense_free_matrix();
  for (int e = 0; e < op.num_elements(); ++e) {
    ce.middleRows(3 * e, 3) = space.material[e] * ce.middleRows(3 * e, 3);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ce);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rank_tol * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return rank;
}

}  // namespace stresslab
