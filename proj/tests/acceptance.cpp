// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails. argv[1] must be the path to the stresslab CLI binary
// (used by the error-path criterion).

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "stresslab/builtins.hpp"
#include "stresslab/solver.hpp"
#include "stresslab/verify.hpp"

namespace {

using namespace stresslab;

constexpr double kSqrt2 = 1.4142135623730951;
constexpr std::uint64_t kSeed = kDefaultSeed;

int g_failures = 0;

void report(int criterion, bool passed, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", passed ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!passed) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Eigen::VectorXd random_stress(int elements, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd s(3 * elements);
  for (int i = 0; i < s.size(); ++i) s[i] = uni(rng);
  return s;
}

// 1. Orthogonal-complement property: random-stress decomposition and the
//    SVD rank identity dim(Im C E_h) + dim(Ker D_h) = 3 |T|.
void criterion_1() {
  std::mt19937_64 rng = audit_rng(kSeed, "acceptance_orthogonality");
  std::uniform_int_distribution<int> msize(2, 8);
  double worst = 0.0;
  bool ranks = true;
  for (int mesh_i = 0; mesh_i < 10; ++mesh_i) {
    const TriangleMesh mesh = structured_unit_square(msize(rng));
    for (int mat = 0; mat < 3; ++mat) {
      ProblemSpec spec;
      spec.mesh = mesh;
      spec.partition = random_mixed_partition(mesh, rng);
      spec.material = {random_material(rng)};
      spec.u0 = Eigen::VectorXd::Zero(2 * mesh.num_vertices());
      const StrainOperator op = assemble_strain(mesh, spec.partition);
      const StressSpace space = build_stress_space(spec);
      const StiffnessSystem system(op, space);

      const Eigen::VectorXd s = random_stress(mesh.num_triangles(), rng);
      const Eigen::VectorXd pv = project_v(system, op, space, s);
      const Eigen::VectorXd pu = s - pv;
      const double denom = std::max(
          1e-300, weighted_norm(space, pv) * weighted_norm(space, pu));
      worst = std::max(worst, std::abs(weighted_ip(space, pv, pu)) / denom);

      const int dim_u = image_rank(space, op);
      const int dim_v =
          static_cast<int>(divergence_kernel_basis(space, op).cols());
      ranks = ranks && (dim_u + dim_v == 3 * mesh.num_triangles());
    }
  }
  report(1, worst <= 1e-10 && ranks,
         "orthogonal complements: cross IP " + fmt(worst) +
             " <= 1e-10, rank sums " + (ranks ? "exact" : "WRONG") +
             " on 10 meshes x 3 materials");
}

// 2. Unique-intersection solution: projection route equals displacement
//    route; repeated solves byte-identical.
void criterion_2() {
  std::mt19937_64 rng = audit_rng(kSeed, "acceptance_intersection");
  std::uniform_int_distribution<int> msize(2, 6);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  bool bytes = true;
  for (int i = 0; i < 20; ++i) {
    ProblemSpec spec;
    spec.mesh = structured_unit_square(msize(rng));
    spec.partition = random_mixed_partition(spec.mesh, rng);
    spec.material = {random_material(rng)};
    spec.u0.resize(2 * spec.mesh.num_vertices());
    for (int k = 0; k < spec.u0.size(); ++k) spec.u0[k] = 0.3 * uni(rng);
    spec.body_force.resize(spec.mesh.num_triangles());
    for (auto& f : spec.body_force) f = Eigen::Vector2d(uni(rng), uni(rng));
    spec.traction.assign(spec.mesh.boundary_edges().size(),
                         Eigen::Vector2d::Zero());
    for (size_t k = 0; k < spec.traction.size(); ++k) {
      if (spec.partition.labels[k] == EdgeLabel::Traction) {
        spec.traction[k] = Eigen::Vector2d(uni(rng), uni(rng));
      }
    }

    const StressSolution sol = solve_mixed(spec);
    const StrainOperator op = assemble_strain(spec.mesh, spec.partition);
    const StressSpace space = build_stress_space(spec);
    Eigen::VectorXd via_u;
    kernels::apply_tensor_field(space.material, op.apply(sol.u), via_u);
    worst = std::max(worst,
                     (sol.sigma - via_u).norm() / (1.0 + via_u.norm()));

    const StressSolution again = solve_mixed(spec);
    bytes = bytes && sol.sigma.size() == again.sigma.size() &&
            std::memcmp(sol.sigma.data(), again.sigma.data(),
                        sizeof(double) * sol.sigma.size()) == 0;
  }
  report(2, worst <= 1e-10 && bytes,
         "unique intersection: route difference " + fmt(worst) +
             " <= 1e-10 on 20 problems, repeats " +
             (bytes ? "byte-identical" : "DIFFER"));
}

// 3. Patch test at every mesh size.
void criterion_3() {
  double worst = 0.0;
  for (int m = 1; m <= 8; ++m) {
    for (BCMode mode : {BCMode::Mixed, BCMode::DisplacementOnly}) {
      const ProblemSpec spec = builtins::patch(m, mode);
      const StressSolution sol = mode == BCMode::Mixed
                                     ? solve_mixed(spec)
                                     : solve_displacement_bc(spec);
      for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
        worst = std::max(worst, (sol.sigma.segment<3>(3 * e) -
                                 Eigen::Vector3d(3.0, 1.0, 0.0))
                                    .lpNorm<Eigen::Infinity>());
      }
    }
  }
  report(3, worst <= 1e-10,
         "patch test: max deviation from [[3,0],[0,1]] is " + fmt(worst) +
             " <= 1e-10 (m = 1..8, both modes)");
}

// 4. Convergence of the sine case at sizes 8, 16, 32 in both modes.
void criterion_4() {
  bool ok = true;
  std::string detail;
  for (BCMode mode : {BCMode::DisplacementOnly, BCMode::Mixed}) {
    const ConvergenceResult res =
        convergence_study(sine_case(), {8, 16, 32}, mode);
    ok = ok && !res.exact && res.rate >= 0.9 && res.rate <= 1.1;
    detail += std::string(mode == BCMode::Mixed ? "mixed " : "displacement ") +
              "rate " + fmt(res.rate) + "  ";
  }
  report(4, ok, "convergence: " + detail + "within [0.9, 1.1]");
}

// 5. Rigid-motion kernel dimensions.
void criterion_5() {
  const TriangleMesh mesh = structured_unit_square(3);
  const int unpinned = strain_kernel_dimension(assemble_strain_unpinned(mesh));
  const BoundaryPartition left =
      label_boundary(mesh, [](const Eigen::Vector2d& mid) {
        return mid.x() < 1e-12 ? EdgeLabel::Dirichlet : EdgeLabel::Traction;
      });
  const int with_edge = strain_kernel_dimension(assemble_strain(mesh, left));
  const int single =
      strain_kernel_dimension(assemble_strain_pinned_vertices(mesh, {0}));
  const bool ok = unpinned == 3 && with_edge == 0 && single == 1;
  report(5, ok,
         "rigid-motion kernel: unpinned=" + std::to_string(unpinned) +
             " (want 3), Dirichlet edge=" + std::to_string(with_edge) +
             " (want 0), single pinned vertex=" + std::to_string(single) +
             " (want 1, documented hypothesis violation)");
}

// 6. Korn audit on the m=8 square.
void criterion_6() {
  const TriangleMesh mesh = structured_unit_square(8);
  const double ratio =
      korn_audit(assemble_strain_all_pinned(mesh), mesh, 1000, kSeed);
  report(6, ratio <= kSqrt2 + 1e-12,
         "Korn: max |grad u|/|E u| = " + fmt(ratio) +
             " <= sqrt(2) + 1e-12 over 1000 fields");
}

// 7. Green's-formula residual for the built-in polynomial pairs.
void criterion_7() {
  const TriangleMesh mesh = structured_unit_square(3);
  const BoundaryPartition left =
      label_boundary(mesh, [](const Eigen::Vector2d& mid) {
        return mid.x() < 1e-12 ? EdgeLabel::Dirichlet : EdgeLabel::Traction;
      });
  const BoundaryPartition bottom =
      label_boundary(mesh, [](const Eigen::Vector2d& mid) {
        return mid.y() < 1e-12 ? EdgeLabel::Dirichlet : EdgeLabel::Traction;
      });
  auto q = [](double c0, double cx, double cy, double cxx, double cxy,
              double cyy) {
    Eigen::Matrix<double, 6, 1> c;
    c << c0, cx, cy, cxx, cxy, cyy;
    return Poly2(c);
  };
  double worst = 0.0;
  worst = std::max(worst, green_residual(
      mesh, left,
      {Poly2::constant(1.0), Poly2::constant(0.0), Poly2::constant(0.0)},
      {Poly2::linear(0, 1, 0), Poly2::constant(0.0)}));
  worst = std::max(worst, green_residual(
      mesh, left,
      {Poly2::constant(0.0), Poly2::constant(0.0), Poly2::constant(0.0)},
      {q(0, 0, 0, 1, 1, 0), Poly2::linear(0, 1, 2)}));
  worst = std::max(worst, green_residual(
      mesh, left,
      {Poly2::linear(1, 2, -1), Poly2::linear(0, 1, 1),
       Poly2::linear(0.5, -1, 2)},
      {q(0, 0, 0, 0, 1, 0), q(0, 1, 0, 1, -1, 0)}));
  worst = std::max(worst, green_residual(
      mesh, left,
      {q(1, 0, 0, 1, 0, 0), q(0, 0, 1, 0, 0, 1), q(0, 1, 1, 0, 1, 0)},
      {Poly2::linear(0, 2, 0), Poly2::linear(0, -1, 0)}));
  worst = std::max(worst, green_residual(
      mesh, bottom,
      {q(0, 1, 0, 0, 1, 1), Poly2::linear(1, -1, 0), q(0, 0, 0, 1, 0, -1)},
      {Poly2::linear(0, 0, 1), q(0, 0, 1, 0, 1, 0)}));
  report(7, worst <= 1e-12,
         "Green identity: max residual " + fmt(worst) +
             " <= 1e-12 over built-in polynomial pairs");
}

// 8. Framework FTLA and cross-checks.
void criterion_8() {
  bool ok = true;
  std::string detail;

  const BarSolution two_bar = solve_bar_stress(builtins::two_bar_truss());
  double hand_dev = 0.0;
  for (int b = 0; b < 2; ++b) {
    hand_dev = std::max(hand_dev,
                        std::abs(two_bar.tensions[b] - 1.0 / kSqrt2));
  }
  ok = ok && hand_dev <= 1e-12;
  detail += "two-bar dev " + fmt(hand_dev) + " <= 1e-12";

  std::mt19937_64 rng = audit_rng(kSeed, "acceptance_frameworks");
  double worst = 0.0;
  bool maxwell = true;
  for (int i = 0; i < 20; ++i) {
    const BarFramework fw = random_triangulated_framework(rng);
    maxwell = maxwell && classify(fw).maxwell_holds();
    worst = std::max(worst, framework_cross_check(fw));
  }
  maxwell = maxwell && classify(builtins::two_bar_truss()).maxwell_holds() &&
            classify(builtins::square_with_diagonals()).maxwell_holds() &&
            classify(builtins::square_mechanism()).maxwell_holds();
  ok = ok && worst <= 1e-9 && maxwell;
  detail += ", 20 random frameworks dev " + fmt(worst) + " <= 1e-9, Maxwell " +
            (maxwell ? "holds" : "VIOLATED");
  report(8, ok, "framework FTLA: " + detail);
}

// 9. Energy minimality of both functionals.
void criterion_9() {
  std::mt19937_64 rng = audit_rng(kSeed, "acceptance_energy");
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const ProblemSpec spec = builtins::sine(4, BCMode::Mixed);
  const StressSolution sol = solve_mixed(spec);
  const StrainOperator op = assemble_strain(spec.mesh, spec.partition);
  const StressSpace space = build_stress_space(spec);
  const Eigen::VectorXd g = assemble_shift_g(spec, op, space);
  const Eigen::MatrixXd kernel = divergence_kernel_basis(space, op);

  const double s_star = complementary_energy(space, sol.sigma, g);
  const double phi_star = potential_energy(spec, op, space, sol.u);
  bool s_min = true, phi_min = true;
  double worst_grad = 0.0;
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd coeff(kernel.cols());
    for (int i = 0; i < coeff.size(); ++i) coeff[i] = uni(rng);
    const Eigen::VectorXd tau = kernel * coeff;
    s_min = s_min && complementary_energy(space, sol.sigma + tau, g) >=
                         s_star - 1e-12 * (1.0 + std::abs(s_star));

    Eigen::VectorXd dw(op.num_free());
    for (int i = 0; i < dw.size(); ++i) dw[i] = uni(rng);
    Eigen::VectorXd du = op.expand(dw);
    phi_min = phi_min && potential_energy(spec, op, space, sol.u + du) >=
                             phi_star - 1e-12 * (1.0 + std::abs(phi_star));

    du /= du.norm();
    const double h = 1e-5;
    const double deriv =
        (potential_energy(spec, op, space, sol.u + h * du) -
         potential_energy(spec, op, space, sol.u - h * du)) /
        (2 * h);
    worst_grad = std::max(worst_grad, std::abs(deriv));
  }
  const bool ok = s_min && phi_min && worst_grad <= 1e-8;
  report(9, ok,
         std::string("energy minimality: S ") + (s_min ? "min" : "NOT MIN") +
             ", Phi " + (phi_min ? "min" : "NOT MIN") + ", FD gradient " +
             fmt(worst_grad) + " <= 1e-8");
}

// 10. Error-path behavior through the CLI.
void criterion_10(const char* cli_path) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path mesh_path = dir / "stresslab_acceptance_all_traction.mesh";
  {
    std::ofstream out(mesh_path);
    out << "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
        << "t 0 1 2\nt 0 2 3\n"
        << "bt 0 1\nbt 1 2\nbt 2 3\nbt 0 3\n";
  }
  auto exit_code = [&](const std::string& args) {
    const std::string cmd =
        std::string(cli_path) + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  const int all_traction =
      exit_code("solve --mesh " + mesh_path.string() + " --lambda 1 --mu 1");
  const int mechanism = exit_code("solve --builtin square_mechanism");
  const bool ok = all_traction == 1 && mechanism == 2;
  report(10, ok,
         "error paths: all-traction partition exits " +
             std::to_string(all_traction) + " (want 1), mechanism framework "
             "exits " + std::to_string(mechanism) + " (want 2)");
  fs::remove(mesh_path);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-stresslab-cli>\n", argv[0]);
    return 2;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(argv[1]);
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
