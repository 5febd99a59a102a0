#include "stresslab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "stresslab/builtins.hpp"
#include "stresslab/records.hpp"
#include "stresslab/solver.hpp"

namespace stresslab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ElasticityTensor load_material(const RunConfig& config) {
  if (!config.material_path.empty()) {
    std::istringstream in(read_file(config.material_path));
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (!(in >> m(i, j))) {
          throw InputError("material file must hold 9 numbers (3x3 Mandel "
                           "matrix, row-major)");
        }
      }
    }
    return ElasticityTensor::from_mandel(m);
  }
  return ElasticityTensor::isotropic(config.lambda, config.mu, 2);
}

ProblemSpec spec_from_mesh_file(const RunConfig& config) {
  auto [mesh, partition] =
      parse_mesh(read_file(config.mesh_path), config.fix_orientation);
  ProblemSpec spec;
  spec.mesh = std::move(mesh);
  spec.partition = std::move(partition);
  spec.mode = config.mode;
  spec.material = {load_material(config)};
  spec.u0.resize(2 * spec.mesh.num_vertices());
  for (int v = 0; v < spec.mesh.num_vertices(); ++v) {
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    if (config.have_u0) {
      u = config.u0_matrix * spec.mesh.vertices()[v] + config.u0_offset;
    }
    spec.u0[2 * v] = u.x();
    spec.u0[2 * v + 1] = u.y();
  }
  if (!config.body_force.isZero(0.0)) {
    spec.body_force = {config.body_force};
  }
  spec.traction.assign(spec.mesh.boundary_edges().size(), config.traction);
  return spec;
}

void write_output(const RunConfig& config, const std::string& text,
                  std::ostream& out) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + config.out_path + "'");
  file << text;
}

int solve_mesh_problem(const RunConfig& config, const ProblemSpec& spec,
                       std::ostream& out) {
  const StressSolution sol = config.mode == BCMode::Mixed
                                 ? solve_mixed(spec)
                                 : solve_displacement_bc(spec);
  std::string text;
  if (config.format == "records") {
    RecordWriter w;
    w.begin("solve_summary");
    w.field("mode", config.mode == BCMode::Mixed
                        ? std::string("mixed")
                        : std::string("displacement"));
    w.field("vertices", spec.mesh.num_vertices());
    w.field("triangles", spec.mesh.num_triangles());
    w.field("equilibrium_residual", sol.diagnostics.equilibrium_residual);
    w.field("orthogonality_residual", sol.diagnostics.orthogonality_residual);
    w.field("complementary_energy", sol.diagnostics.complementary_energy);
    w.field("potential_energy", sol.diagnostics.potential_energy);
    for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
      w.begin("element_stress");
      w.field("element", e);
      w.field("sigma_xx", sol.sigma[3 * e]);
      w.field("sigma_yy", sol.sigma[3 * e + 1]);
      w.field("sigma_xy_mandel", sol.sigma[3 * e + 2]);
    }
    for (int v = 0; v < spec.mesh.num_vertices(); ++v) {
      w.begin("vertex_displacement");
      w.field("vertex", v);
      w.field("ux", sol.u[2 * v]);
      w.field("uy", sol.u[2 * v + 1]);
    }
    text = w.str();
  } else {
    std::ostringstream ss;
    ss << "solved " << spec.mesh.num_triangles() << " elements, "
       << spec.mesh.num_vertices() << " vertices\n"
       << "  equilibrium residual:   "
       << format_double(sol.diagnostics.equilibrium_residual) << "\n"
       << "  orthogonality residual: "
       << format_double(sol.diagnostics.orthogonality_residual) << "\n"
       << "  complementary energy:   "
       << format_double(sol.diagnostics.complementary_energy) << "\n"
       << "  potential energy:       "
       << format_double(sol.diagnostics.potential_energy) << "\n"
       << "element stresses (Mandel sigma_xx sigma_yy sqrt2*sigma_xy):\n";
    for (int e = 0; e < spec.mesh.num_triangles(); ++e) {
      ss << "  " << e << ": " << format_double(sol.sigma[3 * e]) << " "
         << format_double(sol.sigma[3 * e + 1]) << " "
         << format_double(sol.sigma[3 * e + 2]) << "\n";
    }
    text = ss.str();
  }
  write_output(config, text, out);
  return 0;
}

int solve_framework_problem(const RunConfig& config, const BarFramework& fw,
                            std::ostream& out) {
  const BarSolution sol = solve_bar_stress(fw, config.tol_rank);
  std::string text;
  if (config.format == "records") {
    RecordWriter w;
    w.begin("framework_solve_summary");
    w.field("nodes", fw.num_nodes());
    w.field("bars", fw.num_bars());
    w.field("equilibrium_residual", sol.equilibrium_residual);
    for (int b = 0; b < fw.num_bars(); ++b) {
      w.begin("bar_tension");
      w.field("bar", b);
      w.field("tension", sol.tensions[b]);
    }
    for (int v = 0; v < fw.num_nodes(); ++v) {
      w.begin("node_displacement");
      w.field("node", v);
      w.field("ux", sol.u_full[fw.dof(v, 0)]);
      w.field("uy", sol.u_full[fw.dof(v, 1)]);
    }
    text = w.str();
  } else {
    std::ostringstream ss;
    ss << "solved framework: " << fw.num_nodes() << " nodes, " << fw.num_bars()
       << " bars\n"
       << "  equilibrium residual: "
       << format_double(sol.equilibrium_residual) << "\n"
       << "bar tensions:\n";
    for (int b = 0; b < fw.num_bars(); ++b) {
      ss << "  " << b << ": " << format_double(sol.tensions[b]) << "\n";
    }
    text = ss.str();
  }
  write_output(config, text, out);
  return 0;
}

int run_classify(const RunConfig& config, const BarFramework& fw,
                 std::ostream& out) {
  const Classification cls = classify(fw, config.tol_rank);
  std::string text;
  if (config.format == "records") {
    RecordWriter w;
    w.begin("classification");
    w.field("mechanisms", cls.mechanisms);
    w.field("self_stresses", cls.self_stresses);
    w.field("free_dofs", cls.free_dof_count);
    w.field("active_bars", cls.active_bar_count);
    w.field("maxwell_holds", cls.maxwell_holds());
    text = w.str();
  } else {
    std::ostringstream ss;
    ss << "mechanisms: " << cls.mechanisms
       << ", self_stresses: " << cls.self_stresses << "\n";
    text = ss.str();
  }
  write_output(config, text, out);
  return 0;
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const std::vector<AuditResult> results = run_audit_suite(config.seed);
  std::string text;
  if (config.format == "records") {
    RecordWriter w;
    for (const auto& r : results) {
      w.begin("audit");
      w.field("name", r.name);
      w.field("passed", r.passed);
      w.field("value", r.value);
      w.field("threshold", r.threshold);
      w.field("seed", config.seed);
      w.field("detail", r.detail);
    }
    // Discrete constant of the Korn-derived lower bound, reported per size.
    for (int m : {2, 4, 8}) {
      const TriangleMesh mesh = structured_unit_square(m);
      const BoundaryPartition left =
          label_boundary(mesh, [](const Eigen::Vector2d& mid) {
            return mid.x() < 1e-12 ? EdgeLabel::Dirichlet
                                   : EdgeLabel::Traction;
          });
      const double smin =
          strain_min_singular_value(assemble_strain(mesh, left));
      w.begin("korn_bound_constant");
      w.field("m", m);
      w.field("sigma_min", smin);
      w.field("constant", 1.0 / smin);
    }
    text = w.str();
  } else {
    std::ostringstream ss;
    for (const auto& r : results) {
      ss << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": value "
         << format_double(r.value) << " vs bound " << format_double(r.threshold)
         << " (" << r.detail << ", seed " << config.seed << ")\n";
    }
    text = ss.str();
  }
  write_output(config, text, out);
  const bool all = std::all_of(results.begin(), results.end(),
                               [](const AuditResult& r) { return r.passed; });
  return all ? 0 : 3;
}

int run_convergence(const RunConfig& config, std::ostream& out) {
  ManufacturedCase mc;
  if (config.builtin.empty() || config.builtin == "sine") {
    mc = sine_case();
  } else if (config.builtin == "patch") {
    mc = patch_case();
  } else {
    throw InputError("convergence supports builtins 'sine' and 'patch'");
  }
  certify_manufactured(mc, 200, config.seed);
  const ConvergenceResult res =
      convergence_study(mc, config.sizes, config.mode);

  std::string text;
  if (config.format == "records") {
    RecordWriter w;
    w.begin("convergence_summary");
    w.field("case", mc.name);
    w.field("mode", config.mode == BCMode::Mixed
                        ? std::string("mixed")
                        : std::string("displacement"));
    w.field("exact", res.exact);
    w.field("rate", res.rate);
    for (const auto& row : res.rows) {
      w.begin("convergence_row");
      w.field("m", row.m);
      w.field("h", row.h);
      w.field("stress_l2_error", row.error);
    }
    text = w.str();
  } else {
    std::ostringstream ss;
    ss << "case " << mc.name << ":\n";
    for (const auto& row : res.rows) {
      ss << "  m=" << row.m << "  h=" << format_double(row.h) << "  error="
         << format_double(row.error) << "\n";
    }
    if (res.exact) {
      ss << "rate: exact (errors at solver precision)\n";
    } else {
      ss << "rate: " << format_double(res.rate) << "\n";
    }
    text = ss.str();
  }
  write_output(config, text, out);
  return 0;
}

int dispatch(const RunConfig& config, std::ostream& out) {
  const int n_inputs = (config.mesh_path.empty() ? 0 : 1) +
                       (config.framework_path.empty() ? 0 : 1) +
                       (config.builtin.empty() ? 0 : 1);
  switch (config.command) {
    case RunConfig::Command::Verify:
      return run_verify(config, out);
    case RunConfig::Command::Convergence:
      return run_convergence(config, out);
    case RunConfig::Command::Classify: {
      if (n_inputs != 1) {
        throw InputError("classify needs exactly one of --framework/--builtin");
      }
      BarFramework fw = config.framework_path.empty()
                            ? builtins::framework_by_name(config.builtin)
                            : parse_framework(read_file(config.framework_path));
      return run_classify(config, fw, out);
    }
    case RunConfig::Command::Solve: {
      if (n_inputs != 1) {
        throw InputError(
            "solve needs exactly one of --mesh/--framework/--builtin");
      }
      if (!config.framework_path.empty()) {
        return solve_framework_problem(
            config, parse_framework(read_file(config.framework_path)), out);
      }
      if (!config.builtin.empty()) {
        if (builtins::is_framework(config.builtin)) {
          return solve_framework_problem(
              config, builtins::framework_by_name(config.builtin), out);
        }
        const int m = config.mesh_size > 0 ? config.mesh_size : 4;
        return solve_mesh_problem(
            config,
            builtins::mesh_problem_by_name(config.builtin, m, config.mode),
            out);
      }
      return solve_mesh_problem(config, spec_from_mesh_file(config), out);
    }
  }
  throw InputError("unknown command");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(config, out);
  } catch (const SolveError& e) {
    err << "solve error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace stresslab
