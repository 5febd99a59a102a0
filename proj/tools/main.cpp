#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "stresslab/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, stresslab::RunConfig& config) {
  cmd->add_option("--seed", config.seed, "RNG seed for randomized audits");
  cmd->add_option("--tol-rank", config.tol_rank,
                  "relative singular-value threshold for rank decisions")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", config.format, "output format")
      ->check(CLI::IsMember({"human", "records"}));
  cmd->add_option("--out", config.out_path, "write output to a file");
}

void add_material_flags(CLI::App* cmd, stresslab::RunConfig& config) {
  cmd->add_option("--lambda", config.lambda, "first Lame parameter");
  cmd->add_option("--mu", config.mu, "shear modulus");
  cmd->add_option("--material", config.material_path,
                  "file with a 3x3 SPD Mandel matrix (row-major)");
}

void add_mode_flag(CLI::App* cmd, stresslab::RunConfig& config,
                   std::string& mode_name) {
  cmd->add_option("--mode", mode_name, "boundary-condition mode")
      ->check(CLI::IsMember({"mixed", "displacement"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stress-first linear elasticity on triangle meshes and bar "
               "frameworks"};
  app.require_subcommand(1);

  stresslab::RunConfig config;
  std::string mode_name = "mixed";
  std::vector<double> u0_affine;
  std::vector<double> body_force;
  std::vector<double> traction;

  auto* solve = app.add_subcommand("solve", "solve a stress problem");
  solve->add_option("--mesh", config.mesh_path, "mesh file");
  solve->add_option("--framework", config.framework_path, "framework file");
  solve->add_option("--builtin", config.builtin, "built-in problem name");
  solve->add_option("--m", config.mesh_size,
                    "subdivisions for built-in mesh problems")
      ->check(CLI::PositiveNumber);
  add_material_flags(solve, config);
  add_mode_flag(solve, config, mode_name);
  solve->add_option("--body-force", body_force,
                    "constant body force fx,fy")
      ->delimiter(',')
      ->expected(2);
  solve->add_option("--traction", traction,
                    "constant traction tx,ty on every traction edge")
      ->delimiter(',')
      ->expected(2);
  solve->add_option("--u0-affine", u0_affine,
                    "Dirichlet datum u0 = A x + b as a11,a12,a21,a22,b1,b2")
      ->delimiter(',')
      ->expected(6);
  solve->add_flag("--fix-orientation", config.fix_orientation,
                  "silently reorient clockwise triangles");
  add_common_flags(solve, config);

  auto* classify =
      app.add_subcommand("classify", "count mechanisms and self-stresses");
  classify->add_option("--framework", config.framework_path, "framework file");
  classify->add_option("--builtin", config.builtin, "built-in framework name");
  add_common_flags(classify, config);

  auto* verify = app.add_subcommand("verify", "run the full audit suite");
  add_common_flags(verify, config);

  auto* convergence =
      app.add_subcommand("convergence", "manufactured-solution rate study");
  convergence->add_option("--builtin", config.builtin,
                          "manufactured case: sine (default) or patch");
  convergence->add_option("--sizes", config.sizes,
                          "mesh sizes, e.g. 8,16,32")
      ->delimiter(',');
  add_mode_flag(convergence, config, mode_name);
  add_common_flags(convergence, config);

  CLI11_PARSE(app, argc, argv);

  config.mode = mode_name == "displacement"
                    ? stresslab::BCMode::DisplacementOnly
                    : stresslab::BCMode::Mixed;
  if (solve->parsed()) config.command = stresslab::RunConfig::Command::Solve;
  if (classify->parsed())
    config.command = stresslab::RunConfig::Command::Classify;
  if (verify->parsed()) config.command = stresslab::RunConfig::Command::Verify;
  if (convergence->parsed())
    config.command = stresslab::RunConfig::Command::Convergence;

  if (!u0_affine.empty()) {
    config.have_u0 = true;
    config.u0_matrix << u0_affine[0], u0_affine[1], u0_affine[2], u0_affine[3];
    config.u0_offset << u0_affine[4], u0_affine[5];
  }
  if (!body_force.empty()) {
    config.body_force << body_force[0], body_force[1];
  }
  if (!traction.empty()) {
    config.traction << traction[0], traction[1];
  }

  return stresslab::run(config, std::cout, std::cerr);
}
