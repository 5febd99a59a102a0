#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stresslab/mesh.hpp"
#include "stresslab/verify.hpp"

namespace stresslab {

/// Parsed command-line configuration. Exit codes of run():
///   0 success, 1 input error, 2 solve failure, 3 audit failure.
struct RunConfig {
  enum class Command { Solve, Classify, Verify, Convergence };
  Command command = Command::Solve;

  std::string mesh_path;
  std::string framework_path;
  std::string builtin;

  double lambda = 1.0;
  double mu = 1.0;
  std::string material_path;  // overrides lambda/mu with a Mandel matrix

  BCMode mode = BCMode::Mixed;
  std::uint64_t seed = kDefaultSeed;
  double tol_rank = 1e-9;
  std::string format = "human";  // human | records
  std::string out_path;          // empty: stdout
  bool fix_orientation = false;

  int mesh_size = 0;  // builtin mesh subdivisions; 0 = builtin default
  std::vector<int> sizes = {8, 16, 32};

  Eigen::Vector2d body_force = Eigen::Vector2d::Zero();
  Eigen::Vector2d traction = Eigen::Vector2d::Zero();
  // Affine Dirichlet datum u0(x) = A x + b for mesh-file inputs.
  bool have_u0 = false;
  Eigen::Matrix2d u0_matrix = Eigen::Matrix2d::Zero();
  Eigen::Vector2d u0_offset = Eigen::Vector2d::Zero();
};

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace stresslab
