#pragma once

#include <string>
#include <vector>

#include "stresslab/framework.hpp"
#include "stresslab/operators.hpp"
#include "stresslab/verify.hpp"

namespace stresslab::builtins {

/// Linear-displacement patch problem: u0 = (x, 0), lambda = mu = 1, so the
/// exact stress is [[3,0],[0,1]] on every element. Mixed mode pins the left
/// edge and applies the consistent tractions sigma nu elsewhere.
ProblemSpec patch(int m = 4, BCMode mode = BCMode::Mixed);

/// Sine manufactured problem (see sine_case()).
ProblemSpec sine(int m = 8, BCMode mode = BCMode::DisplacementOnly);

/// Two pinned supports at (-1,0) and (1,0) with the loaded node hanging at
/// (0,-1) under the load (0,-1): both bar tensions equal 1/sqrt(2).
BarFramework two_bar_truss();

/// Unit square with both diagonals, base nodes pinned: rigid with exactly
/// one state of self-stress.
BarFramework square_with_diagonals();

/// Triangle with two pinned corners: statically determinate, (0, 0).
BarFramework triangle_pinned();

/// Unbraced square with pinned base: one shear mechanism; solving it fails
/// with MechanismPresent.
BarFramework square_mechanism();

inline const std::vector<std::string>& mesh_problem_names() {
  static const std::vector<std::string> names = {"patch", "sine"};
  return names;
}
inline const std::vector<std::string>& framework_names() {
  static const std::vector<std::string> names = {
      "two_bar_truss", "square_diagonals", "triangle_pinned",
      "square_mechanism"};
  return names;
}

bool is_mesh_problem(const std::string& name);
bool is_framework(const std::string& name);

ProblemSpec mesh_problem_by_name(const std::string& name, int m, BCMode mode);
BarFramework framework_by_name(const std::string& name);

}  // namespace stresslab::builtins
