#include "stresslab/builtins.hpp"

#include <algorithm>

namespace stresslab::builtins {

ProblemSpec patch(int m, BCMode mode) { return make_problem(patch_case(), m, mode); }

ProblemSpec sine(int m, BCMode mode) { return make_problem(sine_case(), m, mode); }

BarFramework two_bar_truss() {
  Eigen::MatrixXd nodes(3, 2);
  nodes << -1.0, 0.0, 1.0, 0.0, 0.0, -1.0;
  std::vector<Bar> bars = {{0, 2, 1.0, 0.0}, {1, 2, 1.0, 0.0}};
  std::vector<PinnedDof> pins = {{0, 0, 0.0}, {0, 1, 0.0}, {1, 0, 0.0},
                                 {1, 1, 0.0}};
  std::vector<DofLoad> loads = {{2, 1, -1.0}};
  return BarFramework(std::move(nodes), std::move(bars), std::move(pins),
                      std::move(loads));
}

BarFramework square_with_diagonals() {
  Eigen::MatrixXd nodes(4, 2);
  nodes << 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
  std::vector<Bar> bars = {{0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0},
                           {2, 3, 1.0, 0.0}, {3, 0, 1.0, 0.0},
                           {0, 2, 1.0, 0.0}, {1, 3, 1.0, 0.0}};
  std::vector<PinnedDof> pins = {{0, 0, 0.0}, {0, 1, 0.0}, {1, 0, 0.0},
                                 {1, 1, 0.0}};
  return BarFramework(std::move(nodes), std::move(bars), std::move(pins), {});
}

BarFramework triangle_pinned() {
  Eigen::MatrixXd nodes(3, 2);
  nodes << 0.0, 0.0, 1.0, 0.0, 0.5, 0.8660254037844386;
  std::vector<Bar> bars = {{0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0},
                           {2, 0, 1.0, 0.0}};
  std::vector<PinnedDof> pins = {{0, 0, 0.0}, {0, 1, 0.0}, {1, 0, 0.0},
                                 {1, 1, 0.0}};
  std::vector<DofLoad> loads = {{2, 1, -1.0}};
  return BarFramework(std::move(nodes), std::move(bars), std::move(pins),
                      std::move(loads));
}

BarFramework square_mechanism() {
  Eigen::MatrixXd nodes(4, 2);
  nodes << 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
  std::vector<Bar> bars = {{0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0},
                           {2, 3, 1.0, 0.0}, {3, 0, 1.0, 0.0}};
  std::vector<PinnedDof> pins = {{0, 0, 0.0}, {0, 1, 0.0}, {1, 0, 0.0},
                                 {1, 1, 0.0}};
  std::vector<DofLoad> loads = {{2, 0, 1.0}};
  return BarFramework(std::move(nodes), std::move(bars), std::move(pins),
                      std::move(loads));
}

bool is_mesh_problem(const std::string& name) {
  const auto& names = mesh_problem_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_framework(const std::string& name) {
  const auto& names = framework_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ProblemSpec mesh_problem_by_name(const std::string& name, int m, BCMode mode) {
  if (name == "patch") return patch(m, mode);
  if (name == "sine") return sine(m, mode);
  throw InputError("unknown builtin mesh problem '" + name + "'");
}

BarFramework framework_by_name(const std::string& name) {
  if (name == "two_bar_truss") return two_bar_truss();
  if (name == "square_diagonals") return square_with_diagonals();
  if (name == "triangle_pinned") return triangle_pinned();
  if (name == "square_mechanism") return square_mechanism();
  throw InputError("unknown builtin framework '" + name + "'");
}

}  // namespace stresslab::builtins
