#include "stresslab/framework.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cstdio>
#include <sstream>

namespace stresslab {

BarFramework::BarFramework(Eigen::MatrixXd nodes, std::vector<Bar> bars,
                           std::vector<PinnedDof> pins,
                           std::vector<DofLoad> loads)
    : nodes_(std::move(nodes)),
      bars_(std::move(bars)),
      pins_(std::move(pins)),
      loads_(std::move(loads)) {
  const int n = dim();
  if (n < 2) throw InputError("framework dimension must be >= 2");
  if (num_nodes() < 2) throw InputError("framework needs at least 2 nodes");
  if (bars_.empty()) throw InputError("framework needs at least 1 bar");

  for (auto& b : bars_) {
    if (b.i < 0 || b.i >= num_nodes() || b.j < 0 || b.j >= num_nodes()) {
      throw InputError("bar references a node out of range");
    }
    if (b.i == b.j) throw DegenerateBar("bar is a self-loop");
    if (!(b.stiffness > 0.0)) throw InputError("bar stiffness must be > 0");
    b.length = (nodes_.row(b.j) - nodes_.row(b.i)).norm();
    if (!(b.length > 0.0)) {
      throw DegenerateBar("bar endpoints coincide (zero length)");
    }
  }

  pinned_.assign(num_dofs(), 0);
  prescribed_.assign(num_dofs(), 0.0);
  for (const auto& p : pins_) {
    if (p.node < 0 || p.node >= num_nodes() || p.axis < 0 || p.axis >= n) {
      throw InputError("pin references a dof out of range");
    }
    const int d = dof(p.node, p.axis);
    if (pinned_[d]) throw InputError("dof pinned twice");
    pinned_[d] = 1;
    prescribed_[d] = p.value;
  }
  for (const auto& l : loads_) {
    if (l.node < 0 || l.node >= num_nodes() || l.axis < 0 || l.axis >= n) {
      throw InputError("load references a dof out of range");
    }
    if (pinned_[dof(l.node, l.axis)]) {
      throw InputError("load applied to a pinned dof");
    }
  }
  free_index_.assign(num_dofs(), -1);
  for (int d = 0; d < num_dofs(); ++d) {
    if (!pinned_[d]) {
      free_index_[d] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(d);
    }
  }
}

Eigen::VectorXd BarFramework::prescribed_full() const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(num_dofs());
  for (int d = 0; d < num_dofs(); ++d) u[d] = prescribed_[d];
  return u;
}

Eigen::VectorXd BarFramework::load_free() const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(num_free());
  for (const auto& l : loads_) {
    f[free_index_[dof(l.node, l.axis)]] += l.value;
  }
  return f;
}

bool BarFramework::bar_is_active(int b) const {
  const auto& bar = bars_[b];
  for (int axis = 0; axis < dim(); ++axis) {
    if (!is_pinned(dof(bar.i, axis)) || !is_pinned(dof(bar.j, axis))) {
      return true;
    }
  }
  return false;
}

Eigen::SparseMatrix<double> compatibility_matrix(const BarFramework& fw) {
  const int n = fw.dim();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * n * fw.num_bars());
  for (int b = 0; b < fw.num_bars(); ++b) {
    const auto& bar = fw.bars()[b];
    const Eigen::VectorXd d =
        (fw.nodes().row(bar.j) - fw.nodes().row(bar.i)).transpose() /
        bar.length;
    for (int axis = 0; axis < n; ++axis) {
      triplets.emplace_back(b, fw.dof(bar.i, axis), -d[axis] / bar.length);
      triplets.emplace_back(b, fw.dof(bar.j, axis), d[axis] / bar.length);
    }
  }
  Eigen::SparseMatrix<double> m(fw.num_bars(), fw.num_dofs());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::SparseMatrix<double> equilibrium_matrix(const BarFramework& fw) {
  const int n = fw.dim();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * n * fw.num_bars());
  for (int b = 0; b < fw.num_bars(); ++b) {
    const auto& bar = fw.bars()[b];
    const Eigen::VectorXd d =
        (fw.nodes().row(bar.j) - fw.nodes().row(bar.i)).transpose() /
        bar.length;
    for (int axis = 0; axis < n; ++axis) {
      const int di = fw.free_index(fw.dof(bar.i, axis));
      const int dj = fw.free_index(fw.dof(bar.j, axis));
      if (di >= 0) triplets.emplace_back(di, b, -d[axis]);
      if (dj >= 0) triplets.emplace_back(dj, b, d[axis]);
    }
  }
  Eigen::SparseMatrix<double> m(fw.num_free(), fw.num_bars());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::MatrixXd rigid_motion_basis(const Eigen::MatrixXd& nodes, int dim) {
  if (dim < 2) throw InputError("rigid motions need dim >= 2");
  const int nn = static_cast<int>(nodes.rows());
  const int cols = dim + dim * (dim - 1) / 2;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(nn * dim, cols);
  for (int axis = 0; axis < dim; ++axis) {
    for (int v = 0; v < nn; ++v) basis(v * dim + axis, axis) = 1.0;
  }
  int col = dim;
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q, ++col) {
      // Skew generator: (Bx)_p = -x_q, (Bx)_q = x_p.
      for (int v = 0; v < nn; ++v) {
        basis(v * dim + p, col) = -nodes(v, q);
        basis(v * dim + q, col) = nodes(v, p);
      }
    }
  }
  return basis;
}

namespace {

int kernel_dimension(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) return static_cast<int>(m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return static_cast<int>(m.cols()) - rank;
}

}  // namespace

Classification classify(const BarFramework& fw, double rank_tol) {
  Classification result;
  result.free_dof_count = fw.num_free();

  const Eigen::MatrixXd compat = Eigen::MatrixXd(compatibility_matrix(fw));
  Eigen::MatrixXd compat_free(fw.num_bars(), fw.num_free());
  for (int i = 0; i < fw.num_free(); ++i) {
    compat_free.col(i) = compat.col(fw.free_dofs()[i]);
  }
  result.mechanisms = kernel_dimension(compat_free, rank_tol);

  std::vector<int> active;
  for (int b = 0; b < fw.num_bars(); ++b) {
    if (fw.bar_is_active(b)) active.push_back(b);
  }
  result.active_bar_count = static_cast<int>(active.size());
  const Eigen::MatrixXd equil = Eigen::MatrixXd(equilibrium_matrix(fw));
  Eigen::MatrixXd equil_active(fw.num_free(), active.size());
  for (size_t c = 0; c < active.size(); ++c) {
    equil_active.col(c) = equil.col(active[c]);
  }
  result.self_stresses = kernel_dimension(equil_active, rank_tol);
  return result;
}

BarSolution solve_bar_stress(const BarFramework& fw, double rank_tol) {
  const Classification cls = classify(fw, rank_tol);
  if (cls.mechanisms > 0) {
    throw MechanismPresent("framework has " +
                           std::to_string(cls.mechanisms) +
                           " mechanism(s): the lift Q is undefined");
  }

  const Eigen::SparseMatrix<double> compat = compatibility_matrix(fw);
  Eigen::VectorXd stiffness(fw.num_bars()), lengths(fw.num_bars());
  for (int b = 0; b < fw.num_bars(); ++b) {
    stiffness[b] = fw.bars()[b].stiffness;
    lengths[b] = fw.bars()[b].length;
  }

  // Free-column restriction of the compatibility matrix.
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < compat.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(compat, k); it; ++it) {
      const int fi = fw.free_index(static_cast<int>(it.col()));
      if (fi >= 0) {
        triplets.emplace_back(static_cast<int>(it.row()), fi, it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> compat_free(fw.num_bars(), fw.num_free());
  compat_free.setFromTriplets(triplets.begin(), triplets.end());

  // K = B_f^T diag(k L) B_f: the reduced stiffness system.
  const Eigen::SparseMatrix<double> K =
      compat_free.transpose() *
      Eigen::SparseMatrix<double>(
          (stiffness.array() * lengths.array()).matrix().asDiagonal()) *
      compat_free;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw MechanismPresent("reduced stiffness is not positive definite");
  }

  // g: tension field induced by the prescribed pin displacements.
  const Eigen::VectorXd g =
      stiffness.asDiagonal() * (compat * fw.prescribed_full());
  const Eigen::VectorXd f = fw.load_free();

  // Adjoint of the weighted compatibility map: D = B_f^T diag(L).
  auto adjoint = [&](const Eigen::VectorXd& t) {
    return Eigen::VectorXd(compat_free.transpose() *
                           (lengths.asDiagonal() * t));
  };
  auto refine_solve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = ldlt.solve(rhs);
    for (int it = 0; it < 3; ++it) {
      const Eigen::VectorXd r = rhs - K * x;
      if (r.norm() <= 1e-13 * (1.0 + rhs.norm())) break;
      x += ldlt.solve(r);
    }
    return x;
  };

  const Eigen::VectorXd w1 = refine_solve(adjoint(g));   // projection part
  const Eigen::VectorXd w2 = refine_solve(f);            // lift part
  auto tension_of = [&](const Eigen::VectorXd& free_u) {
    return Eigen::VectorXd(stiffness.asDiagonal() * (compat_free * free_u));
  };

  BarSolution sol;
  sol.tensions = g - tension_of(w1) + tension_of(w2);  // P_V g + Q f
  sol.displacements = w2 - w1;
  sol.u_full = fw.prescribed_full();
  for (int i = 0; i < fw.num_free(); ++i) {
    sol.u_full[fw.free_dofs()[i]] += sol.displacements[i];
  }
  sol.equilibrium_residual =
      (adjoint(sol.tensions) - f).norm() / (1.0 + f.norm());
  return sol;
}

BarFramework parse_framework(std::string_view text) {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<Bar> bars;
  std::vector<PinnedDof> pins;
  std::vector<DofLoad> loads;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto parse_axis = [&](const std::string& tok) {
    if (tok == "x" || tok == "0") return 0;
    if (tok == "y" || tok == "1") return 1;
    throw ParseError(lineno, 1, "axis must be x, y, 0 or 1");
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "node") {
      double x, y;
      if (!(ls >> x >> y)) throw ParseError(lineno, 1, "node needs x y");
      nodes.emplace_back(x, y);
    } else if (tag == "bar") {
      int i, j;
      double k;
      if (!(ls >> i >> j >> k)) throw ParseError(lineno, 1, "bar needs i j k");
      bars.push_back({i, j, k, 0.0});
    } else if (tag == "pin") {
      int node;
      std::string axis;
      if (!(ls >> node >> axis)) {
        throw ParseError(lineno, 1, "pin needs node axis [value]");
      }
      double value = 0.0;
      ls >> value;  // optional
      pins.push_back({node, parse_axis(axis), value});
    } else if (tag == "load") {
      int node;
      std::string axis;
      double value;
      if (!(ls >> node >> axis >> value)) {
        throw ParseError(lineno, 1, "load needs node axis value");
      }
      loads.push_back({node, parse_axis(axis), value});
    } else {
      throw ParseError(lineno, 1, "unknown directive '" + tag + "'");
    }
  }
  if (nodes.empty()) throw ParseError(lineno, 1, "framework has no nodes");
  Eigen::MatrixXd coords(nodes.size(), 2);
  for (size_t v = 0; v < nodes.size(); ++v) coords.row(v) = nodes[v];
  return BarFramework(std::move(coords), std::move(bars), std::move(pins),
                      std::move(loads));
}

std::string emit_framework(const BarFramework& fw) {
  if (fw.dim() != 2) {
    throw InputError("framework text format is 2-D only");
  }
  std::string out;
  char buf[160];
  for (int v = 0; v < fw.num_nodes(); ++v) {
    std::snprintf(buf, sizeof buf, "node %.17g %.17g\n", fw.nodes()(v, 0),
                  fw.nodes()(v, 1));
    out += buf;
  }
  for (const auto& b : fw.bars()) {
    std::snprintf(buf, sizeof buf, "bar %d %d %.17g\n", b.i, b.j, b.stiffness);
    out += buf;
  }
  for (const auto& p : fw.pins()) {
    std::snprintf(buf, sizeof buf, "pin %d %d %.17g\n", p.node, p.axis,
                  p.value);
    out += buf;
  }
  for (const auto& l : fw.loads()) {
    std::snprintf(buf, sizeof buf, "load %d %d %.17g\n", l.node, l.axis,
                  l.value);
    out += buf;
  }
  return out;
}

}  // namespace stresslab
