#include "stresslab/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace stresslab {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

struct UnionFind {
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

std::pair<int, int> undirected(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

TriangleMesh TriangleMesh::from_data(std::vector<Eigen::Vector2d> vertices,
                                     std::vector<std::array<int, 3>> triangles,
                                     bool fix_orientation) {
  TriangleMesh mesh;
  const int nv = static_cast<int>(vertices.size());
  const int nt = static_cast<int>(triangles.size());
  if (nv < 3 || nt < 1) {
    throw InputError("mesh needs at least 3 vertices and 1 triangle");
  }

  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = triangles[t][k];
      if (v < 0 || v >= nv) {
        throw InputError("triangle " + std::to_string(t) +
                         " references vertex " + std::to_string(v) +
                         " out of range");
      }
    }
    const auto& tri = triangles[t];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw OrientationError("triangle " + std::to_string(t) +
                             " has a repeated vertex");
    }
  }

  Eigen::VectorXd areas(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = triangles[t];
    double a = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    if (a < 0.0 && fix_orientation) {
      std::swap(tri[1], tri[2]);
      a = -a;
    }
    if (!(a > 0.0)) {
      throw OrientationError("triangle " + std::to_string(t) +
                             " is not counterclockwise (signed area " +
                             std::to_string(a) + ")");
    }
    areas[t] = a;
  }

  // Count directed edge usage; a manifold interior edge is traversed once in
  // each direction, a boundary edge once in total.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_use;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      edge_use[undirected(tri[k], tri[(k + 1) % 3])].emplace_back(t, k);
    }
  }

  UnionFind uf(nt);
  for (const auto& [edge, users] : edge_use) {
    if (users.size() > 2) {
      throw NonManifoldEdge("edge (" + std::to_string(edge.first) + ", " +
                            std::to_string(edge.second) + ") is shared by " +
                            std::to_string(users.size()) + " triangles");
    }
    if (users.size() == 2) uf.unite(users[0].first, users[1].first);
  }
  for (int t = 1; t < nt; ++t) {
    if (uf.find(t) != uf.find(0)) {
      throw DisconnectedMesh("mesh is not edge-connected");
    }
  }

  std::vector<char> used(nv, 0);
  for (const auto& tri : triangles) {
    for (int v : tri) used[v] = 1;
  }
  for (int v = 0; v < nv; ++v) {
    if (!used[v]) {
      throw DisconnectedMesh("vertex " + std::to_string(v) +
                             " is not part of any triangle");
    }
  }

  // Boundary edges in deterministic (triangle, local edge) order.
  std::vector<BoundaryEdge> boundary;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (edge_use[undirected(a, b)].size() == 1) {
        BoundaryEdge e;
        e.a = a;
        e.b = b;
        e.triangle = t;
        const Eigen::Vector2d d = vertices[b] - vertices[a];
        e.length = d.norm();
        if (!(e.length > 0.0)) {
          throw OrientationError("zero-length boundary edge");
        }
        // CCW traversal keeps the interior on the left, so the outward
        // normal is the direction rotated by -90 degrees.
        e.normal = Eigen::Vector2d(d.y(), -d.x()) / e.length;
        boundary.push_back(e);
      }
    }
  }

  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.boundary_edges_ = std::move(boundary);
  mesh.areas_ = std::move(areas);
  return mesh;
}

Eigen::Vector2d TriangleMesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

TriangleMesh structured_unit_square(int m) {
  if (m < 1) throw InputError("subdivision count must be >= 1");
  const double h = 1.0 / m;
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve((m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      vertices.emplace_back(i * h, j * h);
    }
  }
  auto id = [m](int i, int j) { return j * (m + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int a = id(i, j);
      const int b = id(i + 1, j);
      const int c = id(i + 1, j + 1);
      const int d = id(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }
  }
  return TriangleMesh::from_data(std::move(vertices), std::move(triangles));
}

BoundaryPartition label_boundary(
    const TriangleMesh& mesh,
    const std::function<EdgeLabel(const Eigen::Vector2d&)>& rule) {
  BoundaryPartition partition;
  partition.labels.reserve(mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges()) {
    partition.labels.push_back(rule(e.midpoint(mesh.vertices())));
  }
  return partition;
}

BoundaryPartition all_dirichlet(const TriangleMesh& mesh) {
  return {std::vector<EdgeLabel>(mesh.boundary_edges().size(),
                                 EdgeLabel::Dirichlet)};
}

PartitionDiagnostics validate_partition(const TriangleMesh& mesh,
                                        const BoundaryPartition& partition,
                                        BCMode mode) {
  if (partition.labels.size() != mesh.boundary_edges().size()) {
    throw DimensionMismatch("partition labels do not match boundary edges");
  }
  PartitionDiagnostics diag;
  for (size_t i = 0; i < partition.labels.size(); ++i) {
    const double len = mesh.boundary_edges()[i].length;
    if (partition.labels[i] == EdgeLabel::Dirichlet) {
      diag.dirichlet_length += len;
      ++diag.dirichlet_edges;
    } else {
      diag.traction_length += len;
      ++diag.traction_edges;
    }
  }
  if (diag.dirichlet_edges == 0) {
    throw EmptyDirichletSet(
        "no Dirichlet edges: the displacement boundary must have positive "
        "measure for the problem to be solvable");
  }
  if (mode == BCMode::DisplacementOnly && diag.traction_edges > 0) {
    throw UnexpectedTractionEdges(
        "displacement-only mode requires every boundary edge to be Dirichlet");
  }
  return diag;
}

namespace {

struct LabeledEdge {
  int a, b;
  EdgeLabel label;
  int line;
};

}  // namespace

std::pair<TriangleMesh, BoundaryPartition> parse_mesh(std::string_view text,
                                                      bool fix_orientation) {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<LabeledEdge> labels;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto want_int = [&](const char* what) {
      long long v;
      if (!(ls >> v)) {
        throw ParseError(lineno, static_cast<int>(ls.tellg()),
                         std::string("expected integer ") + what);
      }
      return static_cast<int>(v);
    };
    auto want_real = [&](const char* what) {
      double v;
      if (!(ls >> v)) {
        throw ParseError(lineno, static_cast<int>(ls.tellg()),
                         std::string("expected number ") + what);
      }
      return v;
    };
    if (tag == "v") {
      const double x = want_real("x");
      const double y = want_real("y");
      vertices.emplace_back(x, y);
    } else if (tag == "t") {
      const int i = want_int("i");
      const int j = want_int("j");
      const int k = want_int("k");
      triangles.push_back({i, j, k});
    } else if (tag == "bd" || tag == "bt") {
      const int i = want_int("i");
      const int j = want_int("j");
      labels.push_back({i, j,
                        tag == "bd" ? EdgeLabel::Dirichlet : EdgeLabel::Traction,
                        lineno});
    } else {
      throw ParseError(lineno, 1, "unknown directive '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) {
      throw ParseError(lineno, static_cast<int>(line.size()),
                       "trailing content '" + extra + "'");
    }
  }

  TriangleMesh mesh =
      TriangleMesh::from_data(std::move(vertices), std::move(triangles),
                              fix_orientation);

  std::map<std::pair<int, int>, int> boundary_index;
  for (size_t i = 0; i < mesh.boundary_edges().size(); ++i) {
    const auto& e = mesh.boundary_edges()[i];
    boundary_index[undirected(e.a, e.b)] = static_cast<int>(i);
  }

  BoundaryPartition partition;
  partition.labels.assign(mesh.boundary_edges().size(), EdgeLabel::Dirichlet);
  std::vector<char> seen(mesh.boundary_edges().size(), 0);
  for (const auto& l : labels) {
    const auto it = boundary_index.find(undirected(l.a, l.b));
    if (it == boundary_index.end()) {
      throw DanglingLabel("line " + std::to_string(l.line) + ": edge (" +
                          std::to_string(l.a) + ", " + std::to_string(l.b) +
                          ") is not a boundary edge");
    }
    if (seen[it->second]) {
      throw DanglingLabel("line " + std::to_string(l.line) + ": edge (" +
                          std::to_string(l.a) + ", " + std::to_string(l.b) +
                          ") labeled twice");
    }
    seen[it->second] = 1;
    partition.labels[it->second] = l.label;
  }
  for (size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      const auto& e = mesh.boundary_edges()[i];
      throw DanglingLabel("boundary edge (" + std::to_string(e.a) + ", " +
                          std::to_string(e.b) + ") has no bd/bt label");
    }
  }
  return {std::move(mesh), std::move(partition)};
}

std::string emit_mesh(const TriangleMesh& mesh,
                      const BoundaryPartition& partition) {
  if (partition.labels.size() != mesh.boundary_edges().size()) {
    throw DimensionMismatch("partition labels do not match boundary edges");
  }
  const int nv = mesh.num_vertices();

  // Vertex permutation: lexicographic by coordinates, index as tie-break.
  std::vector<int> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& va = mesh.vertices()[a];
    const auto& vb = mesh.vertices()[b];
    if (va.x() != vb.x()) return va.x() < vb.x();
    if (va.y() != vb.y()) return va.y() < vb.y();
    return a < b;
  });
  std::vector<int> remap(nv);
  for (int pos = 0; pos < nv; ++pos) remap[order[pos]] = pos;

  std::vector<std::array<int, 3>> tris;
  tris.reserve(mesh.num_triangles());
  for (const auto& t : mesh.triangles()) {
    std::array<int, 3> r = {remap[t[0]], remap[t[1]], remap[t[2]]};
    // Rotate so the smallest index leads; rotation preserves orientation.
    const int lead = static_cast<int>(
        std::min_element(r.begin(), r.end()) - r.begin());
    std::rotate(r.begin(), r.begin() + lead, r.end());
    tris.push_back(r);
  }
  std::sort(tris.begin(), tris.end());

  std::vector<std::pair<int, int>> bd, bt;
  for (size_t i = 0; i < mesh.boundary_edges().size(); ++i) {
    const auto& e = mesh.boundary_edges()[i];
    const auto p = undirected(remap[e.a], remap[e.b]);
    (partition.labels[i] == EdgeLabel::Dirichlet ? bd : bt).push_back(p);
  }
  std::sort(bd.begin(), bd.end());
  std::sort(bt.begin(), bt.end());

  std::string out;
  char buf[128];
  for (int pos = 0; pos < nv; ++pos) {
    const auto& v = mesh.vertices()[order[pos]];
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x(), v.y());
    out += buf;
  }
  for (const auto& t : tris) {
    std::snprintf(buf, sizeof buf, "t %d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  for (const auto& [a, b] : bd) {
    std::snprintf(buf, sizeof buf, "bd %d %d\n", a, b);
    out += buf;
  }
  for (const auto& [a, b] : bt) {
    std::snprintf(buf, sizeof buf, "bt %d %d\n", a, b);
    out += buf;
  }
  return out;
}

}  // namespace stresslab
