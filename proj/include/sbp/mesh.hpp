/**
 * \file mesh.hpp
 * \brief Doubly periodic nonuniform triangular mesh of the unit square,
 *        affine mapping of reference operators, and global node numbering.
 */
#pragma once

#include <json.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "sbp/operators.hpp"
#include "sbp/types.hpp"

namespace sbp {

struct PeriodicTriMesh {
  int N = 0;
  Mat vertices;  // (N+1)^2 x 2
  std::vector<std::array<int, 3>> triangles;
  std::vector<Eigen::Matrix2d> jacobian;
  std::vector<Eigen::Vector2d> shift;
  std::vector<double> det;
  int vertex_id(int i, int j) const { return i * (N + 1) + j; }
  int element_count() const { return static_cast<int>(triangles.size()); }
};

/// Vertices x_ij = i/N + sin(2 pi i/N) sin(2 pi j/N)/40 (same perturbation in
/// y); each quad is split along the diagonal from (i+1,j) to (i,j+1).
inline PeriodicTriMesh build_mesh(int N) {
  require(N >= 2, "build_mesh: N must be >= 2");
  PeriodicTriMesh mesh;
  mesh.N = N;
  mesh.vertices = Mat((N + 1) * (N + 1), 2);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      const double pert =
          std::sin(2.0 * M_PI * i / N) * std::sin(2.0 * M_PI * j / N) / 40.0;
      mesh.vertices(mesh.vertex_id(i, j), 0) = static_cast<double>(i) / N + pert;
      mesh.vertices(mesh.vertex_id(i, j), 1) = static_cast<double>(j) / N + pert;
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const int a = mesh.vertex_id(i, j), b = mesh.vertex_id(i + 1, j);
      const int c = mesh.vertex_id(i, j + 1), dd = mesh.vertex_id(i + 1, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({b, dd, c});
    }
  for (const auto& t : mesh.triangles) {
    Eigen::Matrix2d J;
    J.col(0) = (mesh.vertices.row(t[1]) - mesh.vertices.row(t[0])).transpose();
    J.col(1) = (mesh.vertices.row(t[2]) - mesh.vertices.row(t[0])).transpose();
    const double det = J.determinant();
    require(det > 0.0, "build_mesh: inverted element");
    mesh.jacobian.push_back(J);
    mesh.shift.push_back(mesh.vertices.row(t[0]).transpose());
    mesh.det.push_back(det);
  }
  return mesh;
}

/// Push reference operators onto a physical element.  The norm scales with
/// |det J|, boundary operators are rebuilt from the physical facet geometry,
/// and the skew part follows the constant-Jacobian chain rule, so the mapped
/// operator satisfies the SBP definition on the physical element.
inline ElementOperators map_to_physical(const ElementOperators& ref,
                                        const Eigen::Matrix2d& J,
                                        const Eigen::Vector2d& shift) {
  require(ref.dim == 2, "map_to_physical: 2-D elements only");
  const double det = J.determinant();
  require(det > 0.0, "map_to_physical: inverted element");
  ElementOperators phys;
  phys.p = ref.p;
  phys.dim = 2;
  phys.cubature_branch = ref.cubature_branch;
  phys.nodes = NodeSet(ref.nodes.rows(), 2);
  for (int i = 0; i < ref.nodes.rows(); ++i)
    phys.nodes.row(i) = (J * ref.nodes.row(i).transpose() + shift).transpose();
  phys.corners = Mat(3, 2);
  for (int v = 0; v < 3; ++v)
    phys.corners.row(v) = (J * ref.corners.row(v).transpose() + shift).transpose();
  phys.norm = det * ref.norm;
  phys.facets = build_facets(phys.corners, phys.nodes, phys.p, 2);
  const Eigen::Matrix2d Jinv = J.inverse();
  for (int dir = 0; dir < 2; ++dir) {
    phys.E[dir] = build_boundary_operator(phys.size(), phys.facets, dir);
    const Mat S =
        det * (Jinv(0, dir) * ref.skew(0) + Jinv(1, dir) * ref.skew(1));
    phys.Q[dir] = S + 0.5 * phys.E[dir];
  }
  return phys;
}

/// Operators for every element of the mesh.
inline std::vector<ElementOperators> map_reference_nodes(
    const PeriodicTriMesh& mesh, const ElementOperators& ref) {
  std::vector<ElementOperators> elems;
  elems.reserve(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e)
    elems.push_back(map_to_physical(ref, mesh.jacobian[e], mesh.shift[e]));
  return elems;
}

struct GlobalNodeMap {
  std::vector<std::vector<int>> element_nodes;  // local -> global ids
  Mat coords;                                   // n_global x 2
  int n_global = 0;
};

namespace detail {

struct QuantKey {
  long long x = 0, y = 0;
  bool operator<(const QuantKey& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
  bool operator==(const QuantKey& o) const { return x == o.x && y == o.y; }
};

}  // namespace detail

/// Deterministic global ids from quantized (optionally periodically wrapped)
/// coordinates.  Adjacent quantization cells are merged, so nodes that differ
/// by rounding noise land in one id class regardless of grid straddling;
/// ids are assigned in lexicographic key order.
inline GlobalNodeMap build_global_numbering(const std::vector<NodeSet>& elem_nodes,
                                            bool periodic, double quantum) {
  require(quantum > 0.0, "build_global_numbering: quantum must be positive");
  const long long qmax = std::llround(1.0 / quantum);
  auto quantize = [&](double v) {
    long long q = std::llround(v / quantum);
    if (periodic) q = ((q % qmax) + qmax) % qmax;
    return q;
  };

  struct NodeRef {
    int elem, local;
    double x, y;
  };
  std::vector<NodeRef> nodes;
  for (int e = 0; e < static_cast<int>(elem_nodes.size()); ++e)
    for (int i = 0; i < elem_nodes[e].rows(); ++i)
      nodes.push_back({e, i, elem_nodes[e](i, 0), elem_nodes[e](i, 1)});

  std::map<detail::QuantKey, std::vector<int>> cells;
  for (int k = 0; k < static_cast<int>(nodes.size()); ++k)
    cells[{quantize(nodes[k].x), quantize(nodes[k].y)}].push_back(k);

  // union-find over occupied cells; neighbors merge straddled clusters
  std::map<detail::QuantKey, detail::QuantKey> parent;
  for (const auto& [key, ids] : cells) parent[key] = key;
  std::function<detail::QuantKey(detail::QuantKey)> find =
      [&](detail::QuantKey k) {
        while (!(parent[k] == k)) {
          parent[k] = parent[parent[k]];
          k = parent[k];
        }
        return k;
      };
  auto unite = [&](const detail::QuantKey& a, const detail::QuantKey& b) {
    const auto ra = find(a), rb = find(b);
    if (ra == rb) return;
    parent[std::max(ra, rb)] = std::min(ra, rb);  // smaller key is the root
  };
  auto wrap = [&](long long q) {
    return periodic ? ((q % qmax) + qmax) % qmax : q;
  };
  for (const auto& [key, ids] : cells)
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const detail::QuantKey nb{wrap(key.x + dx), wrap(key.y + dy)};
        if (cells.count(nb)) unite(key, nb);
      }

  std::map<detail::QuantKey, int> cluster_id;
  for (const auto& [key, ids] : cells) {
    const auto root = find(key);
    if (!cluster_id.count(root)) cluster_id[root] = 0;
  }
  int next = 0;
  for (auto& [root, id] : cluster_id) id = next++;  // lexicographic order

  GlobalNodeMap out;
  out.n_global = next;
  out.coords = Mat::Zero(next, 2);
  std::vector<int> rep(next, -1);  // flat node index of the representative
  out.element_nodes.resize(elem_nodes.size());
  for (int e = 0; e < static_cast<int>(elem_nodes.size()); ++e)
    out.element_nodes[e].resize(elem_nodes[e].rows());
  for (const auto& [key, ids] : cells) {
    const int gid = cluster_id[find(key)];
    for (int k : ids) {
      out.element_nodes[nodes[k].elem][nodes[k].local] = gid;
      if (rep[gid] < 0) rep[gid] = k;  // first key in cell order
    }
  }
  auto wrap_coord = [&](double v) {
    if (!periodic) return v;
    const long long qu = std::llround(v / quantum);
    const long long qw = ((qu % qmax) + qmax) % qmax;
    return v - static_cast<double>((qu - qw) / qmax);  // exact integer shift
  };
  for (int g = 0; g < next; ++g) {
    out.coords(g, 0) = wrap_coord(nodes[rep[g]].x);
    out.coords(g, 1) = wrap_coord(nodes[rep[g]].y);
  }
  return out;
}

inline GlobalNodeMap build_global_numbering(const PeriodicTriMesh& mesh,
                                            const std::vector<ElementOperators>& elems,
                                            bool periodic) {
  std::vector<NodeSet> nodes;
  nodes.reserve(elems.size());
  for (const auto& e : elems) nodes.push_back(e.nodes);
  return build_global_numbering(nodes, periodic, 1e-10 / mesh.N);
}

/// Debug/plotting dump: {N, vertices, triangles[, global_ids]}.
inline nlohmann::json mesh_to_json(const PeriodicTriMesh& mesh,
                                   const GlobalNodeMap* gmap = nullptr) {
  nlohmann::json j;
  j["N"] = mesh.N;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < mesh.vertices.rows(); ++v)
    j["vertices"].push_back({mesh.vertices(v, 0), mesh.vertices(v, 1)});
  j["triangles"] = nlohmann::json::array();
  for (const auto& t : mesh.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
  if (gmap) j["global_ids"] = gmap->element_nodes;
  return j;
}

}  // namespace sbp
