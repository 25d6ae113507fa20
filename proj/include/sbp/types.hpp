/**
 * \file types.hpp
 * \brief Shared dense-matrix aliases and reference-simplex helpers.
 */
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sbp {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Nodes are stored one per row with `dim` Cartesian coordinates per node.
using NodeSet = Mat;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Measure of the reference simplex: triangle (0,0),(1,0),(0,1) or
/// tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1).
inline double reference_measure(int dim) {
  require(dim == 2 || dim == 3, "reference_measure: dim must be 2 or 3");
  return dim == 2 ? 0.5 : 1.0 / 6.0;
}

/// Corner vertices of the reference simplex, one per row.
inline Mat reference_corners(int dim) {
  require(dim == 2 || dim == 3, "reference_corners: dim must be 2 or 3");
  Mat c = Mat::Zero(dim + 1, dim);
  for (int i = 0; i < dim; ++i) c(i + 1, i) = 1.0;
  return c;
}

/// Barycentric coordinates of a point w.r.t. the reference simplex.
inline Vec barycentric(const Eigen::Ref<const Vec>& pt) {
  const int d = static_cast<int>(pt.size());
  require(d == 2 || d == 3, "barycentric: point must be 2-D or 3-D");
  Vec b(d + 1);
  b[0] = 1.0 - pt.sum();
  b.tail(d) = pt;
  return b;
}

inline bool on_reference_simplex(const Eigen::Ref<const Vec>& pt, double tol = 1e-13) {
  const Vec b = barycentric(pt);
  return b.minCoeff() >= -tol && b.maxCoeff() <= 1.0 + tol;
}

inline double min_node_distance(const NodeSet& nodes) {
  const int n = static_cast<int>(nodes.rows());
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dmin = std::min(dmin, (nodes.row(i) - nodes.row(j)).norm());
  return dmin;
}

}  // namespace sbp
