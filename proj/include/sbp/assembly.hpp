/**
 * \file assembly.hpp
 * \brief Global diagonal-norm operators assembled by scatter-add of element
 *        contributions over the global node numbering.
 */
#pragma once

#include <Eigen/Sparse>

#include <algorithm>
#include <tuple>
#include <vector>

#include "sbp/linalg.hpp"
#include "sbp/mesh.hpp"
#include "sbp/operators.hpp"

namespace sbp {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct GlobalOperators {
  int n_global = 0;
  bool periodic = false;
  Vec norm;   // assembled diagonal M
  SparseMat Qx, Qy;
  Mat coords; // representative node coordinates
};

namespace detail {

/// Scatter-add with a fixed accumulation order: entries are summed sorted by
/// (row, col, element), so the result is bitwise reproducible.
inline SparseMat scatter_matrix(const std::vector<Mat>& elem_mats,
                                const GlobalNodeMap& gmap, int n_global) {
  struct Entry {
    int row, col, elem;
    double val;
  };
  std::vector<Entry> entries;
  for (int e = 0; e < static_cast<int>(elem_mats.size()); ++e) {
    const Mat& A = elem_mats[e];
    const auto& ids = gmap.element_nodes[e];
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        if (A(i, j) != 0.0) entries.push_back({ids[i], ids[j], e, A(i, j)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.col, a.elem) < std::tie(b.row, b.col, b.elem);
  });
  std::vector<Eigen::Triplet<double>> triplets;
  for (size_t k = 0; k < entries.size();) {
    size_t j = k;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[k].row &&
           entries[j].col == entries[k].col)
      sum += entries[j++].val;
    triplets.emplace_back(entries[k].row, entries[k].col, sum);
    k = j;
  }
  SparseMat out(n_global, n_global);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace detail

/// Assemble per-direction matrices (one per element) on the global node set.
inline SparseMat assemble_matrix(const std::vector<Mat>& elem_mats,
                                 const GlobalNodeMap& gmap) {
  return detail::scatter_matrix(elem_mats, gmap, gmap.n_global);
}

/// Assemble the global norm and Q operators from element operators.
inline GlobalOperators assemble_global(const std::vector<ElementOperators>& elems,
                                       const GlobalNodeMap& gmap, bool periodic) {
  GlobalOperators g;
  g.n_global = gmap.n_global;
  g.periodic = periodic;
  g.coords = gmap.coords;
  g.norm = Vec::Zero(g.n_global);
  struct Entry {
    int row, elem;
    double val;
  };
  std::vector<Entry> entries;
  for (int e = 0; e < static_cast<int>(elems.size()); ++e) {
    require(elems[e].size() == static_cast<int>(gmap.element_nodes[e].size()),
            "assemble_global: numbering/element size mismatch");
    for (int i = 0; i < elems[e].size(); ++i) {
      const int gid = gmap.element_nodes[e][i];
      require(gid >= 0 && gid < g.n_global, "assemble_global: id out of range");
      entries.push_back({gid, e, elems[e].norm[i]});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.elem) < std::tie(b.row, b.elem);
  });
  for (const auto& en : entries) g.norm[en.row] += en.val;

  std::vector<Mat> qx, qy;
  qx.reserve(elems.size());
  qy.reserve(elems.size());
  for (const auto& e : elems) {
    qx.push_back(e.Q[0]);
    qy.push_back(e.Q[1]);
  }
  g.Qx = assemble_matrix(qx, gmap);
  g.Qy = assemble_matrix(qy, gmap);
  return g;
}

/// Derivative application u -> M^{-1} Q u.
inline Vec apply_derivative(const GlobalOperators& g, int dir, const Vec& u) {
  const SparseMat& Q = dir == 0 ? g.Qx : g.Qy;
  return g.norm.cwiseInverse().asDiagonal() * (Q * u);
}

struct GlobalVerifyReport {
  double accuracy = 0.0;       // non-periodic: max monomial residual, deg <= p
  double antisymmetry = 0.0;   // periodic: |Q+Q^T|_inf / |Q|_inf
  double constant_mode = 0.0;  // |D 1|_inf
};

inline GlobalVerifyReport verify_global(const GlobalOperators& g, int p) {
  GlobalVerifyReport rep;
  for (int dir = 0; dir < 2; ++dir) {
    const SparseMat& Q = dir == 0 ? g.Qx : g.Qy;
    rep.constant_mode = std::max(
        rep.constant_mode,
        apply_derivative(g, dir, Vec::Ones(g.n_global)).lpNorm<Eigen::Infinity>());
    if (g.periodic) {
      auto row_inf_norm = [](const SparseMat& A) {
        double worst = 0.0;
        for (int k = 0; k < A.outerSize(); ++k) {
          double row = 0.0;
          for (SparseMat::InnerIterator it(A, k); it; ++it)
            row += std::abs(it.value());
          worst = std::max(worst, row);
        }
        return worst;
      };
      const double asym = row_inf_norm(SparseMat(Q + SparseMat(Q.transpose())));
      rep.antisymmetry = std::max(
          rep.antisymmetry, asym / std::max(row_inf_norm(Q), 1e-300));
    } else {
      const VandermondeSet mono =
          eval_basis(g.coords, {2, p, BasisKind::monomial});
      for (int k = 0; k < mono.spec.size(); ++k) {
        const Vec resid =
            apply_derivative(g, dir, mono.V.col(k)) - mono.deriv(dir).col(k);
        rep.accuracy = std::max(rep.accuracy, resid.lpNorm<Eigen::Infinity>());
      }
    }
  }
  return rep;
}

}  // namespace sbp
