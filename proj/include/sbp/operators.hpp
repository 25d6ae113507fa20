/**
 * \file operators.hpp
 * \brief Diagonal-norm SBP first-derivative operators on simplex elements.
 *
 * An element operator is assembled from a certified cubature rule: the rule's
 * weights form the diagonal norm, boundary operators are built facet-by-facet
 * from exact nodal mass matrices, and the antisymmetric part solves the
 * accuracy conditions in the minimum-norm least-squares sense.
 */
#pragma once

#include <json.hpp>

#include <array>
#include <fstream>
#include <numeric>
#include <vector>

#include "sbp/cubature.hpp"
#include "sbp/linalg.hpp"
#include "sbp/quadrature.hpp"
#include "sbp/simplex_poly.hpp"
#include "sbp/types.hpp"

namespace sbp {

struct Facet {
  std::vector<int> node_ids;  // element-local indices, sorted along the facet
  Vec normal;                 // outward unit normal
  double measure = 0.0;       // length (d=2) or area (d=3)
  Mat corners;                // facet corner coordinates, one per row
  Mat mass;                   // exact nodal mass matrix, includes the measure
};

namespace detail {

inline double shifted_legendre(double s, int k) {
  return std::sqrt(2.0) * jacobi_p(2.0 * s - 1.0, 0, 0, k);
}

/// Facet nodal mass matrix through the orthonormal facet Vandermonde:
/// with an orthonormal basis the parameter-space Gram matrix is the identity,
/// so  B = measure_scale * (Vf Vf^T)^{-1}.
inline Mat facet_mass(const Mat& param_coords, int p, double measure_scale) {
  const int m = static_cast<int>(param_coords.rows());
  Mat vf(m, m);
  if (param_coords.cols() == 1) {
    require(m == p + 1, "facet_mass: segment node count mismatch");
    for (int i = 0; i < m; ++i)
      for (int k = 0; k <= p; ++k) vf(i, k) = shifted_legendre(param_coords(i, 0), k);
  } else {
    require(m == basis_size(p, 2), "facet_mass: face node count mismatch");
    vf = eval_basis(param_coords, {2, p, BasisKind::orthonormal}).V;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vf * vf.transpose());
  require(lu.isInvertible(), "facet_mass: degenerate facet Vandermonde");
  return measure_scale * Mat(lu.inverse());
}

}  // namespace detail

/// Geometry, node membership, and exact mass matrix of every facet of a
/// (possibly affinely mapped) simplex element.
inline std::vector<Facet> build_facets(const Mat& corners, const NodeSet& nodes,
                                       int p, int d) {
  require(corners.rows() == d + 1 && corners.cols() == d, "build_facets: bad corners");
  const int n = static_cast<int>(nodes.rows());
  const Vec centroid = corners.colwise().mean().transpose();
  const int per_facet = facet_node_count(p, d);
  std::vector<Facet> facets;
  for (int f = 0; f <= d; ++f) {
    Facet fac;
    fac.corners = Mat(d, d);
    int at = 0;
    for (int v = 0; v <= d; ++v)
      if (v != f) fac.corners.row(at++) = corners.row(v);
    const Vec c0 = fac.corners.row(0).transpose();
    if (d == 2) {
      const Vec t = fac.corners.row(1).transpose() - c0;
      fac.measure = t.norm();
      fac.normal = Vec(2);
      fac.normal << t[1], -t[0];
      fac.normal /= fac.measure;
    } else {
      const Eigen::Vector3d e1 = fac.corners.row(1).transpose() - c0;
      const Eigen::Vector3d e2 = fac.corners.row(2).transpose() - c0;
      const Eigen::Vector3d cr = e1.cross(e2);
      fac.measure = 0.5 * cr.norm();
      fac.normal = cr / cr.norm();
    }
    const Vec face_centroid = fac.corners.colwise().mean().transpose();
    if (fac.normal.dot(face_centroid - centroid) < 0.0) fac.normal = -fac.normal;

    const double tol = 1e-9 * std::sqrt(fac.measure);
    std::vector<std::pair<Vec, int>> members;  // (parameter coords, node id)
    for (int i = 0; i < n; ++i) {
      const Vec x = nodes.row(i).transpose() - c0;
      if (std::abs(fac.normal.dot(x)) > tol) continue;  // off the facet plane
      Vec s;
      if (d == 2) {
        const Vec t = fac.corners.row(1).transpose() - c0;
        s = Vec(1);
        s[0] = x.dot(t) / t.squaredNorm();
      } else {
        Eigen::Matrix2d G;
        const Vec e1 = fac.corners.row(1).transpose() - c0;
        const Vec e2 = fac.corners.row(2).transpose() - c0;
        G << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
        Eigen::Vector2d rhs(e1.dot(x), e2.dot(x));
        const Eigen::Vector2d st = G.ldlt().solve(rhs);
        s = Vec(2);
        s << st[0], st[1];
      }
      members.emplace_back(s, i);
    }
    require(static_cast<int>(members.size()) == per_facet,
            "build_facets: facet node count mismatch");
    // geometric ordering along the facet parameters
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
      for (int c = 0; c < a.first.size(); ++c) {
        if (a.first[c] < b.first[c] - 1e-12) return true;
        if (a.first[c] > b.first[c] + 1e-12) return false;
      }
      return false;
    });
    Mat params(per_facet, d - 1);
    for (int i = 0; i < per_facet; ++i) {
      params.row(i) = members[i].first.transpose();
      fac.node_ids.push_back(members[i].second);
    }
    const double scale = d == 2 ? fac.measure : 2.0 * fac.measure;
    fac.mass = detail::facet_mass(params, p, scale);
    facets.push_back(std::move(fac));
  }
  return facets;
}

/// E_dir = sum over facets of n_dir * R^T B R.
inline Mat build_boundary_operator(int n, const std::vector<Facet>& facets, int dir) {
  Mat E = Mat::Zero(n, n);
  for (const auto& f : facets) {
    const double nd = f.normal[dir];
    if (nd == 0.0) continue;
    const int m = static_cast<int>(f.node_ids.size());
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        E(f.node_ids[a], f.node_ids[b]) += nd * f.mass(a, b);
  }
  return E;
}

/// Antisymmetric part from the accuracy conditions S P = M P' - E P / 2,
/// unknowns indexed over the strictly lower triangle, solved minimum-norm.
/// The compatibility of M and E makes the system consistent; a residual above
/// tolerance therefore signals a bad cubature/boundary-operator pairing.
inline Mat build_skew_part(const VandermondeSet& basis, const Vec& M,
                           const Mat& E_dir, int dir) {
  const int n = static_cast<int>(M.size());
  const int np = static_cast<int>(basis.V.cols());
  const int nq = n * (n - 1) / 2;
  auto qidx = [](int i, int j) { return i * (i - 1) / 2 + j; };  // i > j
  const Mat rhs_mat = M.asDiagonal() * basis.deriv(dir) - 0.5 * E_dir * basis.V;
  Mat A = Mat::Zero(n * np, nq);
  Vec b(n * np);
  for (int k = 0; k < np; ++k)
    for (int i = 0; i < n; ++i) {
      const int row = k * n + i;
      b[row] = rhs_mat(i, k);
      for (int j = 0; j < i; ++j) A(row, qidx(i, j)) += basis.V(j, k);
      for (int j = i + 1; j < n; ++j) A(row, qidx(j, i)) -= basis.V(j, k);
    }
  const Vec q = min_norm_lstsq(A, b, 1e-12);
  const double consistency = (A * q - b).lpNorm<Eigen::Infinity>();
  if (consistency > 1e-10)
    throw std::runtime_error(
        "build_skew_part: accuracy system inconsistent (residual " +
        std::to_string(consistency) + ")");
  Mat S = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      S(i, j) = q[qidx(i, j)];
      S(j, i) = -q[qidx(i, j)];
    }
  return S;
}

struct ElementOperators {
  int p = 1;
  int dim = 2;
  Mat corners;   // simplex corners, one per row
  NodeSet nodes; // n x d
  Vec norm;      // diagonal entries of M
  std::array<Mat, 3> Q;
  std::array<Mat, 3> E;
  std::vector<Facet> facets;
  std::string cubature_branch;

  int size() const { return static_cast<int>(nodes.rows()); }
  Mat D(int dir) const { return norm.cwiseInverse().asDiagonal() * Q[dir]; }
  Mat skew(int dir) const { return Q[dir] - 0.5 * E[dir]; }
};

/// Diagonal norm from a certified positive-weight cubature rule.
inline Vec build_norm(const CubatureRule& rule) {
  require(rule.certified_degree >= 2 * rule.degree - 1,
          "build_norm: rule not certified to degree 2p-1");
  const Vec w = rule.weights();
  require(w.minCoeff() > 0.0, "build_norm: non-positive cubature weight");
  return w;
}

/// Reference-element operator pipeline: norm, boundary operators, skew parts.
inline ElementOperators build_element_operators(const CubatureRule& rule) {
  ElementOperators ops;
  ops.p = rule.degree;
  ops.dim = rule.dim;
  ops.corners = reference_corners(rule.dim);
  ops.nodes = rule.nodes();
  ops.norm = build_norm(rule);
  ops.cubature_branch = rule.branch;
  ops.facets = build_facets(ops.corners, ops.nodes, ops.p, ops.dim);
  const VandermondeSet onb =
      eval_basis(ops.nodes, {ops.dim, ops.p, BasisKind::orthonormal});
  for (int dir = 0; dir < ops.dim; ++dir) {
    ops.E[dir] = build_boundary_operator(ops.size(), ops.facets, dir);
    const Mat S = build_skew_part(onb, ops.norm, ops.E[dir], dir);
    ops.Q[dir] = S + 0.5 * ops.E[dir];
  }
  return ops;
}

// ---------------------------------------------------------------------------
// verification

namespace detail {

/// Quadrature over the element (affine image of the reference simplex).
inline std::pair<NodeSet, Vec> element_quadrature(const ElementOperators& ops,
                                                  int degree) {
  auto [ref_nodes, ref_w] = simplex_quadrature(degree, ops.dim);
  const Vec c0 = ops.corners.row(0).transpose();
  Mat B(ops.dim, ops.dim);
  for (int c = 0; c < ops.dim; ++c)
    B.col(c) = (ops.corners.row(c + 1) - ops.corners.row(0)).transpose();
  const double scale = std::abs(Eigen::MatrixXd(B).determinant());
  NodeSet nodes(ref_nodes.rows(), ops.dim);
  for (int i = 0; i < ref_nodes.rows(); ++i)
    nodes.row(i) = (c0 + B * ref_nodes.row(i).transpose()).transpose();
  return {nodes, Vec(scale * ref_w)};
}

/// Quadrature points/weights over one facet, exact to `degree`.
inline std::pair<NodeSet, Vec> facet_quadrature(const Facet& f, int degree, int d) {
  if (d == 2) {
    auto [s, w] = gauss_legendre01(degree / 2 + 2);
    NodeSet pts(s.size(), 2);
    const Vec c0 = f.corners.row(0).transpose();
    const Vec t = f.corners.row(1).transpose() - c0;
    for (int i = 0; i < s.size(); ++i) pts.row(i) = (c0 + s[i] * t).transpose();
    return {pts, Vec(f.measure * w)};
  }
  auto [st, w] = simplex_quadrature(degree, 2);
  NodeSet pts(st.rows(), 3);
  const Vec c0 = f.corners.row(0).transpose();
  const Vec e1 = f.corners.row(1).transpose() - c0;
  const Vec e2 = f.corners.row(2).transpose() - c0;
  for (int i = 0; i < st.rows(); ++i)
    pts.row(i) = (c0 + st(i, 0) * e1 + st(i, 1) * e2).transpose();
  // the reference-triangle rule sums to 1/2; facet area scales it
  return {pts, Vec((f.measure / 0.5) * w)};
}

/// Exact boundary moments \oint P_k P_m n_dir over the element boundary for
/// all monomials of total degree <= deg.
inline std::array<Mat, 3> exact_surface_moments(const ElementOperators& ops, int deg) {
  const int m = basis_size(deg, ops.dim);
  std::array<Mat, 3> mom;
  for (int dir = 0; dir < ops.dim; ++dir) mom[dir] = Mat::Zero(m, m);
  for (const auto& f : ops.facets) {
    auto [pts, w] = facet_quadrature(f, 2 * deg + 1, ops.dim);
    const Mat V = eval_basis(pts, {ops.dim, deg, BasisKind::monomial}).V;
    const Mat block = V.transpose() * w.asDiagonal() * V;
    for (int dir = 0; dir < ops.dim; ++dir) mom[dir] += f.normal[dir] * block;
  }
  return mom;
}

}  // namespace detail

struct SbpVerificationReport {
  std::array<double, 3> accuracy{0.0, 0.0, 0.0};  // per direction
  double antisymmetry = 0.0;     // |S+S^T|_inf relative to |S|_inf
  double e_symmetry = 0.0;       // |E-E^T|_inf
  double surface_moment = 0.0;   // pairs of total degree <= p
  int tau = 0;                   // largest degree passing 1e-10 (capped at 2p+1)
  double compatibility = 0.0;
  double min_norm_weight = 0.0;
  double max_accuracy() const {
    return std::max({accuracy[0], accuracy[1], accuracy[2]});
  }
};

/// Check every clause of the SBP definition in the monomial basis, which is
/// independent of the orthonormal construction basis.
inline SbpVerificationReport verify_sbp(const ElementOperators& ops) {
  SbpVerificationReport rep;
  const int p = ops.p, d = ops.dim;
  const int tau_cap = 2 * p + 1;
  const VandermondeSet mono =
      eval_basis(ops.nodes, {d, tau_cap, BasisKind::monomial});
  const int np = basis_size(p, d);

  for (int dir = 0; dir < d; ++dir) {
    const Mat D = ops.D(dir);
    rep.accuracy[dir] =
        (D * mono.V.leftCols(np) - mono.deriv(dir).leftCols(np))
            .lpNorm<Eigen::Infinity>();
    const Mat S = ops.skew(dir);
    const double snorm = std::max(S.lpNorm<Eigen::Infinity>(), 1e-300);
    rep.antisymmetry = std::max(
        rep.antisymmetry, Mat(S + S.transpose()).lpNorm<Eigen::Infinity>() / snorm);
    rep.e_symmetry =
        std::max(rep.e_symmetry,
                 Mat(ops.E[dir] - ops.E[dir].transpose()).lpNorm<Eigen::Infinity>());
  }

  const auto mom = detail::exact_surface_moments(ops, tau_cap);
  auto surface_residual = [&](int deg) {
    const int nb = basis_size(deg, d);
    double r = 0.0;
    for (int dir = 0; dir < d; ++dir) {
      const Mat discrete = mono.V.leftCols(nb).transpose() * ops.E[dir] *
                           mono.V.leftCols(nb);
      r = std::max(r, (discrete - mom[dir].topLeftCorner(nb, nb))
                          .lpNorm<Eigen::Infinity>());
    }
    return r;
  };
  rep.surface_moment = surface_residual(p);
  rep.tau = p - 1;
  for (int t = p; t <= tau_cap; ++t) {
    if (surface_residual(t) > 1e-10) break;
    rep.tau = t;
  }

  for (int dir = 0; dir < d; ++dir) {
    const Mat MV = ops.norm.asDiagonal() * mono.deriv(dir).leftCols(np);
    const Mat lhs = mono.V.leftCols(np).transpose() * MV;
    const Mat discrete_e =
        mono.V.leftCols(np).transpose() * ops.E[dir] * mono.V.leftCols(np);
    rep.compatibility =
        std::max(rep.compatibility,
                 Mat(lhs + lhs.transpose() - discrete_e).lpNorm<Eigen::Infinity>());
  }
  rep.min_norm_weight = ops.norm.minCoeff();
  return rep;
}

/// Bilinear accuracy of Q and of the skew part against exact volume and
/// surface integrals, over all monomial pairs of total degree <= p.
inline double bilinear_accuracy_check(const ElementOperators& ops) {
  const int p = ops.p, d = ops.dim;
  const int np = basis_size(p, d);
  auto [qpts, qw] = detail::element_quadrature(ops, 2 * p);
  const Mat V = eval_basis(qpts, {d, p, BasisKind::monomial}).V;
  const VandermondeSet quad = eval_basis(qpts, {d, p, BasisKind::monomial});
  const VandermondeSet nodal = eval_basis(ops.nodes, {d, p, BasisKind::monomial});
  const auto mom = detail::exact_surface_moments(ops, p);
  double res = 0.0;
  for (int dir = 0; dir < d; ++dir) {
    const Mat exact_vol = quad.V.transpose() * qw.asDiagonal() * quad.deriv(dir);
    const Mat disc_q = nodal.V.leftCols(np).transpose() * ops.Q[dir] *
                       nodal.V.leftCols(np);
    res = std::max(res, (disc_q - exact_vol).lpNorm<Eigen::Infinity>());
    const Mat disc_s = nodal.V.leftCols(np).transpose() * ops.skew(dir) *
                       nodal.V.leftCols(np);
    const Mat exact_s = exact_vol - 0.5 * mom[dir].topLeftCorner(np, np);
    res = std::max(res, (disc_s - exact_s).lpNorm<Eigen::Infinity>());
  }
  return res;
}

// ---------------------------------------------------------------------------
// spectral-element comparison operator

struct SeOperators {
  std::array<Mat, 3> Q;
  std::vector<int> selected_modes;  // graded orthonormal-mode indices
  double condition = 0.0;           // of the cardinal interpolation system
};

/// Diagonal-mass spectral-element operator built from a cardinal (nodal)
/// basis: Q_se = M * (nodal derivative matrix).  The cardinal space contains
/// all degree-p modes; the remaining modes are chosen greedily from the next
/// graded degrees to keep the interpolation system well conditioned.
inline SeOperators build_se_operator(const NodeSet& nodes, int p, int dim,
                                     const Vec& M) {
  const int n = static_cast<int>(nodes.rows());
  int pmax = p;
  while (basis_size(pmax, dim) < n) ++pmax;
  const VandermondeSet vs = eval_basis(nodes, {dim, pmax, BasisKind::orthonormal});
  const int ncand = basis_size(pmax, dim);
  const int nforce = basis_size(p, dim);
  require(nforce <= n, "build_se_operator: fewer nodes than degree-p modes");

  std::vector<int> selected;
  Eigen::MatrixXd basis(n, n);  // orthonormalized span of selected columns
  int nsel = 0;
  std::vector<bool> used(ncand, false);
  auto add_column = [&](int c) {
    Vec v = vs.V.col(c);
    for (int k = 0; k < nsel; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double nrm = v.norm();
    require(nrm > 1e-12, "build_se_operator: singular interpolation system");
    basis.col(nsel++) = v / nrm;
    selected.push_back(c);
    used[c] = true;
  };
  for (int c = 0; c < nforce; ++c) add_column(c);
  while (nsel < n) {
    int best = -1;
    double best_score = -1.0;
    for (int c = nforce; c < ncand; ++c) {
      if (used[c]) continue;
      Vec v = vs.V.col(c);
      for (int k = 0; k < nsel; ++k) v -= basis.col(k).dot(v) * basis.col(k);
      if (v.norm() > best_score) {
        best_score = v.norm();
        best = c;
      }
    }
    require(best >= 0, "build_se_operator: candidate modes exhausted");
    add_column(best);
  }

  Mat vsel(n, n), vdx(n, n), vdy(n, n), vdz;
  if (dim == 3) vdz = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    vsel.col(k) = vs.V.col(selected[k]);
    vdx.col(k) = vs.Vx.col(selected[k]);
    vdy.col(k) = vs.Vy.col(selected[k]);
    if (dim == 3) vdz.col(k) = vs.Vz.col(selected[k]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(vsel)};
  SeOperators se;
  se.selected_modes = selected;
  se.condition = svd.singularValues()(0) /
                 svd.singularValues()(svd.singularValues().size() - 1);
  // nodal derivative matrix Vd * Vsel^{-1}, via the factorization of Vsel^T
  Eigen::PartialPivLU<Eigen::MatrixXd> lut{Eigen::MatrixXd(vsel.transpose())};
  const Mat dx = Mat(lut.solve(Eigen::MatrixXd(vdx.transpose())).transpose());
  const Mat dy = Mat(lut.solve(Eigen::MatrixXd(vdy.transpose())).transpose());
  se.Q[0] = M.asDiagonal() * dx;
  se.Q[1] = M.asDiagonal() * dy;
  if (dim == 3) {
    const Mat dz = Mat(lut.solve(Eigen::MatrixXd(vdz.transpose())).transpose());
    se.Q[2] = M.asDiagonal() * dz;
  }
  return se;
}

// ---------------------------------------------------------------------------
// serialization

namespace detail {

inline nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Mat mat_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows ? static_cast<int>(j[0].size()) : 0;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  return m;
}

}  // namespace detail

inline nlohmann::json operators_to_json(const ElementOperators& ops) {
  nlohmann::json j;
  j["p"] = ops.p;
  j["d"] = ops.dim;
  j["corners"] = detail::mat_to_json(ops.corners);
  j["nodes"] = detail::mat_to_json(ops.nodes);
  j["M"] = std::vector<double>(ops.norm.data(), ops.norm.data() + ops.norm.size());
  const char* qname[3] = {"Qx", "Qy", "Qz"};
  const char* ename[3] = {"Ex", "Ey", "Ez"};
  for (int dir = 0; dir < ops.dim; ++dir) {
    j[qname[dir]] = detail::mat_to_json(ops.Q[dir]);
    j[ename[dir]] = detail::mat_to_json(ops.E[dir]);
  }
  j["faces"] = nlohmann::json::array();
  for (const auto& f : ops.facets) {
    nlohmann::json jf;
    jf["nodes"] = f.node_ids;
    jf["normal"] =
        std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size());
    jf["measure"] = f.measure;
    j["faces"].push_back(std::move(jf));
  }
  const auto rep = verify_sbp(ops);
  j["metadata"] = {{"cubature_branch", ops.cubature_branch},
                   {"residuals",
                    {{"accuracy", rep.max_accuracy()},
                     {"antisymmetry", rep.antisymmetry},
                     {"e_symmetry", rep.e_symmetry},
                     {"surface_moment", rep.surface_moment},
                     {"compatibility", rep.compatibility}}}};
  return j;
}

inline ElementOperators operators_from_json(const nlohmann::json& j) {
  ElementOperators ops;
  ops.p = j.at("p").get<int>();
  ops.dim = j.at("d").get<int>();
  ops.corners = detail::mat_from_json(j.at("corners"));
  ops.nodes = detail::mat_from_json(j.at("nodes"));
  const auto mvec = j.at("M").get<std::vector<double>>();
  ops.norm = Eigen::Map<const Vec>(mvec.data(), mvec.size());
  const char* qname[3] = {"Qx", "Qy", "Qz"};
  const char* ename[3] = {"Ex", "Ey", "Ez"};
  for (int dir = 0; dir < ops.dim; ++dir) {
    ops.Q[dir] = detail::mat_from_json(j.at(qname[dir]));
    ops.E[dir] = detail::mat_from_json(j.at(ename[dir]));
  }
  ops.cubature_branch = j.at("metadata").value("cubature_branch", "");
  ops.facets = build_facets(ops.corners, ops.nodes, ops.p, ops.dim);
  return ops;
}

inline void save_operators(const ElementOperators& ops, const std::string& path) {
  std::ofstream f(path);
  require(f.good(), "save_operators: cannot open " + path);
  f << operators_to_json(ops).dump(2) << "\n";
}

inline ElementOperators load_operators(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) throw std::runtime_error("load_operators: cannot open " + path);
  nlohmann::json j;
  f >> j;
  return operators_from_json(j);
}

}  // namespace sbp
