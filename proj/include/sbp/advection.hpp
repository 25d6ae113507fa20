/**
 * \file advection.hpp
 * \brief Semi-discretizations of constant-coefficient linear advection on the
 *        periodic mesh: continuous (assembled) and discontinuous (SAT-coupled)
 *        forms, classical RK4 time marching, and energy/error diagnostics.
 */
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "sbp/assembly.hpp"
#include "sbp/mesh.hpp"
#include "sbp/operators.hpp"

namespace sbp {

/// C4-continuous periodic bump centred on the unit square.
inline double initial_condition(double x, double y) {
  const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  if (r2 <= 0.25) {
    const double s = 4.0 * r2 - 1.0;
    return 1.0 - s * s * s * s * s;
  }
  return 1.0;
}

/// L2 norm of the initial condition over the unit square.  The radial
/// integral evaluates in closed form to sqrt(1 + 7 pi / 66).
inline double initial_condition_l2_norm() {
  return std::sqrt(1.0 + 7.0 * M_PI / 66.0);
}

enum class Scheme { csbp, dsbp, se };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::csbp: return "csbp";
    case Scheme::dsbp: return "dsbp";
    case Scheme::se: return "se";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

inline Scheme scheme_from_name(const std::string& s) {
  if (s == "csbp") return Scheme::csbp;
  if (s == "dsbp") return Scheme::dsbp;
  if (s == "se") return Scheme::se;
  throw std::invalid_argument("scheme_from_name: unknown scheme '" + s + "'");
}

enum class FaceSide { inflow, outflow, characteristic };

/// A facet is assigned wholly by the sign of beta . n; |beta . n| below
/// 1e-13 contributes to neither penalty operator.
inline FaceSide classify_face(const Eigen::Vector2d& beta, const Vec& normal) {
  const double bn = beta[0] * normal[0] + beta[1] * normal[1];
  if (bn < -1e-13) return FaceSide::inflow;
  if (bn > 1e-13) return FaceSide::outflow;
  return FaceSide::characteristic;
}

/// Facet-wise split beta_x Ex + beta_y Ey = E_plus + E_minus with E_plus
/// positive and E_minus negative semi-definite.
inline std::pair<Mat, Mat> decompose_boundary_operator(
    const ElementOperators& ops, const Eigen::Vector2d& beta) {
  const int n = ops.size();
  Mat eplus = Mat::Zero(n, n), eminus = Mat::Zero(n, n);
  for (const auto& f : ops.facets) {
    const double bn = beta[0] * f.normal[0] + beta[1] * f.normal[1];
    if (classify_face(beta, f.normal) == FaceSide::characteristic) continue;
    Mat& target = bn > 0.0 ? eplus : eminus;
    const int m = static_cast<int>(f.node_ids.size());
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        target(f.node_ids[a], f.node_ids[b]) += bn * f.mass(a, b);
  }
  return {eplus, eminus};
}

// ---------------------------------------------------------------------------
// inter-element coupling

struct InteriorFace {
  int left_elem = -1, left_facet = -1;
  int right_elem = -1, right_facet = -1;
  std::vector<int> left_nodes, right_nodes;  // matched pointwise
  Vec normal;   // outward from the left element
  Mat mass;     // facet mass matrix in the matched node order
};

/// Pair up element facets through the global numbering (periodic wrap
/// included).  Facet keys are the corner-vertex id pairs; matched node lists
/// carry the trace correspondence used by the SAT penalties.
inline std::vector<InteriorFace> build_face_coupling(
    const std::vector<ElementOperators>& elems, const GlobalNodeMap& gmap) {
  auto corner_gid = [&](int e, const Vec& corner) {
    for (int i = 0; i < elems[e].size(); ++i)
      if ((elems[e].nodes.row(i).transpose() - corner).norm() < 1e-12)
        return gmap.element_nodes[e][i];
    throw std::runtime_error("build_face_coupling: facet corner is not a node");
  };
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> sides;
  for (int e = 0; e < static_cast<int>(elems.size()); ++e)
    for (int f = 0; f < static_cast<int>(elems[e].facets.size()); ++f) {
      const auto& fac = elems[e].facets[f];
      int a = corner_gid(e, fac.corners.row(0).transpose());
      int b = corner_gid(e, fac.corners.row(1).transpose());
      if (a > b) std::swap(a, b);
      sides[{a, b}].push_back({e, f});
    }
  std::vector<InteriorFace> faces;
  for (const auto& [key, pair] : sides) {
    if (pair.size() == 1) continue;  // physical boundary facet
    require(pair.size() == 2, "build_face_coupling: facet shared by > 2 elements");
    InteriorFace face;
    face.left_elem = pair[0].first;
    face.left_facet = pair[0].second;
    face.right_elem = pair[1].first;
    face.right_facet = pair[1].second;
    const auto& fl = elems[face.left_elem].facets[face.left_facet];
    const auto& fr = elems[face.right_elem].facets[face.right_facet];
    face.normal = fl.normal;
    face.mass = fl.mass;
    require((fl.normal + fr.normal).lpNorm<Eigen::Infinity>() < 1e-12,
            "build_face_coupling: neighbour normals are not opposite");
    std::map<int, int> right_by_gid;
    for (int i : fr.node_ids)
      right_by_gid[gmap.element_nodes[face.right_elem][i]] = i;
    for (int i : fl.node_ids) {
      const int gid = gmap.element_nodes[face.left_elem][i];
      const auto it = right_by_gid.find(gid);
      require(it != right_by_gid.end(),
              "build_face_coupling: facet mismatch, no coincident neighbour node");
      face.left_nodes.push_back(i);
      face.right_nodes.push_back(it->second);
    }
    // left_nodes follow the left facet's ordering, so fl.mass already is the
    // matched-order block; the right side must agree on it under the match
    const int m = static_cast<int>(face.left_nodes.size());
    std::vector<int> rpos(m, -1);
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < m; ++k)
        if (fr.node_ids[k] == face.right_nodes[a]) rpos[a] = k;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        require(std::abs(fl.mass(a, b) - fr.mass(rpos[a], rpos[b])) < 1e-12,
                "build_face_coupling: facet mass mismatch");
    faces.push_back(std::move(face));
  }
  return faces;
}

// ---------------------------------------------------------------------------
// semi-discretizations

/// Discontinuous form: element derivatives plus upwind SAT penalties at
/// inflow facets, with the neighbour trace as boundary data.
class DsbpSystem {
 public:
  DsbpSystem(std::vector<ElementOperators> elems, std::vector<InteriorFace> faces,
             const Eigen::Vector2d& beta, double sigma)
      : elems_(std::move(elems)), faces_(std::move(faces)), beta_(beta),
        sigma_(sigma) {
    offset_.resize(elems_.size() + 1, 0);
    for (size_t e = 0; e < elems_.size(); ++e)
      offset_[e + 1] = offset_[e] + elems_[e].size();
    norm_ = Vec(offset_.back());
    dmat_.reserve(elems_.size());
    for (size_t e = 0; e < elems_.size(); ++e) {
      norm_.segment(offset_[e], elems_[e].size()) = elems_[e].norm;
      dmat_.push_back(beta[0] * elems_[e].D(0) + beta[1] * elems_[e].D(1));
    }
  }

  int dof() const { return offset_.back(); }
  const Vec& norm() const { return norm_; }
  const std::vector<ElementOperators>& elements() const { return elems_; }
  int offset(int e) const { return offset_[e]; }

  Vec sample(const std::function<double(double, double)>& fn) const {
    Vec u(dof());
    for (size_t e = 0; e < elems_.size(); ++e)
      for (int i = 0; i < elems_[e].size(); ++i)
        u[offset_[e] + i] = fn(elems_[e].nodes(i, 0), elems_[e].nodes(i, 1));
    return u;
  }

  Vec rhs(const Vec& u) const {
    Vec du(dof());
    for (size_t e = 0; e < elems_.size(); ++e)
      du.segment(offset_[e], elems_[e].size()) =
          -dmat_[e] * u.segment(offset_[e], elems_[e].size());
    for (const auto& face : faces_) {
      const double bn = beta_[0] * face.normal[0] + beta_[1] * face.normal[1];
      if (std::abs(bn) <= 1e-13) continue;
      const int m = static_cast<int>(face.left_nodes.size());
      Vec jump(m);
      const bool left_inflow = bn < 0.0;
      const int e_in = left_inflow ? face.left_elem : face.right_elem;
      const auto& in_nodes = left_inflow ? face.left_nodes : face.right_nodes;
      const int e_out = left_inflow ? face.right_elem : face.left_elem;
      const auto& out_nodes = left_inflow ? face.right_nodes : face.left_nodes;
      for (int a = 0; a < m; ++a)
        jump[a] = u[offset_[e_in] + in_nodes[a]] - u[offset_[e_out] + out_nodes[a]];
      const Vec pen = face.mass * jump;
      const double bn_in = left_inflow ? bn : -bn;  // beta . n of the inflow side
      for (int a = 0; a < m; ++a)
        du[offset_[e_in] + in_nodes[a]] +=
            sigma_ * bn_in * pen[a] / elems_[e_in].norm[in_nodes[a]];
    }
    return du;
  }

  /// SAT term alone (diagnostics/conservation tests).
  Vec sat_only(const Vec& u) const {
    Vec du = rhs(u);
    for (size_t e = 0; e < elems_.size(); ++e)
      du.segment(offset_[e], elems_[e].size()) +=
          dmat_[e] * u.segment(offset_[e], elems_[e].size());
    return du;
  }

 private:
  std::vector<ElementOperators> elems_;
  std::vector<InteriorFace> faces_;
  Eigen::Vector2d beta_;
  double sigma_ = 1.0;
  std::vector<Mat> dmat_;
  std::vector<int> offset_;
  Vec norm_;
};

/// Continuous form: du/dt = -M^{-1}(beta_x Qx + beta_y Qy) u on the global
/// node set.  Also drives the spectral-element comparison operator, which
/// assembles the same way.
class CsbpSystem {
 public:
  CsbpSystem(const GlobalOperators& g, const Eigen::Vector2d& beta)
      : coords_(g.coords), norm_(g.norm),
        minv_(g.norm.cwiseInverse()), combined_(beta[0] * g.Qx + beta[1] * g.Qy) {}

  int dof() const { return static_cast<int>(norm_.size()); }
  const Vec& norm() const { return norm_; }

  Vec sample(const std::function<double(double, double)>& fn) const {
    Vec u(dof());
    for (int i = 0; i < dof(); ++i) u[i] = fn(coords_(i, 0), coords_(i, 1));
    return u;
  }

  Vec rhs(const Vec& u) const {
    return -(minv_.asDiagonal() * (combined_ * u));
  }

 private:
  Mat coords_;
  Vec norm_, minv_;
  SparseMat combined_;
};

/// Global operators for the spectral-element comparison: identical norm,
/// Q replaced by the mapped cardinal-basis operator of each element.
inline GlobalOperators assemble_global_se(const PeriodicTriMesh& mesh,
                                          const ElementOperators& ref,
                                          const std::vector<ElementOperators>& elems,
                                          const GlobalNodeMap& gmap,
                                          bool periodic) {
  const SeOperators se_ref =
      build_se_operator(ref.nodes, ref.p, ref.dim, ref.norm);
  GlobalOperators g = assemble_global(elems, gmap, periodic);
  std::vector<Mat> qx, qy;
  qx.reserve(elems.size());
  qy.reserve(elems.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::Matrix2d Jinv = mesh.jacobian[e].inverse();
    const double det = mesh.det[e];
    qx.push_back(det * (Jinv(0, 0) * se_ref.Q[0] + Jinv(1, 0) * se_ref.Q[1]));
    qy.push_back(det * (Jinv(0, 1) * se_ref.Q[0] + Jinv(1, 1) * se_ref.Q[1]));
  }
  g.Qx = assemble_matrix(qx, gmap);
  g.Qy = assemble_matrix(qy, gmap);
  return g;
}

// ---------------------------------------------------------------------------
// time marching and diagnostics

class TimeLoopBlowup : public std::runtime_error {
 public:
  explicit TimeLoopBlowup(long step)
      : std::runtime_error("rk4_integrate: non-finite state at step " +
                           std::to_string(step)),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Classical RK4; the final step is shortened to land exactly on T.
/// The observer (if any) sees the state after every accepted step.
template <class Rhs>
Vec rk4_integrate(Rhs&& rhs, Vec u, double dt, double T,
                  const std::function<void(double, const Vec&)>& observer = {}) {
  require(dt > 0.0 && T >= 0.0, "rk4_integrate: need dt > 0 and T >= 0");
  double t = 0.0;
  long step = 0;
  const double tend = T * (1.0 - 1e-14);
  while (t < tend) {
    const double h = std::min(dt, T - t);
    const Vec k1 = rhs(u);
    const Vec k2 = rhs(Vec(u + 0.5 * h * k1));
    const Vec k3 = rhs(Vec(u + 0.5 * h * k2));
    const Vec k4 = rhs(Vec(u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    ++step;
    if (!u.allFinite()) throw TimeLoopBlowup(step);
    if (observer) observer(t, u);
  }
  return u;
}

/// Normalized L2 error and energy change relative to the initial state.
inline std::pair<double, double> l2_error_and_energy(const Vec& u, const Vec& u0,
                                                     const Vec& norm_diag) {
  require(u.size() == u0.size() && u.size() == norm_diag.size(),
          "l2_error_and_energy: size mismatch");
  const Vec diff = u - u0;
  const double err =
      std::sqrt(diff.dot(norm_diag.asDiagonal() * diff)) / initial_condition_l2_norm();
  const double de =
      u.dot(norm_diag.asDiagonal() * u) - u0.dot(norm_diag.asDiagonal() * u0);
  return {err, de};
}

/// Time step from the CFL number: dt = cfl * dr / (sqrt(2) N), with dr the
/// minimum node distance on the reference element.
inline double time_step_from_cfl(double cfl, int N, double reference_dr) {
  require(cfl > 0.0 && N >= 1 && reference_dr > 0.0, "time_step_from_cfl: bad input");
  return cfl * reference_dr / (std::sqrt(2.0) * N);
}

struct CflResult {
  double cfl_max = 0.0;
  bool bracketed = false;  // false: the stability boundary left the bracket
};

/// Largest stable CFL in [lo, hi] to within `width`, assuming the one-period
/// stability indicator is monotone across the bracket.
template <class StableFn>
CflResult cfl_search(StableFn&& stable, double lo = 0.01, double hi = 4.0,
                     double width = 0.01) {
  if (!stable(lo)) return {lo, false};
  if (stable(hi)) return {hi, false};
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (stable(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, true};
}

/// Eigenvalues of the assembled operator Qx + Qy (dense solve).
inline CVec operator_spectrum(const GlobalOperators& g) {
  return eig_general(Mat(Mat(g.Qx) + Mat(g.Qy)));
}

}  // namespace sbp
