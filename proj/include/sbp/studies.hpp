/**
 * \file studies.hpp
 * \brief Drivers for the advection studies: discretization setup, convergence
 *        sweeps, energy histories, spectra, and the CFL stability search.
 */
#pragma once

#include <memory>
#include <vector>

#include "sbp/advection.hpp"
#include "sbp/cubature.hpp"

namespace sbp {

/// Maximally stable CFL numbers measured for these operators at N=32 with the
/// one-period norm test (bisection to +-0.01).  Studies default to 0.9x.
inline double default_cfl_max(Scheme scheme, int p) {
  require(p >= 1 && p <= 4, "default_cfl_max: unsupported degree");
  static const double csbp[4] = {1.8569, 2.2388, 1.8725, 1.9193};
  static const double dsbp[4] = {0.6880, 1.2647, 1.1556, 1.1088};
  switch (scheme) {
    case Scheme::csbp:
    case Scheme::se: return csbp[p - 1];
    case Scheme::dsbp: return dsbp[p - 1];
  }
  throw std::invalid_argument("default_cfl_max: unknown scheme");
}

/// A ready-to-march semi-discretization on the periodic mesh.
struct Discretization {
  std::function<Vec(const Vec&)> rhs;
  Vec u0;
  Vec norm;
  double reference_dr = 0.0;  // minimum reference-node distance (CFL scale)
  int n_dof = 0;
};

inline Discretization build_discretization(const CubatureRule& rule, Scheme scheme,
                                           int N,
                                           const Eigen::Vector2d& beta = {1.0, 1.0},
                                           double sigma = 1.0) {
  require(rule.dim == 2, "build_discretization: triangular operators only");
  const ElementOperators ref = build_element_operators(rule);
  const PeriodicTriMesh mesh = build_mesh(N);
  const auto elems = map_reference_nodes(mesh, ref);
  const auto gmap = build_global_numbering(mesh, elems, true);

  Discretization d;
  d.reference_dr = min_node_distance(ref.nodes);
  if (scheme == Scheme::dsbp) {
    auto faces = build_face_coupling(elems, gmap);
    auto sys = std::make_shared<DsbpSystem>(elems, std::move(faces), beta, sigma);
    d.u0 = sys->sample(initial_condition);
    d.norm = sys->norm();
    d.n_dof = sys->dof();
    d.rhs = [sys](const Vec& u) { return sys->rhs(u); };
  } else {
    const GlobalOperators g = scheme == Scheme::csbp
                                  ? assemble_global(elems, gmap, true)
                                  : assemble_global_se(mesh, ref, elems, gmap, true);
    auto sys = std::make_shared<CsbpSystem>(g, beta);
    d.u0 = sys->sample(initial_condition);
    d.norm = sys->norm();
    d.n_dof = sys->dof();
    d.rhs = [sys](const Vec& u) { return sys->rhs(u); };
  }
  return d;
}

/// Global operators of a study configuration (for spectra).
inline GlobalOperators build_global_for_scheme(const CubatureRule& rule,
                                               Scheme scheme, int N) {
  require(scheme != Scheme::dsbp, "build_global_for_scheme: csbp or se only");
  const ElementOperators ref = build_element_operators(rule);
  const PeriodicTriMesh mesh = build_mesh(N);
  const auto elems = map_reference_nodes(mesh, ref);
  const auto gmap = build_global_numbering(mesh, elems, true);
  return scheme == Scheme::csbp ? assemble_global(elems, gmap, true)
                                : assemble_global_se(mesh, ref, elems, gmap, true);
}

struct ConvergencePoint {
  int N = 0;
  double h = 0.0;
  double error = 0.0;
};

/// One advection period at the given CFL; returns the normalized L2 error
/// against the initial condition.
inline double run_one_period_error(const Discretization& d, double cfl, int N,
                                   double T = 1.0) {
  const double dt = time_step_from_cfl(cfl, N, d.reference_dr);
  const Vec u = rk4_integrate(d.rhs, d.u0, dt, T);
  return l2_error_and_energy(u, d.u0, d.norm).first;
}

inline std::vector<ConvergencePoint> run_convergence(
    const CubatureRule& rule, Scheme scheme, const std::vector<int>& Ns,
    double cfl, double sigma = 1.0) {
  std::vector<ConvergencePoint> points;
  for (int N : Ns) {
    const Discretization d = build_discretization(rule, scheme, N, {1.0, 1.0}, sigma);
    points.push_back({N, 1.0 / N, run_one_period_error(d, cfl, N)});
  }
  return points;
}

/// Least-squares slope of log(error) vs log(h) over the last `count` points.
inline double fitted_slope(const std::vector<ConvergencePoint>& points,
                           int count = 3) {
  require(static_cast<int>(points.size()) >= count && count >= 2,
          "fitted_slope: not enough points");
  const int start = static_cast<int>(points.size()) - count;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = start; i < static_cast<int>(points.size()); ++i) {
    const double x = std::log(points[i].h), y = std::log(points[i].error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = count;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct EnergySample {
  double t = 0.0;
  double delta_e = 0.0;
};

inline std::vector<EnergySample> run_energy_history(const CubatureRule& rule,
                                                    Scheme scheme, int N, double cfl,
                                                    double T, double sigma = 1.0,
                                                    int max_samples = 4000) {
  const Discretization d = build_discretization(rule, scheme, N, {1.0, 1.0}, sigma);
  const double dt = time_step_from_cfl(cfl, N, d.reference_dr);
  const long steps = static_cast<long>(std::ceil(T / dt));
  const long stride = std::max<long>(1, steps / max_samples);
  const double e0 = d.u0.dot(d.norm.asDiagonal() * d.u0);
  std::vector<EnergySample> history;
  history.push_back({0.0, 0.0});
  long step = 0;
  rk4_integrate(
      d.rhs, d.u0, dt, T, [&](double t, const Vec& u) {
        ++step;
        if (step % stride == 0 || t >= T * (1.0 - 1e-12))
          history.push_back({t, u.dot(d.norm.asDiagonal() * u) - e0});
      });
  return history;
}

/// One-period stability probe for the CFL search.
inline bool stable_at_cfl(const Discretization& d, double cfl, int N) {
  const double dt = time_step_from_cfl(cfl, N, d.reference_dr);
  try {
    const Vec u = rk4_integrate(d.rhs, d.u0, dt, 1.0);
    const double n0 = std::sqrt(d.u0.dot(d.norm.asDiagonal() * d.u0));
    const double n1 = std::sqrt(u.dot(d.norm.asDiagonal() * u));
    return n1 <= n0 * (1.0 + 1e-12);
  } catch (const TimeLoopBlowup&) {
    return false;
  }
}

inline CflResult run_cfl_search(const CubatureRule& rule, Scheme scheme, int N,
                                double sigma = 1.0) {
  const Discretization d = build_discretization(rule, scheme, N, {1.0, 1.0}, sigma);
  return cfl_search([&](double cfl) { return stable_at_cfl(d, cfl, N); });
}

}  // namespace sbp
