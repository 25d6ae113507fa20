/**
 * \file cubature.hpp
 * \brief Symmetry-orbit cubature rules on the triangle and tetrahedron.
 *
 * Node sets are unions of symmetry orbits (permutations of a barycentric
 * pattern), each carrying one weight.  Free orbit parameters and weights are
 * determined from the orthonormal moment equations; rules are certified
 * against independent monomial integrals before use.
 */
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sbp/linalg.hpp"
#include "sbp/quadrature.hpp"
#include "sbp/simplex_poly.hpp"
#include "sbp/types.hpp"

namespace sbp {

enum class OrbitKind {
  vertices,
  mid_edge,
  centroid,
  edge,
  s21,
  face_centroid,
  face_s21,
  s31,
  s22
};

inline const char* orbit_name(OrbitKind k) {
  switch (k) {
    case OrbitKind::vertices: return "vertices";
    case OrbitKind::mid_edge: return "mid-edge";
    case OrbitKind::centroid: return "centroid";
    case OrbitKind::edge: return "edge";
    case OrbitKind::s21: return "S21";
    case OrbitKind::face_centroid: return "face-centroid";
    case OrbitKind::face_s21: return "face-S21";
    case OrbitKind::s31: return "S31";
    case OrbitKind::s22: return "S22";
  }
  throw std::invalid_argument("orbit_name: unknown kind");
}

inline OrbitKind orbit_from_name(const std::string& s) {
  for (OrbitKind k : {OrbitKind::vertices, OrbitKind::mid_edge, OrbitKind::centroid,
                      OrbitKind::edge, OrbitKind::s21, OrbitKind::face_centroid,
                      OrbitKind::face_s21, OrbitKind::s31, OrbitKind::s22})
    if (s == orbit_name(k)) return k;
  throw std::invalid_argument("orbit_from_name: unknown kind '" + s + "'");
}

inline int orbit_param_count(OrbitKind k) {
  switch (k) {
    case OrbitKind::edge:
    case OrbitKind::s21:
    case OrbitKind::face_s21:
    case OrbitKind::s31:
    case OrbitKind::s22: return 1;
    default: return 0;
  }
}

struct SymmetryOrbit {
  OrbitKind kind = OrbitKind::vertices;
  std::vector<double> params;  // 0 or 1 entries
  double weight = 0.0;         // per node, in reference-measure units
};

namespace detail {

/// Barycentric pattern as (symbol per slot, value per symbol).  Symbols keep
/// the permutation count independent of coincidences in the double values.
inline void orbit_pattern(const SymmetryOrbit& o, int d, std::vector<int>& sym,
                          std::vector<double>& val) {
  const double alpha = o.params.empty() ? 0.0 : o.params[0];
  switch (o.kind) {
    case OrbitKind::vertices:
      sym.assign(d + 1, 1);
      sym[0] = 0;
      val = {1.0, 0.0};
      break;
    case OrbitKind::mid_edge:
      sym.assign(d + 1, 1);
      sym[0] = sym[1] = 0;
      val = {0.5, 0.0};
      break;
    case OrbitKind::centroid:
      sym.assign(d + 1, 0);
      val = {1.0 / (d + 1)};
      break;
    case OrbitKind::edge:
      sym.assign(d + 1, 2);
      sym[0] = 0;
      sym[1] = 1;
      val = {alpha, 1.0 - alpha, 0.0};
      break;
    case OrbitKind::s21:
      require(d == 2, "orbit_pattern: S21 is a triangle orbit");
      sym = {0, 0, 1};
      val = {alpha, 1.0 - 2.0 * alpha};
      break;
    case OrbitKind::face_centroid:
      require(d == 3, "orbit_pattern: face-centroid is a tetrahedron orbit");
      sym = {0, 0, 0, 1};
      val = {1.0 / 3.0, 0.0};
      break;
    case OrbitKind::face_s21:
      require(d == 3, "orbit_pattern: face-S21 is a tetrahedron orbit");
      sym = {0, 0, 1, 2};
      val = {alpha, 1.0 - 2.0 * alpha, 0.0};
      break;
    case OrbitKind::s31:
      require(d == 3, "orbit_pattern: S31 is a tetrahedron orbit");
      sym = {0, 0, 0, 1};
      val = {alpha, 1.0 - 3.0 * alpha};
      break;
    case OrbitKind::s22:
      require(d == 3, "orbit_pattern: S22 is a tetrahedron orbit");
      sym = {0, 0, 1, 1};
      val = {alpha, 0.5 - alpha};
      break;
  }
  std::sort(sym.begin(), sym.end());
}

/// Expand without range validation (used inside the nonlinear solve).
inline NodeSet expand_orbit_raw(const SymmetryOrbit& o, int d) {
  std::vector<int> sym;
  std::vector<double> val;
  orbit_pattern(o, d, sym, val);
  std::vector<Vec> rows;
  do {
    Vec pt(d);
    for (int m = 1; m <= d; ++m) pt[m - 1] = val[sym[m]];
    rows.push_back(pt);
  } while (std::next_permutation(sym.begin(), sym.end()));
  NodeSet out(static_cast<int>(rows.size()), d);
  for (int i = 0; i < out.rows(); ++i) out.row(i) = rows[i];
  return out;
}

}  // namespace detail

inline int orbit_node_count(OrbitKind k, int d) {
  SymmetryOrbit o{k, orbit_param_count(k) ? std::vector<double>{0.1} : std::vector<double>{}, 0.0};
  return static_cast<int>(detail::expand_orbit_raw(o, d).rows());
}

/// Open parameter ranges that keep every node inside the closed simplex and
/// the orbit non-degenerate.
inline void validate_orbit(const SymmetryOrbit& o, int d) {
  require(static_cast<int>(o.params.size()) == orbit_param_count(o.kind),
          "validate_orbit: wrong parameter count");
  if (o.params.empty()) return;
  const double a = o.params[0];
  const double tol = 1e-9;
  auto open = [&](double lo, double hi) {
    require(a > lo + tol && a < hi - tol, "validate_orbit: parameter outside open range");
  };
  switch (o.kind) {
    case OrbitKind::edge:
      open(0.0, 1.0);
      require(std::abs(a - 0.5) > tol, "validate_orbit: edge orbit degenerates to mid-edge");
      break;
    case OrbitKind::s21:
    case OrbitKind::face_s21:
      open(0.0, 0.5);
      require(std::abs(a - 1.0 / 3.0) > tol, "validate_orbit: S21 orbit degenerates to centroid");
      break;
    case OrbitKind::s31:
      open(0.0, 1.0 / 3.0);
      require(std::abs(a - 0.25) > tol, "validate_orbit: S31 orbit degenerates to centroid");
      break;
    case OrbitKind::s22:
      open(0.0, 0.5);
      require(std::abs(a - 0.25) > tol, "validate_orbit: S22 orbit degenerates to centroid");
      break;
    default: break;
  }
}

/// All distinct permutations of the orbit pattern, as Cartesian reference
/// coordinates.  Throws if the parameter is outside its open range.
inline NodeSet expand_orbit(const SymmetryOrbit& o, int d) {
  require(d == 2 || d == 3, "expand_orbit: dim must be 2 or 3");
  validate_orbit(o, d);
  return detail::expand_orbit_raw(o, d);
}

/// Active orbits for the degree-p operator node sets (p = 1..4).
inline std::vector<SymmetryOrbit> orbit_template(int p, int d) {
  require(d == 2 || d == 3, "orbit_template: dim must be 2 or 3");
  require(p >= 1 && p <= 4, "orbit_template: unsupported degree");
  using K = OrbitKind;
  auto orbit = [](K k, std::vector<double> prm) {
    return SymmetryOrbit{k, std::move(prm), 0.0};
  };
  std::vector<SymmetryOrbit> t;
  const double lob4 = (1.0 - std::sqrt(1.0 / 5.0)) / 2.0;  // degree-3 Lobatto
  const double lob5 = (1.0 - std::sqrt(3.0 / 7.0)) / 2.0;  // degree-4 Lobatto
  if (d == 2) {
    switch (p) {
      case 1: t = {orbit(K::vertices, {})}; break;
      case 2: t = {orbit(K::vertices, {}), orbit(K::mid_edge, {}), orbit(K::centroid, {})}; break;
      case 3: t = {orbit(K::vertices, {}), orbit(K::edge, {lob4}), orbit(K::s21, {0.25})}; break;
      case 4:
        t = {orbit(K::vertices, {}), orbit(K::mid_edge, {}), orbit(K::edge, {lob5}),
             orbit(K::s21, {0.15}), orbit(K::s21, {0.4})};
        break;
    }
  } else {
    switch (p) {
      case 1: t = {orbit(K::vertices, {})}; break;
      case 2: t = {orbit(K::vertices, {}), orbit(K::mid_edge, {}), orbit(K::centroid, {})}; break;
      case 3:
        t = {orbit(K::vertices, {}), orbit(K::face_centroid, {}), orbit(K::edge, {lob4}),
             orbit(K::s31, {0.2})};
        break;
      case 4:
        t = {orbit(K::vertices, {}), orbit(K::mid_edge, {}), orbit(K::centroid, {}),
             orbit(K::edge, {lob5}), orbit(K::face_s21, {0.2}), orbit(K::s31, {0.2}),
             orbit(K::s22, {0.1})};
        break;
    }
  }
  int total = 0;
  for (const auto& o : t) total += orbit_node_count(o.kind, d);
  double w0 = reference_measure(d) / total;
  for (auto& o : t) o.weight = w0;
  return t;
}

struct CubatureRule {
  int dim = 2;
  int degree = 1;           // operator degree p
  int certified_degree = 0; // exactness degree established by verification
  std::vector<SymmetryOrbit> orbits;
  double residual = std::numeric_limits<double>::infinity();
  std::string branch;

  int node_count() const {
    int n = 0;
    for (const auto& o : orbits) n += orbit_node_count(o.kind, dim);
    return n;
  }
  NodeSet nodes() const {
    NodeSet out(node_count(), dim);
    int at = 0;
    for (const auto& o : orbits) {
      const NodeSet part = detail::expand_orbit_raw(o, dim);
      out.middleRows(at, part.rows()) = part;
      at += static_cast<int>(part.rows());
    }
    return out;
  }
  Vec weights() const {
    Vec w(node_count());
    int at = 0;
    for (const auto& o : orbits) {
      const int cnt = orbit_node_count(o.kind, dim);
      w.segment(at, cnt).setConstant(o.weight);
      at += cnt;
    }
    return w;
  }
};

/// Orthonormal moment defects of the rule up to total degree q.
inline Vec moment_residual(const CubatureRule& rule, int q) {
  const NodeSet nodes = rule.nodes();
  const Vec w = rule.weights();
  const VandermondeSet vs =
      eval_basis(nodes, {rule.dim, q, BasisKind::orthonormal});
  Vec res = vs.V.transpose() * w;
  res[0] -= std::sqrt(reference_measure(rule.dim));
  return res;
}

/// Max absolute moment error up to degree q, checked in both the orthonormal
/// and the monomial basis (the latter against the closed-form integrals).
inline double verify_cubature(const CubatureRule& rule, int q) {
  double err = moment_residual(rule, q).lpNorm<Eigen::Infinity>();
  const NodeSet nodes = rule.nodes();
  const Vec w = rule.weights();
  const VandermondeSet mono = eval_basis(nodes, {rule.dim, q, BasisKind::monomial});
  const auto exps = monomial_exponent_list(q, rule.dim);
  for (int k = 0; k < static_cast<int>(exps.size()); ++k) {
    const double approx = w.dot(mono.V.col(k));
    err = std::max(err, std::abs(approx - integrate_monomial(exps[k], rule.dim)));
  }
  return err;
}

namespace detail {

/// Per-facet node counts (facet m is where barycentric coordinate m vanishes).
inline std::vector<int> facet_node_counts(const NodeSet& nodes, int d) {
  std::vector<int> counts(d + 1, 0);
  for (int i = 0; i < nodes.rows(); ++i) {
    const Vec b = barycentric(nodes.row(i).transpose());
    for (int m = 0; m <= d; ++m)
      if (std::abs(b[m]) < 1e-9) ++counts[m];
  }
  return counts;
}

inline bool admissible_rule(const CubatureRule& rule) {
  for (const auto& o : rule.orbits) {
    if (o.weight <= 1e-9) return false;
    try {
      validate_orbit(o, rule.dim);
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  const NodeSet nodes = rule.nodes();
  if (min_node_distance(nodes) < 1e-8) return false;
  const int per_facet = facet_node_count(rule.degree, rule.dim);
  for (int c : facet_node_counts(nodes, rule.dim))
    if (c != per_facet) return false;
  return true;
}

inline std::vector<double> seed_grid(OrbitKind k) {
  const double lob4 = (1.0 - std::sqrt(1.0 / 5.0)) / 2.0;
  const double lob5 = (1.0 - std::sqrt(3.0 / 7.0)) / 2.0;
  const double gauss2 = (1.0 - std::sqrt(1.0 / 3.0)) / 2.0;
  switch (k) {
    case OrbitKind::edge: return {lob5, gauss2, lob4, 0.33, 0.4};
    case OrbitKind::s21:
    case OrbitKind::face_s21:
      return {0.08, 0.12, 0.165, 0.21, 0.26, 0.31, 0.37, 0.42, 0.46};
    case OrbitKind::s31: return {0.07, 0.11, 0.16, 0.21, 0.26, 0.31};
    case OrbitKind::s22: return {0.05, 0.1, 0.15, 0.2, 0.3, 0.35, 0.4, 0.45};
    default: return {};
  }
}

}  // namespace detail

/// Solve the nonlinear moment equations for the degree-(2p-1) rule on the
/// orbit template.  Seeds are ranked by the residual of the weight-linear
/// subproblem; the first branch with positive weights, in-range parameters,
/// and the required facet node counts is accepted.
inline CubatureRule solve_cubature(int p, int d) {
  CubatureRule rule;
  rule.dim = d;
  rule.degree = p;
  rule.orbits = orbit_template(p, d);
  const int q = 2 * p - 1;
  const int n_mom = basis_size(q, d);
  const int n_orb = static_cast<int>(rule.orbits.size());
  const double measure = reference_measure(d);

  std::vector<int> free_orbit;  // orbits carrying a parameter
  for (int o = 0; o < n_orb; ++o)
    if (!rule.orbits[o].params.empty()) free_orbit.push_back(o);
  const int n_free = static_cast<int>(free_orbit.size());

  Vec rhs = Vec::Zero(n_mom);
  rhs[0] = std::sqrt(measure);

  // moment matrix in orbit-weight space for fixed parameters
  auto weight_matrix = [&](const std::vector<SymmetryOrbit>& orbits) {
    Mat A = Mat::Zero(n_mom, n_orb);
    for (int o = 0; o < n_orb; ++o) {
      const NodeSet nodes = detail::expand_orbit_raw(orbits[o], d);
      const VandermondeSet vs = eval_basis(nodes, {d, q, BasisKind::orthonormal});
      A.col(o) = vs.V.colwise().sum().transpose();
    }
    return A;
  };

  // candidate parameter seeds, ranked by the linear-in-weights residual
  std::vector<std::vector<double>> seeds;
  if (n_free == 0) {
    seeds.push_back({});
  } else {
    std::vector<std::vector<double>> grids;
    for (int f : free_orbit) grids.push_back(detail::seed_grid(rule.orbits[f].kind));
    std::vector<int> idx(n_free, 0);
    while (true) {
      std::vector<double> s(n_free);
      for (int f = 0; f < n_free; ++f) s[f] = grids[f][idx[f]];
      bool ordered = true;  // identical-kind orbit pairs only once, ascending
      for (int f = 1; f < n_free; ++f)
        if (rule.orbits[free_orbit[f]].kind == rule.orbits[free_orbit[f - 1]].kind &&
            s[f] <= s[f - 1])
          ordered = false;
      if (ordered) seeds.push_back(s);
      int f = n_free - 1;
      while (f >= 0 && ++idx[f] == static_cast<int>(grids[f].size())) idx[f--] = 0;
      if (f < 0) break;
    }
  }

  std::vector<std::pair<double, int>> ranked;
  std::vector<Vec> seed_weights(seeds.size());
  for (int s = 0; s < static_cast<int>(seeds.size()); ++s) {
    auto orbits = rule.orbits;
    for (int f = 0; f < n_free; ++f) orbits[free_orbit[f]].params[0] = seeds[s][f];
    const Mat A = weight_matrix(orbits);
    const Vec w = min_norm_lstsq(A, rhs);
    seed_weights[s] = w;
    ranked.emplace_back((A * w - rhs).norm(), s);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const int n_var = n_free + n_orb;
  auto unpack = [&](const Vec& x) {
    auto orbits = rule.orbits;
    for (int f = 0; f < n_free; ++f) orbits[free_orbit[f]].params[0] = x[f];
    for (int o = 0; o < n_orb; ++o) orbits[o].weight = x[n_free + o];
    return orbits;
  };
  auto moment_defect = [&](const Vec& x) -> Vec {
    const auto orbits = unpack(x);
    Vec res = -rhs;
    for (int o = 0; o < n_orb; ++o) {
      const NodeSet nodes = detail::expand_orbit_raw(orbits[o], d);
      const VandermondeSet vs = eval_basis(nodes, {d, q, BasisKind::orthonormal}, false);
      res += orbits[o].weight * vs.V.colwise().sum().transpose();
    }
    return res;
  };

  const int tries = std::min<int>(30, static_cast<int>(ranked.size()));
  LMOptions opts;
  opts.max_iterations = 150;
  opts.residual_tol = 5e-14;
  for (int t = 0; t < tries; ++t) {
    const int s = ranked[t].second;
    Vec x0(n_var);
    for (int f = 0; f < n_free; ++f) x0[f] = seeds[s][f];
    x0.tail(n_orb) = seed_weights[s];
    Vec x;
    try {
      x = levenberg_marquardt(moment_defect, x0, opts);
    } catch (const NonConvergence&) {
      continue;
    }
    CubatureRule cand = rule;
    cand.orbits = unpack(x);
    if (!detail::admissible_rule(cand)) continue;
    const double err = verify_cubature(cand, q);
    if (err > 1e-12) continue;
    cand.certified_degree = q;
    cand.residual = err;
    std::ostringstream os;
    os << "seed " << s;
    for (int f = 0; f < n_free; ++f) os << (f ? "," : " [") << seeds[s][f];
    os << (n_free ? "]" : "");
    cand.branch = os.str();
    return cand;
  }
  throw std::runtime_error("solve_cubature: no admissible branch converged (p=" +
                           std::to_string(p) + ", d=" + std::to_string(d) + ")");
}

// ---------------------------------------------------------------------------
// golden-file serialization

inline nlohmann::json cubature_to_json(const CubatureRule& rule) {
  nlohmann::json j;
  j["dimension"] = rule.dim;
  j["degree"] = rule.degree;
  j["certified_degree"] = rule.certified_degree;
  j["residual"] = rule.residual;
  j["branch"] = rule.branch;
  j["orbits"] = nlohmann::json::array();
  for (const auto& o : rule.orbits)
    j["orbits"].push_back({{"kind", orbit_name(o.kind)},
                           {"params", o.params},
                           {"weight", o.weight}});
  return j;
}

/// Parse a rule and re-certify it; residual above 1e-12 rejects the file.
inline CubatureRule cubature_from_json(const nlohmann::json& j) {
  CubatureRule rule;
  rule.dim = j.at("dimension").get<int>();
  rule.degree = j.at("degree").get<int>();
  rule.certified_degree = j.at("certified_degree").get<int>();
  rule.branch = j.value("branch", "");
  for (const auto& jo : j.at("orbits")) {
    SymmetryOrbit o;
    o.kind = orbit_from_name(jo.at("kind").get<std::string>());
    o.params = jo.at("params").get<std::vector<double>>();
    o.weight = jo.at("weight").get<double>();
    rule.orbits.push_back(o);
  }
  rule.residual = verify_cubature(rule, rule.certified_degree);
  if (rule.residual > 1e-12)
    throw std::runtime_error("cubature_from_json: rule fails re-verification");
  return rule;
}

inline std::string cubature_filename(int p, int d) {
  return (d == 2 ? std::string("tri_p") : std::string("tet_p")) + std::to_string(p) +
         ".json";
}

inline void save_cubature(const CubatureRule& rule, const std::string& path) {
  std::ofstream f(path);
  require(f.good(), "save_cubature: cannot open " + path);
  f << cubature_to_json(rule).dump(2) << "\n";
}

inline CubatureRule load_cubature(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) throw std::runtime_error("load_cubature: cannot open " + path);
  nlohmann::json j;
  f >> j;
  return cubature_from_json(j);
}

}  // namespace sbp
