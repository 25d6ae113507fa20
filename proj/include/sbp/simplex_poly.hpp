/**
 * \file simplex_poly.hpp
 * \brief Monomial and orthonormal polynomial bases on the reference triangle
 *        and tetrahedron, with derivative (generalized Vandermonde) matrices.
 *
 * The orthonormal family is the Koornwinder-Dubiner basis evaluated through
 * collapsed coordinates and scaled to the unit simplex, so the Gram matrix
 * w.r.t. the plain L2 inner product is the identity.
 */
#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "sbp/types.hpp"

namespace sbp {

/// Size of the total-degree-p polynomial basis: binom(p+d, d).
inline int basis_size(int p, int d) {
  require(p >= 0, "basis_size: degree must be >= 0");
  require(d == 2 || d == 3, "basis_size: dim must be 2 or 3");
  return d == 2 ? (p + 1) * (p + 2) / 2 : (p + 1) * (p + 2) * (p + 3) / 6;
}

/// Nodes required on each boundary facet of a degree-p operator:
/// binom(p+d-1, d-1).
inline int facet_node_count(int p, int d) {
  require(d == 2 || d == 3, "facet_node_count: dim must be 2 or 3");
  return d == 2 ? p + 1 : (p + 1) * (p + 2) / 2;
}

/// 1-based index of the 2-D monomial x^i y^(j-i) within the graded ordering.
inline int monomial_index(int i, int j) {
  require(i >= 0 && j >= i, "monomial_index: require 0 <= i <= j");
  return j * (j + 1) / 2 + i + 1;
}

/// Inverse of monomial_index: k -> (i, j) with P_k = x^i y^(j-i).
inline std::pair<int, int> monomial_exponents(int k) {
  require(k >= 1, "monomial_exponents: index is 1-based");
  int j = static_cast<int>((std::sqrt(8.0 * k - 7.0) - 1.0) / 2.0);
  while (j * (j + 1) / 2 >= k) --j;
  while ((j + 1) * (j + 2) / 2 < k) ++j;
  const int i = k - 1 - j * (j + 1) / 2;
  return {i, j};
}

/// Exponent triples (a,b,c) of all monomials with total degree <= p, in the
/// graded order matching monomial_index for d=2 (c = 0 there).
inline std::vector<std::array<int, 3>> monomial_exponent_list(int p, int d) {
  require(d == 2 || d == 3, "monomial_exponent_list: dim must be 2 or 3");
  std::vector<std::array<int, 3>> exps;
  exps.reserve(basis_size(p, d));
  for (int g = 0; g <= p; ++g) {
    if (d == 2) {
      for (int a = 0; a <= g; ++a) exps.push_back({a, g - a, 0});
    } else {
      for (int a = 0; a <= g; ++a)
        for (int b = 0; b <= g - a; ++b) exps.push_back({a, b, g - a - b});
    }
  }
  return exps;
}

enum class BasisKind { monomial, orthonormal };

struct BasisSpec {
  int dim = 2;
  int degree = 1;
  BasisKind kind = BasisKind::orthonormal;
  int size() const { return basis_size(degree, dim); }
};

/// Basis values and first derivatives evaluated on a node set.
struct VandermondeSet {
  Mat V, Vx, Vy, Vz;  // Vz empty unless dim == 3
  BasisSpec spec;
  const Mat& deriv(int dir) const {
    require(dir >= 0 && dir < spec.dim, "VandermondeSet: bad direction");
    return dir == 0 ? Vx : (dir == 1 ? Vy : Vz);
  }
};

namespace detail {

/// Jacobi polynomial orthonormal on [-1,1] w.r.t. (1-x)^alpha (1+x)^beta.
inline double jacobi_p(double x, double alpha, double beta, int n) {
  const double g0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                    std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                    std::tgamma(alpha + beta + 1.0);
  double pm1 = 1.0 / std::sqrt(g0);
  if (n == 0) return pm1;
  const double g1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * g0;
  double p = ((alpha + beta + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(g1);
  if (n == 1) return p;
  double aold = 2.0 / (2.0 + alpha + beta) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew =
        2.0 / (h1 + 2.0) *
        std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                  (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    const double pnext = (-aold * pm1 + (x - bnew) * p) / anew;
    pm1 = p;
    p = pnext;
    aold = anew;
  }
  return p;
}

inline double grad_jacobi_p(double x, double alpha, double beta, int n) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) *
         jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

/// Koornwinder-Dubiner value on the biunit triangle via collapsed coords.
inline double tri_mode(double a, double b, int i, int j) {
  return std::sqrt(2.0) * jacobi_p(a, 0, 0, i) * jacobi_p(b, 2 * i + 1, 0, j) *
         std::pow(1.0 - b, i);
}

inline std::pair<double, double> tri_mode_grad(double a, double b, int i, int j) {
  const double fa = jacobi_p(a, 0, 0, i), dfa = grad_jacobi_p(a, 0, 0, i);
  const double gb = jacobi_p(b, 2 * i + 1, 0, j), dgb = grad_jacobi_p(b, 2 * i + 1, 0, j);
  double dr = dfa * gb;
  if (i > 0) dr *= std::pow(0.5 * (1.0 - b), i - 1);
  double ds = dfa * gb * 0.5 * (1.0 + a);
  if (i > 0) ds *= std::pow(0.5 * (1.0 - b), i - 1);
  double tmp = dgb * std::pow(0.5 * (1.0 - b), i);
  if (i > 0) tmp -= 0.5 * i * gb * std::pow(0.5 * (1.0 - b), i - 1);
  ds += fa * tmp;
  const double scale = std::pow(2.0, i + 0.5);
  return {scale * dr, scale * ds};
}

inline double tet_mode(double a, double b, double c, int i, int j, int k) {
  return 2.0 * std::sqrt(2.0) * jacobi_p(a, 0, 0, i) *
         jacobi_p(b, 2 * i + 1, 0, j) * std::pow(1.0 - b, i) *
         jacobi_p(c, 2 * (i + j) + 2, 0, k) * std::pow(1.0 - c, i + j);
}

inline std::array<double, 3> tet_mode_grad(double a, double b, double c, int i,
                                           int j, int k) {
  const double fa = jacobi_p(a, 0, 0, i), dfa = grad_jacobi_p(a, 0, 0, i);
  const double gb = jacobi_p(b, 2 * i + 1, 0, j), dgb = grad_jacobi_p(b, 2 * i + 1, 0, j);
  const double hc = jacobi_p(c, 2 * (i + j) + 2, 0, k),
               dhc = grad_jacobi_p(c, 2 * (i + j) + 2, 0, k);
  double dr = dfa * gb * hc;
  if (i > 0) dr *= std::pow(0.5 * (1.0 - b), i - 1);
  if (i + j > 0) dr *= std::pow(0.5 * (1.0 - c), i + j - 1);
  double ds = 0.5 * (1.0 + a) * dr;
  double tmp = dgb * std::pow(0.5 * (1.0 - b), i);
  if (i > 0) tmp -= 0.5 * i * gb * std::pow(0.5 * (1.0 - b), i - 1);
  if (i + j > 0) tmp *= std::pow(0.5 * (1.0 - c), i + j - 1);
  tmp *= fa * hc;
  ds += tmp;
  double dt = 0.5 * (1.0 + a) * dr + 0.5 * (1.0 + b) * tmp;
  double tmp2 = dhc * std::pow(0.5 * (1.0 - c), i + j);
  if (i + j > 0) tmp2 -= 0.5 * (i + j) * hc * std::pow(0.5 * (1.0 - c), i + j - 1);
  tmp2 *= fa * gb * std::pow(0.5 * (1.0 - b), i);
  dt += tmp2;
  const double scale = std::pow(2.0, 2 * i + j + 1.5);
  return {scale * dr, scale * ds, scale * dt};
}

}  // namespace detail

/// Evaluate the requested basis and its gradient at the given nodes.
/// Nodes closer than 1e-13 are rejected as degenerate unless
/// `check_degenerate` is cleared (solver-internal trial configurations).
inline VandermondeSet eval_basis(const NodeSet& nodes, const BasisSpec& spec,
                                 bool check_degenerate = true) {
  const int d = spec.dim;
  require(d == 2 || d == 3, "eval_basis: dim must be 2 or 3");
  require(nodes.cols() == d, "eval_basis: node dimension mismatch");
  const int n = static_cast<int>(nodes.rows());
  if (check_degenerate)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        require((nodes.row(i) - nodes.row(j)).norm() > 1e-13,
                "eval_basis: degenerate node set");

  const int m = spec.size();
  VandermondeSet out;
  out.spec = spec;
  out.V = Mat::Zero(n, m);
  out.Vx = Mat::Zero(n, m);
  out.Vy = Mat::Zero(n, m);
  if (d == 3) out.Vz = Mat::Zero(n, m);

  if (spec.kind == BasisKind::monomial) {
    const auto exps = monomial_exponent_list(spec.degree, d);
    for (int q = 0; q < n; ++q) {
      const double x = nodes(q, 0), y = nodes(q, 1), z = d == 3 ? nodes(q, 2) : 0.0;
      for (int k = 0; k < m; ++k) {
        const auto [a, b, c] = exps[k];
        const double xa = std::pow(x, a), yb = std::pow(y, b),
                     zc = d == 3 ? std::pow(z, c) : 1.0;
        out.V(q, k) = xa * yb * zc;
        out.Vx(q, k) = a == 0 ? 0.0 : a * std::pow(x, a - 1) * yb * zc;
        out.Vy(q, k) = b == 0 ? 0.0 : b * xa * std::pow(y, b - 1) * zc;
        if (d == 3)
          out.Vz(q, k) = c == 0 ? 0.0 : c * xa * yb * std::pow(z, c - 1);
      }
    }
    return out;
  }

  if (d == 2) {
    for (int q = 0; q < n; ++q) {
      const double r = 2.0 * nodes(q, 0) - 1.0, s = 2.0 * nodes(q, 1) - 1.0;
      const double a = std::abs(1.0 - s) > 1e-14 ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
      int col = 0;
      for (int g = 0; g <= spec.degree; ++g)
        for (int i = 0; i <= g; ++i, ++col) {
          const int j = g - i;
          out.V(q, col) = 2.0 * detail::tri_mode(a, s, i, j);
          const auto [dr, ds] = detail::tri_mode_grad(a, s, i, j);
          out.Vx(q, col) = 4.0 * dr;
          out.Vy(q, col) = 4.0 * ds;
        }
    }
    return out;
  }

  for (int q = 0; q < n; ++q) {
    const double r = 2.0 * nodes(q, 0) - 1.0, s = 2.0 * nodes(q, 1) - 1.0,
                 t = 2.0 * nodes(q, 2) - 1.0;
    const double a = std::abs(s + t) > 1e-14 ? 2.0 * (1.0 + r) / (-s - t) - 1.0 : -1.0;
    const double b = std::abs(1.0 - t) > 1e-14 ? 2.0 * (1.0 + s) / (1.0 - t) - 1.0 : -1.0;
    const double scale = 4.0 * std::sqrt(2.0);
    int col = 0;
    for (int g = 0; g <= spec.degree; ++g)
      for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g - i; ++j, ++col) {
          const int k = g - i - j;
          out.V(q, col) = 2.0 * std::sqrt(2.0) * detail::tet_mode(a, b, t, i, j, k);
          const auto grad = detail::tet_mode_grad(a, b, t, i, j, k);
          out.Vx(q, col) = scale * grad[0];
          out.Vy(q, col) = scale * grad[1];
          out.Vz(q, col) = scale * grad[2];
        }
  }
  return out;
}

}  // namespace sbp
