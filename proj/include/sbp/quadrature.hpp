/**
 * \file quadrature.hpp
 * \brief Gauss-Legendre rules, collapsed-coordinate simplex quadrature, and
 *        exact monomial integrals on the reference simplex.
 *
 * These rules are independent of the cubature module: they integrate through
 * a tensor-product rule on the collapsed square/cube and serve as the
 * reference for every exactness check in the library.
 */
#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "sbp/types.hpp"

namespace sbp {

/// Gauss-Legendre nodes and weights on [-1,1], exact for degree 2n-1.
inline std::pair<Vec, Vec> gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n must be >= 1");
  Vec x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

/// Gauss-Legendre on [0,1].
inline std::pair<Vec, Vec> gauss_legendre01(int n) {
  auto [x, w] = gauss_legendre(n);
  return {(x.array() + 1.0) / 2.0, w / 2.0};
}

/// Quadrature rule on the reference simplex exact for total degree >= `degree`,
/// built from a tensor-product Gauss-Legendre rule on the collapsed hypercube.
inline std::pair<NodeSet, Vec> simplex_quadrature(int degree, int dim) {
  require(degree >= 0, "simplex_quadrature: degree must be >= 0");
  require(dim == 2 || dim == 3, "simplex_quadrature: dim must be 2 or 3");
  const int n1 = degree / 2 + 3;  // covers the +2 degree gain of the collapse
  auto [t, wt] = gauss_legendre01(n1);
  if (dim == 2) {
    NodeSet nodes(n1 * n1, 2);
    Vec w(n1 * n1);
    int m = 0;
    for (int iu = 0; iu < n1; ++iu)
      for (int iv = 0; iv < n1; ++iv, ++m) {
        const double u = t[iu], v = t[iv];
        nodes(m, 0) = u * (1.0 - v);
        nodes(m, 1) = v;
        w[m] = wt[iu] * wt[iv] * (1.0 - v);
      }
    return {nodes, w};
  }
  NodeSet nodes(n1 * n1 * n1, 3);
  Vec w(n1 * n1 * n1);
  int m = 0;
  for (int iu = 0; iu < n1; ++iu)
    for (int iv = 0; iv < n1; ++iv)
      for (int iw = 0; iw < n1; ++iw, ++m) {
        const double u = t[iu], v = t[iv], s = t[iw];
        nodes(m, 0) = u * (1.0 - v) * (1.0 - s);
        nodes(m, 1) = v * (1.0 - s);
        nodes(m, 2) = s;
        w[m] = wt[iu] * wt[iv] * wt[iw] * (1.0 - v) * (1.0 - s) * (1.0 - s);
      }
  return {nodes, w};
}

/// Exact integral of x^a y^b (z^c) over the reference simplex:
/// a! b! / (a+b+2)! on the triangle, a! b! c! / (a+b+c+3)! on the tetrahedron.
inline double integrate_monomial(const std::array<int, 3>& e, int dim) {
  require(e[0] >= 0 && e[1] >= 0 && e[2] >= 0, "integrate_monomial: negative exponent");
  require(dim == 2 || dim == 3, "integrate_monomial: dim must be 2 or 3");
  const double fa = std::tgamma(e[0] + 1.0);
  const double fb = std::tgamma(e[1] + 1.0);
  if (dim == 2) {
    require(e[2] == 0, "integrate_monomial: z exponent with dim=2");
    return fa * fb / std::tgamma(e[0] + e[1] + 3.0);
  }
  const double fc = std::tgamma(e[2] + 1.0);
  return fa * fb * fc / std::tgamma(e[0] + e[1] + e[2] + 4.0);
}

/// Exact boundary moment \oint x^a y^b (z^c) n_dir dGamma on the reference
/// simplex, assembled from closed-form facet integrals.
inline double surface_monomial_moment(const std::array<int, 3>& e, int dir, int dim) {
  require(dir >= 0 && dir < dim, "surface_monomial_moment: bad direction");
  const int a = e[0], b = e[1], c = e[2];
  if (dim == 2) {
    require(c == 0, "surface_monomial_moment: z exponent with dim=2");
    // hypotenuse (n = (1,1)/sqrt(2)) plus the coordinate edge opposite `dir`
    const double hyp =
        std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
    if (dir == 0) return hyp - (a == 0 ? 1.0 / (b + 1.0) : 0.0);
    return hyp - (b == 0 ? 1.0 / (a + 1.0) : 0.0);
  }
  const double fa = std::tgamma(a + 1.0), fb = std::tgamma(b + 1.0),
               fc = std::tgamma(c + 1.0);
  const double oblique = fa * fb * fc / std::tgamma(a + b + c + 3.0);
  auto coord_face = [](int ea, int eb, int ec) {
    // integral over the face where the ec-exponent coordinate vanishes
    return ec == 0 ? std::tgamma(ea + 1.0) * std::tgamma(eb + 1.0) /
                         std::tgamma(ea + eb + 3.0)
                   : 0.0;
  };
  if (dir == 0) return oblique - coord_face(b, c, a);
  if (dir == 1) return oblique - coord_face(a, c, b);
  return oblique - coord_face(a, b, c);
}

}  // namespace sbp
