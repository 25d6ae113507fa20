#include <catch2/catch_amalgamated.hpp>

#include "sbp/quadrature.hpp"

using namespace sbp;

TEST_CASE("Gauss-Legendre integrates polynomials exactly", "[quadrature]") {
  for (int n = 1; n <= 8; ++n) {
    auto [x, w] = gauss_legendre(n);
    REQUIRE(w.sum() == Catch::Approx(2.0).margin(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      REQUIRE(s == Catch::Approx(exact).margin(1e-13));
    }
  }
}

TEST_CASE("Collapsed-coordinate simplex rules match closed-form monomial integrals",
          "[quadrature]") {
  for (int d : {2, 3}) {
    const int q = 10;
    auto [nodes, w] = simplex_quadrature(q, d);
    REQUIRE(w.sum() == Catch::Approx(reference_measure(d)).margin(1e-14));
    for (int a = 0; a <= q; ++a)
      for (int b = 0; a + b <= q; ++b)
        for (int c = 0; a + b + c <= q; ++c) {
          if (d == 2 && c > 0) continue;
          double s = 0.0;
          for (int i = 0; i < nodes.rows(); ++i) {
            double v = std::pow(nodes(i, 0), a) * std::pow(nodes(i, 1), b);
            if (d == 3) v *= std::pow(nodes(i, 2), c);
            s += w[i] * v;
          }
          REQUIRE(s == Catch::Approx(integrate_monomial({a, b, c}, d)).margin(1e-14));
        }
  }
}

TEST_CASE("Surface moments agree with the divergence theorem", "[quadrature]") {
  // \oint x^a y^b z^c n_dir dGamma == \int d/dx_dir (x^a y^b z^c) dOmega
  for (int d : {2, 3}) {
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; a + b <= 6; ++b)
        for (int c = 0; a + b + c <= 6; ++c) {
          if (d == 2 && c > 0) continue;
          const std::array<int, 3> e = {a, b, c};
          for (int dir = 0; dir < d; ++dir) {
            std::array<int, 3> de = e;
            double coeff = e[dir];
            double vol = 0.0;
            if (coeff > 0) {
              de[dir] -= 1;
              vol = coeff * integrate_monomial(de, d);
            }
            REQUIRE(surface_monomial_moment(e, dir, d) ==
                    Catch::Approx(vol).margin(1e-13));
          }
        }
  }
}

TEST_CASE("Surface moment spot values on the triangle", "[quadrature]") {
  REQUIRE(surface_monomial_moment({1, 0, 0}, 0, 2) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(surface_monomial_moment({0, 0, 0}, 0, 2) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(surface_monomial_moment({0, 2, 0}, 0, 2) == Catch::Approx(0.0).margin(1e-15));
}
