#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "sbp/cubature.hpp"
#include "test_util.hpp"

using namespace sbp;
using sbp::testing::test_cubature;

TEST_CASE("orbit expansion produces the tabulated node counts", "[cubature]") {
  const NodeSet c = expand_orbit({OrbitKind::centroid, {}, 0.0}, 2);
  REQUIRE(c.rows() == 1);
  REQUIRE(c(0, 0) == Catch::Approx(1.0 / 3.0).margin(1e-15));
  REQUIRE(c(0, 1) == Catch::Approx(1.0 / 3.0).margin(1e-15));

  REQUIRE(expand_orbit({OrbitKind::vertices, {}, 0.0}, 2).rows() == 3);
  REQUIRE(expand_orbit({OrbitKind::s22, {0.1}, 0.0}, 3).rows() == 6);
  REQUIRE(expand_orbit({OrbitKind::edge, {0.3}, 0.0}, 3).rows() == 12);
  REQUIRE(expand_orbit({OrbitKind::face_s21, {0.2}, 0.0}, 3).rows() == 12);

  REQUIRE_THROWS_AS(expand_orbit({OrbitKind::s21, {0.6}, 0.0}, 2),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(expand_orbit({OrbitKind::s31, {0.34}, 0.0}, 3),
                    std::invalid_argument);
}

TEST_CASE("orbit templates match the operator node tables", "[cubature]") {
  const int tri_nodes[] = {3, 7, 12, 18};
  const int tri_free[] = {0, 0, 2, 3};
  const int tet_nodes[] = {4, 11, 24, 45};
  const int tet_free[] = {0, 0, 2, 4};
  for (int p = 1; p <= 4; ++p) {
    for (int d : {2, 3}) {
      const auto t = orbit_template(p, d);
      int nodes = 0, free = 0;
      for (const auto& o : t) {
        nodes += orbit_node_count(o.kind, d);
        free += static_cast<int>(o.params.size());
      }
      REQUIRE(nodes == (d == 2 ? tri_nodes[p - 1] : tet_nodes[p - 1]));
      REQUIRE(free == (d == 2 ? tri_free[p - 1] : tet_free[p - 1]));
    }
  }
  const auto t22 = orbit_template(2, 2);
  REQUIRE(t22.size() == 3);
  REQUIRE(t22[0].kind == OrbitKind::vertices);
  REQUIRE(t22[1].kind == OrbitKind::mid_edge);
  REQUIRE(t22[2].kind == OrbitKind::centroid);
  const auto t12 = orbit_template(1, 2);
  REQUIRE(t12.size() == 1);
  REQUIRE(t12[0].kind == OrbitKind::vertices);
  const auto t43 = orbit_template(4, 3);
  const std::set<OrbitKind> kinds = {t43[0].kind, t43[1].kind, t43[2].kind,
                                     t43[3].kind, t43[4].kind, t43[5].kind,
                                     t43[6].kind};
  REQUIRE(kinds == std::set<OrbitKind>{OrbitKind::vertices, OrbitKind::mid_edge,
                                       OrbitKind::centroid, OrbitKind::edge,
                                       OrbitKind::face_s21, OrbitKind::s31,
                                       OrbitKind::s22});
  REQUIRE_THROWS_AS(orbit_template(5, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(orbit_template(0, 3), std::invalid_argument);
}

TEST_CASE("moment_residual detects weight perturbations", "[cubature]") {
  CubatureRule r;
  r.dim = 2;
  r.degree = 1;
  r.orbits = {{OrbitKind::vertices, {}, 1.0 / 6.0}};
  REQUIRE(moment_residual(r, 1).lpNorm<Eigen::Infinity>() < 1e-14);
  CubatureRule bad = r;
  bad.orbits[0].weight += 1e-3;
  REQUIRE(moment_residual(bad, 1).lpNorm<Eigen::Infinity>() >= 1e-4);
}

TEST_CASE("solved low-order rules hit the closed-form weights", "[cubature]") {
  const CubatureRule tri1 = solve_cubature(1, 2);
  REQUIRE(tri1.orbits.size() == 1);
  REQUIRE(tri1.orbits[0].weight == Catch::Approx(1.0 / 6.0).margin(1e-13));

  const CubatureRule tet1 = solve_cubature(1, 3);
  REQUIRE(tet1.orbits[0].weight == Catch::Approx(1.0 / 24.0).margin(1e-13));

  const CubatureRule tri2 = solve_cubature(2, 2);
  for (const auto& o : tri2.orbits) {
    const double expect = o.kind == OrbitKind::vertices ? 1.0 / 40.0
                          : o.kind == OrbitKind::mid_edge ? 1.0 / 15.0
                                                          : 9.0 / 40.0;
    REQUIRE(o.weight == Catch::Approx(expect).margin(1e-12));
  }
  REQUIRE(tri2.weights().sum() == Catch::Approx(0.5).margin(1e-13));
  // independent spot check: integral of x*y over the triangle is 1/24
  const NodeSet nodes = tri2.nodes();
  const Vec w = tri2.weights();
  double xy = 0.0;
  for (int i = 0; i < nodes.rows(); ++i) xy += w[i] * nodes(i, 0) * nodes(i, 1);
  REQUIRE(xy == Catch::Approx(1.0 / 24.0).margin(1e-13));
}

TEST_CASE("shipped rules are certified at degree 2p-1", "[cubature]") {
  for (int d : {2, 3})
    for (int p = 1; p <= 4; ++p) {
      const CubatureRule& rule = test_cubature(p, d);
      REQUIRE(rule.certified_degree == 2 * p - 1);
      REQUIRE(verify_cubature(rule, 2 * p - 1) <= 1e-12);
      REQUIRE(rule.weights().minCoeff() > 0.0);
      REQUIRE(rule.weights().sum() ==
              Catch::Approx(reference_measure(d)).margin(1e-13));
    }
}

TEST_CASE("degree-5 triangle rule is not exact beyond its design degree",
          "[cubature]") {
  const CubatureRule& rule = test_cubature(3, 2);
  REQUIRE(verify_cubature(rule, 5) <= 1e-12);
  const double err6 = verify_cubature(rule, 6);
  if (err6 <= 1e-6)
    WARN("p=3 triangle rule exact beyond design degree: err(q=6) = " << err6);
  else
    SUCCEED();
}

TEST_CASE("facet node counts match the boundary-operator requirement",
          "[cubature]") {
  for (int d : {2, 3})
    for (int p = 1; p <= 4; ++p) {
      const CubatureRule& rule = test_cubature(p, d);
      const NodeSet nodes = rule.nodes();
      const int expect = facet_node_count(p, d);
      std::vector<int> counts(d + 1, 0);
      for (int i = 0; i < nodes.rows(); ++i) {
        const Vec b = barycentric(nodes.row(i).transpose());
        for (int m = 0; m <= d; ++m)
          if (std::abs(b[m]) < 1e-12) ++counts[m];
      }
      for (int m = 0; m <= d; ++m) REQUIRE(counts[m] == expect);
    }
}

TEST_CASE("simplex symmetries permute nodes and preserve weights", "[cubature]") {
  for (int d : {2, 3})
    for (int p = 1; p <= 4; ++p) {
      const CubatureRule& rule = test_cubature(p, d);
      const NodeSet nodes = rule.nodes();
      const Vec w = rule.weights();
      const int n = static_cast<int>(nodes.rows());
      // symmetries act as permutations of the barycentric coordinates
      std::vector<int> perm(d + 1);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (int i = 0; i < n; ++i) {
          const Vec b = barycentric(nodes.row(i).transpose());
          Vec bp(d + 1);
          for (int m = 0; m <= d; ++m) bp[m] = b[perm[m]];
          const Vec mapped = bp.tail(d);
          double best = 1e300;
          int match = -1;
          for (int j = 0; j < n; ++j) {
            const double dist = (nodes.row(j).transpose() - mapped).norm();
            if (dist < best) {
              best = dist;
              match = j;
            }
          }
          REQUIRE(best < 1e-12);
          REQUIRE(w[match] == Catch::Approx(w[i]).margin(1e-12));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("golden files round-trip and re-verify on load", "[cubature]") {
  const CubatureRule rule = solve_cubature(3, 2);
  const auto j = cubature_to_json(rule);
  const CubatureRule back = cubature_from_json(j);
  REQUIRE(back.certified_degree == rule.certified_degree);
  REQUIRE((back.nodes() - rule.nodes()).lpNorm<Eigen::Infinity>() == 0.0);
  REQUIRE((back.weights() - rule.weights()).lpNorm<Eigen::Infinity>() == 0.0);

  auto corrupted = j;
  corrupted["orbits"][0]["weight"] = j["orbits"][0]["weight"].get<double>() + 1e-3;
  REQUIRE_THROWS_AS(cubature_from_json(corrupted), std::runtime_error);
}
