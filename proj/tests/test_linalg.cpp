#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sbp/linalg.hpp"

using namespace sbp;

TEST_CASE("min_norm_lstsq basic solves", "[linalg]") {
  Mat I = Mat::Identity(2, 2);
  Vec b(2);
  b << 1, 2;
  REQUIRE((min_norm_lstsq(I, b) - b).norm() < 1e-14);

  Mat A(2, 2);
  A << 1, 0, 0, 0;
  Vec b2(2);
  b2 << 3, 0;
  const Vec x = min_norm_lstsq(A, b2);
  REQUIRE(x[0] == Catch::Approx(3.0).margin(1e-13));
  REQUIRE(std::abs(x[1]) < 1e-13);  // min-norm zeroes the null component

  Mat bad(1, 1);
  bad << std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(min_norm_lstsq(bad, Vec::Ones(1)), std::invalid_argument);
}

TEST_CASE("min_norm_lstsq picks the null-space-orthogonal solution", "[linalg]") {
  std::mt19937 rng(77);
  std::normal_distribution<double> gauss;
  // rank-3 consistent 6x4 system with an independently known null vector
  Eigen::MatrixXd G(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G(i, j) = gauss(rng);
  const Eigen::MatrixXd Qf = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
  const Eigen::MatrixXd range = Qf.leftCols(3);
  const Vec null_vec = Qf.col(3);
  Mat C(6, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) C(i, j) = gauss(rng);
  const Mat A = C * range.transpose();
  Vec x_true(4);
  x_true << 1.0, -2.0, 0.5, 3.0;
  const Vec b = A * x_true;
  const Vec x = min_norm_lstsq(A, b);
  REQUIRE((A * x - b).norm() < 1e-12);
  REQUIRE(std::abs(x.dot(null_vec)) < 1e-10);
  // appending a dependent row changes nothing
  Mat A2(7, 4);
  A2.topRows(6) = A;
  A2.row(6) = A.row(0) + 2.0 * A.row(3);
  Vec b2(7);
  b2.head(6) = b;
  b2[6] = b[0] + 2.0 * b[3];
  REQUIRE((min_norm_lstsq(A2, b2) - x).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("levenberg_marquardt solves small systems", "[linalg]") {
  auto lin = [](const Vec& x) -> Vec { return x.array() - 2.0; };
  Vec x0 = Vec::Zero(1);
  REQUIRE(std::abs(levenberg_marquardt(lin, x0)[0] - 2.0) < 1e-12);

  auto circ = [](const Vec& x) -> Vec {
    Vec r(2);
    r[0] = x[0] * x[0] + x[1] * x[1] - 1.0;
    r[1] = x[0] - x[1];
    return r;
  };
  Vec c0(2);
  c0 << 1.0, 0.0;
  const Vec sol = levenberg_marquardt(circ, c0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  REQUIRE(std::abs(std::abs(sol[0]) - inv_sqrt2) < 1e-10);
  REQUIRE(sol[0] == Catch::Approx(sol[1]).margin(1e-10));
}

TEST_CASE("levenberg_marquardt reports non-convergence with best iterate",
          "[linalg]") {
  auto stuck = [](const Vec& x) -> Vec {
    Vec r(1);
    r[0] = x[0] * x[0] + 1.0;  // no real root
    return r;
  };
  LMOptions opts;
  opts.max_iterations = 25;
  Vec x0 = Vec::Ones(1);
  try {
    levenberg_marquardt(stuck, x0, opts);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    REQUIRE(e.best().size() == 1);
    REQUIRE(e.residual_norm() >= 1.0);
  }
}

TEST_CASE("eig_general spot checks", "[linalg]") {
  Mat rot(2, 2);
  rot << 0, 1, -1, 0;
  CVec ev = eig_general(rot);
  std::sort(ev.data(), ev.data() + 2,
            [](auto a, auto b) { return a.imag() < b.imag(); });
  REQUIRE(std::abs(ev[0] - std::complex<double>(0, -1)) < 1e-12);
  REQUIRE(std::abs(ev[1] - std::complex<double>(0, 1)) < 1e-12);

  Mat diag(2, 2);
  diag << 3, 0, 0, -2;
  CVec ed = eig_general(diag);
  std::sort(ed.data(), ed.data() + 2,
            [](auto a, auto b) { return a.real() < b.real(); });
  REQUIRE(std::abs(ed[0].real() + 2.0) < 1e-12);
  REQUIRE(std::abs(ed[1].real() - 3.0) < 1e-12);

  REQUIRE_THROWS_AS(eig_general(Mat::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("antisymmetric matrices have imaginary spectra", "[linalg]") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  Mat A(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) A(i, j) = gauss(rng);
  const Mat S = A - A.transpose();
  const CVec ev = eig_general(S);
  for (int i = 0; i < 5; ++i) REQUIRE(std::abs(ev[i].real()) < 1e-10);
}

TEST_CASE("spectrum is invariant under permutation similarity", "[linalg]") {
  std::mt19937 rng(9);
  std::normal_distribution<double> gauss;
  const int n = 6;
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mat PA(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) PA(i, j) = A(perm[i], perm[j]);
  auto sorted = [](CVec v) {
    std::sort(v.data(), v.data() + v.size(), [](auto a, auto b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
  };
  const CVec e1 = sorted(eig_general(A));
  const CVec e2 = sorted(eig_general(PA));
  for (int i = 0; i < n; ++i) REQUIRE(std::abs(e1[i] - e2[i]) < 1e-8);
}
