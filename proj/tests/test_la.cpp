#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppimine/la.hpp"
#include "testutil.hpp"

using namespace ppimine::la;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = testutil::uniform(rng, -1.0, 1.0);
  return m;
}

std::vector<std::vector<double>> to_nested(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Matrix reconstruct(const Svd& svd, std::size_t k) {
  Matrix out(svd.u.rows(), svd.v.rows());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += svd.u(i, t) * svd.sigma[t] * svd.v(j, t);
      out(i, j) = s;
    }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

void check_orthonormal_columns(const Matrix& m, std::size_t upto, double tol) {
  for (std::size_t a = 0; a < upto; ++a)
    for (std::size_t b = a; b < upto; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) dot += m(i, a) * m(i, b);
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < tol);
    }
}

}  // namespace

TEST_CASE("svd of the identity has unit singular values") {
  Matrix eye(3, 3);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  Svd svd = thin_svd_serial(eye);
  REQUIRE(svd.sigma.size() == 3);
  for (double s : svd.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank-1 matrix exposes a single nonzero singular value") {
  Matrix m(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = double(i + 1) * double(j + 1);
  Svd svd = thin_svd_serial(m);
  CHECK(numeric_rank(svd, 4, 3) == 1);
  CHECK(svd.sigma[1] < 1e-10 * svd.sigma[0]);
  CHECK(max_abs_diff(reconstruct(svd, 1), m) < 1e-10);
}

TEST_CASE("random matrices match the dense reference decomposition") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    std::size_t rows = 3 + rng() % 10;
    std::size_t cols = 3 + rng() % 10;
    Matrix a = random_matrix(rng, rows, cols);
    Svd svd = thin_svd_serial(a);
    std::size_t r = std::min(rows, cols);

    auto ref_sigma = oracle::singular_values(to_nested(a));
    for (std::size_t i = 0; i < r; ++i)
      CHECK(svd.sigma[i] == doctest::Approx(ref_sigma[i]).epsilon(1e-8));

    // thin reconstruction recovers the input
    CHECK(max_abs_diff(reconstruct(svd, r), a) < 1e-9);

    // factors orthonormal up to the numeric rank
    std::size_t nr = numeric_rank(svd, rows, cols);
    check_orthonormal_columns(svd.u, nr, 1e-9);
    check_orthonormal_columns(svd.v, nr, 1e-9);

    // rank-k truncation equals the reference best rank-k approximation
    std::size_t k = 1 + rng() % r;
    if (k < r && svd.sigma[k - 1] - svd.sigma[k] < 1e-3) k = r;  // avoid near-ties
    auto ref = oracle::rank_k_approx(to_nested(a), k);
    Matrix mine = reconstruct(svd, k);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        CHECK(mine(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("spec example: random 10x8, k=4 matches dense truncation") {
  std::mt19937_64 rng(42);
  Matrix a = random_matrix(rng, 10, 8);
  Svd svd = thin_svd(a);
  auto ref = oracle::rank_k_approx(to_nested(a), 4);
  Matrix mine = reconstruct(svd, 4);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(std::abs(mine(i, j) - ref[i][j]) < 1e-8);
}

TEST_CASE("parallel and serial kernels agree") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 10; ++iter) {
    std::size_t rows = 4 + rng() % 20;
    std::size_t cols = 4 + rng() % 12;
    Matrix a = random_matrix(rng, rows, cols);
    Svd s1 = thin_svd_serial(a);
    Svd s2 = thin_svd_parallel(a);
    REQUIRE(s1.sigma.size() == s2.sigma.size());
    for (std::size_t i = 0; i < s1.sigma.size(); ++i)
      CHECK(s1.sigma[i] == doctest::Approx(s2.sigma[i]).epsilon(1e-9));
    std::size_t r = std::min(rows, cols);
    CHECK(max_abs_diff(reconstruct(s1, r), reconstruct(s2, r)) < 1e-9);
  }
}

TEST_CASE("parallel kernel is reproducible run to run") {
  std::mt19937_64 rng(17);
  Matrix a = random_matrix(rng, 24, 9);
  Svd s1 = thin_svd_parallel(a);
  Svd s2 = thin_svd_parallel(a);
  for (std::size_t i = 0; i < s1.sigma.size(); ++i) CHECK(s1.sigma[i] == s2.sigma[i]);
  CHECK(max_abs_diff(s1.u, s2.u) == 0.0);
  CHECK(max_abs_diff(s1.v, s2.v) == 0.0);
}

TEST_CASE("wide matrices go through the transposed path") {
  std::mt19937_64 rng(23);
  Matrix a = random_matrix(rng, 4, 9);
  Svd svd = thin_svd_serial(a);
  REQUIRE(svd.sigma.size() == 4);
  CHECK(svd.u.rows() == 4);
  CHECK(svd.v.rows() == 9);
  CHECK(max_abs_diff(reconstruct(svd, 4), a) < 1e-9);
}

TEST_CASE("truncation error is non-increasing in k") {
  std::mt19937_64 rng(31);
  Matrix a = random_matrix(rng, 12, 7);
  Svd svd = thin_svd(a);
  double prev = 1e300;
  for (std::size_t k = 1; k <= 7; ++k) {
    Matrix approx = reconstruct(svd, k);
    double err = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        double d = a(i, j) - approx(i, j);
        err += d * d;
      }
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}
