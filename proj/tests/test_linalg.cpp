#include <cmath>
#include <random>

#include "bgescore/linalg.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bge;

namespace {

// Random SPD matrix: A = B^T B + eps*I with B standard normal.
SpdMatrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix b(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) b(r, c) = gauss(rng);
  Matrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double s = (r == c) ? 0.5 : 0.0;
      for (int k = 0; k < n; ++k) s += b(k, r) * b(k, c);
      a(r, c) = s;
    }
  return SpdMatrix(a);
}

IndexSet random_subset(int n, std::mt19937_64& rng, bool allow_empty = false) {
  std::uniform_int_distribution<int> coin(0, 1);
  while (true) {
    IndexSet s;
    for (int v = 0; v < n; ++v)
      if (coin(rng)) s = s.with(v);
    if (allow_empty || !s.empty()) return s;
  }
}

}  // namespace

TEST_CASE("matrix basics") {
  Matrix m(2, 3, 1.5);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 1.5);
  m(0, 1) = -4.0;
  CHECK(m(0, 1) == -4.0);

  const Matrix lit{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(lit(0, 1) == 2.0);
  CHECK(lit(1, 0) == 3.0);
  CHECK(Matrix::identity(2)(0, 0) == 1.0);
  CHECK(Matrix::identity(2)(0, 1) == 0.0);
  CHECK(lit == Matrix{{1.0, 2.0}, {3.0, 4.0}});
}

TEST_CASE("index set ordering and set operations") {
  const IndexSet s{3, 1, 2};
  CHECK(s.size() == 3);
  CHECK(s[0] == 1);
  CHECK(s[2] == 3);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(0));
  CHECK(s.with(0) == IndexSet{0, 1, 2, 3});
  CHECK(s.without(2) == IndexSet{1, 3});
  CHECK(s.with(2) == s);
  CHECK(s.without(7) == s);
  CHECK(IndexSet{}.empty());

  CHECK_THROWS_AS(IndexSet(std::vector<int>{1, 1}), DomainError);
  CHECK_THROWS_AS(IndexSet(std::vector<int>{-1}), DomainError);
  CHECK(IndexSet(std::vector<int>{2, 0}) == IndexSet{0, 2});
}

TEST_CASE("spd matrix validation") {
  CHECK_THROWS_AS(SpdMatrix(Matrix(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 0.5}, {0.2, 1.0}}), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 2.0}, {2.0, 1.0}}), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1.0, 1.0}, {1.0, 1.0}}), NotPositiveDefinite);

  const SpdMatrix ok(Matrix{{2.0, 1.0}, {1.0, 2.0}});
  CHECK(ok.dim() == 2);
  CHECK(ok(0, 1) == 1.0);
  CHECK(SpdMatrix::scaled_identity(3, 0.5)(2, 2) == 0.5);
  CHECK(SpdMatrix::scaled_identity(3, 0.5)(0, 1) == 0.0);
  CHECK_THROWS_AS(SpdMatrix::scaled_identity(2, 0.0), NotPositiveDefinite);
}

TEST_CASE("cholesky factor") {
  const SpdMatrix a(Matrix{{4.0, 2.0}, {2.0, 3.0}});
  const Matrix l = cholesky(a);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(l(0, 1) == 0.0);

  std::mt19937_64 rng(7);
  for (int n = 1; n <= 6; ++n) {
    const SpdMatrix m = random_spd(n, rng);
    const Matrix f = cholesky(m);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += f(r, k) * f(c, k);
        CHECK(s == doctest::Approx(m(r, c)).epsilon(1e-12).scale(1.0));
      }
  }
}

TEST_CASE("submatrix log determinant") {
  const SpdMatrix a(Matrix{{2.0, 1.0}, {1.0, 2.0}});
  CHECK(logdet_submatrix(a, IndexSet{0, 1}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(logdet_submatrix(a, IndexSet{0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(logdet_submatrix(a, IndexSet{}), DomainError);

  CHECK_THROWS_AS(logdet_submatrix(Matrix{{1.0, 1.0}, {1.0, 1.0}}, IndexSet{0, 1}),
                  NotPositiveDefinite);
  CHECK_THROWS_AS(logdet_submatrix(a, IndexSet{0, 2}), DomainError);
}

TEST_CASE("submatrix log determinant matches cofactor expansion") {
  std::mt19937_64 rng(42);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const SpdMatrix a = random_spd(n, rng);
      const auto ld = oracle::to_ld(a.matrix());
      const IndexSet y = random_subset(n, rng);
      const double want = static_cast<double>(oracle::logdet(oracle::gather(ld, y)));
      CHECK(logdet_submatrix(a, y) == doctest::Approx(want).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("spd inverse") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    const SpdMatrix a = random_spd(n, rng);
    const SpdMatrix inv = spd_inverse(a);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += a(r, k) * inv(k, c);
        CHECK(s == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
      }
    const auto want = oracle::inverse(oracle::to_ld(a.matrix()));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        CHECK(inv(r, c) ==
              doctest::Approx(static_cast<double>(want[r][c])).epsilon(1e-9).scale(1.0));
    // Exactly symmetric by construction.
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) CHECK(inv(r, c) == inv(c, r));
  }
}

TEST_CASE("inverse-selected submatrix") {
  const SpdMatrix a(Matrix{{2.0, 1.0}, {1.0, 2.0}});
  // Selecting {0} in the inverse and inverting back gives the Schur
  // complement 2 - 1*(1/2)*1 = 3/2, not the plain entry 2.
  const SpdMatrix sel = inverse_selected_submatrix(a, IndexSet{0});
  CHECK(sel.dim() == 1);
  CHECK(sel(0, 0) == doctest::Approx(1.5).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (int n = 2; n <= 6; ++n) {
    const SpdMatrix m = random_spd(n, rng);
    const SpdMatrix m_inv = spd_inverse(m);
    const IndexSet y = random_subset(n, rng);
    const SpdMatrix s1 = inverse_selected_submatrix(m, y);
    const SpdMatrix s2 = inverse_selected_submatrix_from_inverse(m_inv.matrix(), y);
    REQUIRE(s1.dim() == y.size());
    REQUIRE(s2.dim() == y.size());
    for (int r = 0; r < y.size(); ++r)
      for (int c = 0; c < y.size(); ++c)
        CHECK(s1(r, c) == doctest::Approx(s2(r, c)).epsilon(1e-9).scale(1.0));
    // log|((A^-1)_YY)^-1| == -logdet of the selection in the inverse.
    if (!y.empty()) {
      const double lhs = logdet_submatrix(s1, [&] {
        IndexSet full;
        for (int k = 0; k < y.size(); ++k) full = full.with(k);
        return full;
      }());
      CHECK(lhs == doctest::Approx(-logdet_submatrix(m_inv, y)).epsilon(1e-9));
    }
  }
}

TEST_CASE("multivariate gamma in log space") {
  // l = 1 reduces to the ordinary log-gamma.
  for (double x : {0.5, 1.0, 3.7, 20.0})
    CHECK(log_multigamma(1, x) == doctest::Approx(std::lgamma(x / 2.0)).epsilon(1e-14));

  // Recurrence: lnGamma_l(x/2) - lnGamma_{l-1}((x-1)/2)
  //           = ((l-1)/2) ln pi + lnGamma(x/2).
  const double logpi = std::log(3.14159265358979323846);
  for (int l = 2; l <= 8; ++l)
    for (double x = l; x <= l + 30; x += 0.5) {
      const double lhs = log_multigamma(l, x) - log_multigamma(l - 1, x - 1.0);
      const double rhs = (l - 1) / 2.0 * logpi + std::lgamma(x / 2.0);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13).scale(1e2));
    }

  CHECK_THROWS_AS(log_multigamma(0, 1.0), DomainError);
  CHECK_THROWS_AS(log_multigamma(3, 2.0), DomainError);
  CHECK_THROWS_AS(log_multigamma(3, 1.5), DomainError);
  CHECK_NOTHROW(log_multigamma(3, 2.0 + 1e-9));
}
