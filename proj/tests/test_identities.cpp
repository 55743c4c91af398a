#include <cmath>

#include "chole/identities.hpp"
#include "chole/specialfn.hpp"
#include "doctest.h"

using namespace chole;

namespace {

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// Independent summation: plain loop until the terms fall below 1e-19 of the sum.
double T_loop(int v, double alpha) {
  double s1 = 0.0, s2 = 0.0;
  for (long m = 0; m < 2000000; ++m) {
    double n = 1.0 + 2.0 * m;
    double p = std::pow(n, -3.0 - v);
    s1 += std::tanh(alpha * n * kPi / 2.0) * p;
    s2 += std::tanh(n * kPi / (2.0 * alpha)) * p;
    if (p < 1e-19) break;
  }
  double sign = (v / 2) % 2 == 0 ? 1.0 : -1.0;
  return std::pow(alpha, -1.0 - v / 2.0) / 2.0 * s1 + sign * std::pow(alpha, 1.0 + v / 2.0) / 2.0 * s2;
}

}  // namespace

TEST_CASE("T closed forms") {
  const double pi = kPi;
  for (double a : {0.5, 1.0, 2.0}) CHECK(close_rel(T_direct(0, a).value, std::pow(pi, 3) / 32.0, 1e-13));
  CHECK(std::abs(T_direct(2, 1.0).value) < 1e-15);
  CHECK(close_rel(T_recursive(2, 2.0), -std::pow(pi, 5) / 256.0, 1e-13));
  CHECK(close_rel(T_recursive(4, 1.0), 7.0 * std::pow(pi, 7) / 23040.0, 1e-12));
  CHECK(close_rel(T_recursive(8, 1.0), 181.0 * std::pow(pi, 11) / 58060800.0, 1e-12));
  CHECK(close_rel(T_recursive(12, 1.0), 178559.0 * std::pow(pi, 15) / 5579410636800.0, 1e-12));
  for (double a : {0.6, 1.4}) {
    double t4 = std::pow(pi, 7) * (6.0 * (1.0 / (a * a) + a * a) - 5.0) / 23040.0;
    CHECK(close_rel(T_recursive(4, a), t4, 1e-12));
  }
}

TEST_CASE("T recursion agrees with direct summation") {
  for (int v : {0, 2, 4, 6, 8, 10})
    for (double a : {0.5, 1.0, 2.0, 3.0}) CHECK(std::abs(T_recursive(v, a) - T_direct(v, a).value) <= 1e-11);
  CHECK(std::abs(T_recursive(10, 1.3) - T_direct(10, 1.3).value) <= 1e-11);
}

TEST_CASE("T direct against a plain loop") {
  CHECK(std::abs(T_direct(6, 0.7).value - T_loop(6, 0.7)) < 1e-13);
  CHECK(std::abs(T_direct(4, 2.3).value - T_loop(4, 2.3)) < 1e-13);
  SeriesValue s = T_direct(6, 0.7);
  CHECK(s.tail_bound < 1e-13);
  CHECK(s.terms_used > 0);
}

TEST_CASE("T_v equals T_{v,1} for v in 4N") {
  for (int v : {0, 4, 8, 12}) CHECK(close_rel(T_direct(v, 1.0).value, T_plain(v).value, 1e-12));
  CHECK(close_rel(T_plain(1).value, 0.931828374369092936372423992843, 1e-13));
}

TEST_CASE("T_recursive_table matches single values") {
  auto t = T_recursive_table(5, 1.7);
  REQUIRE(t.size() == 6);
  for (int q = 0; q <= 5; ++q) CHECK(std::abs(t[q] - T_recursive(2 * q, 1.7)) < 1e-14);
}

TEST_CASE("d coefficients satisfy the binomial identity") {
  // (1/(n/2 + b)) C(n, n/2 - k) = sum_l d_l C(n, n/2 - l), n even
  double worst = 0.0;
  for (int b = 1; b <= 6; ++b)
    for (int k = 0; k < b; ++k) {
      auto d = d_coeffs(b, k);
      auto dx = d_coeffs_exact(b, k);
      REQUIRE(int(d.size()) == b - k + 1);
      for (int n = 0; n <= 40; n += 2) {
        double lhs = binomial(n, n / 2 - k) / (n / 2 + b);
        double rhs = 0.0;
        Rational lx = binomial_exact(n, n / 2 - k) / Rational(n / 2 + b), rx = 0;
        for (int l = k; l <= b; ++l) {
          rhs += d[l - k] * binomial(n, n / 2 - l);
          rx += dx[l - k] * binomial_exact(n, n / 2 - l);
        }
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        CHECK(lx == rx);
      }
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("b=1, k=0 identity at small n") {
  auto d = d_coeffs(1, 0);
  // n = 2: (1/2) C(2,1) = 1
  double rhs = d[0] * binomial(2, 1) + d[1] * binomial(2, 0);
  CHECK(std::abs(rhs - 1.0) < 1e-15);
}

TEST_CASE("explicit inverse of the binomial matrix") {
  for (int b = 1; b <= 6; ++b)
    for (int k = 0; k < b; ++k) {
      auto A = d_matrix_A(b, k);
      auto B = d_matrix_B(b, k);
      int n = int(A.size());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rational s = 0;
          for (int l = 0; l < n; ++l) s += B[i][l] * A[l][j];
          CHECK(s == Rational(i == j ? 1 : 0));
        }
    }
}

TEST_CASE("d coefficients by back-substitution") {
  // solve sum_l d_l C(n, n/2 - l) = C(n, n/2 - k)/(n/2 + b) on n = 2b, 2b+2, ..., 2b + 2(b-k)
  const int b = 3, k = 1, m = b - k + 1;
  std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m + 1));
  for (int r = 0; r < m; ++r) {
    int n = 2 * b + 2 * r;
    for (int c = 0; c < m; ++c) M[r][c] = binomial_exact(n, n / 2 - (k + c));
    M[r][m] = binomial_exact(n, n / 2 - k) / Rational(n / 2 + b);
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    while (M[piv][c] == 0) ++piv;
    std::swap(M[c], M[piv]);
    for (int r = 0; r < m; ++r) {
      if (r == c || M[r][c] == 0) continue;
      Rational f = M[r][c] / M[c][c];
      for (int cc = c; cc <= m; ++cc) M[r][cc] -= f * M[c][cc];
    }
  }
  auto d = d_coeffs_exact(b, k);
  for (int c = 0; c < m; ++c) CHECK(d[c] == M[c][m] / M[c][c]);
}

TEST_CASE("binomials") {
  CHECK(binomial(10, 3) == 120.0);
  CHECK(binomial(3, 5) == 0.0);
  CHECK(binomial_exact(30, 15) == Rational(155117520));
}
