#include "chole/identities.hpp"

#include <cmath>

#include "chole/errors.hpp"
#include "chole/specialfn.hpp"

namespace chole {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{m>=0} tanh(x (1+2m) pi/2) / (1+2m)^s with the zeta tail past
// the saturation index.
SeriesValue tanh_odd_sum(double s, double x) {
  int M = static_cast<int>(std::ceil(40.0 / (x * kPi)));
  double head = 0.0;
  for (int m = M - 1; m >= 0; --m) {
    double n = 1.0 + 2.0 * m;
    head += std::tanh(x * n * kPi / 2.0) / std::pow(n, s);
  }
  double tail = std::pow(2.0, -s) * hurwitz_zeta(s, M + 0.5);
  // 1 - tanh <= 2 exp(-2 x (1+2M) pi/2) <= 2e-34 past M.
  double bound = 2.0 * std::exp(-x * (1.0 + 2.0 * M) * kPi) * tail + 1e-16 * tail;
  return {head + tail, M, bound};
}

}  // namespace

SeriesValue T_plain(double v) { return tanh_odd_sum(3.0 + v, 1.0); }

std::complex<double> T_direct_complex(double v, double alpha) {
  if (!(alpha > 0.0) || v < 0.0) throw DomainError("T_direct: need alpha > 0, v >= 0");
  SeriesValue s1 = tanh_odd_sum(3.0 + v, alpha);
  SeriesValue s2 = tanh_odd_sum(3.0 + v, 1.0 / alpha);
  std::complex<double> phase = std::polar(1.0, kPi * v / 2.0);
  return std::pow(alpha, -1.0 - v / 2.0) / 2.0 * s1.value +
         phase * std::pow(alpha, 1.0 + v / 2.0) / 2.0 * s2.value;
}

SeriesValue T_direct(double v, double alpha) {
  if (!(alpha > 0.0) || v < 0.0) throw DomainError("T_direct: need alpha > 0, v >= 0");
  if (v != std::floor(v) || static_cast<long>(v) % 2 != 0) {
    throw DomainError("T_direct: real value requires even integer v; use T_direct_complex");
  }
  SeriesValue s1 = tanh_odd_sum(3.0 + v, alpha);
  SeriesValue s2 = tanh_odd_sum(3.0 + v, 1.0 / alpha);
  double phase = (static_cast<long>(v) / 2) % 2 == 0 ? 1.0 : -1.0;
  double c1 = std::pow(alpha, -1.0 - v / 2.0) / 2.0;
  double c2 = std::pow(alpha, 1.0 + v / 2.0) / 2.0;
  return {c1 * s1.value + phase * c2 * s2.value,
          std::max(s1.terms_used, s2.terms_used),
          c1 * s1.tail_bound + c2 * s2.tail_bound};
}

std::vector<double> T_recursive_table(int n, double alpha) {
  if (!(alpha > 0.0) || n < 0) throw DomainError("T_recursive: need alpha > 0, v >= 0");
  const std::complex<double> w(std::sqrt(alpha), 1.0 / std::sqrt(alpha));
  std::vector<double> T(n + 1);
  T[0] = kPi * kPi * kPi / 32.0;
  for (int v = 1; v <= n; ++v) {
    double f2v = std::tgamma(2.0 * v + 1.0);
    double lead = std::pow(kPi, 3 + 2 * v) /
                  (f2v * std::pow(4.0, v + 3) * (v + 1.0) * (2.0 * v + 1.0)) *
                  std::pow(w, 2 + 2 * v).imag();
    double s = 0.0;
    for (int q = 0; q < v; ++q) {
      int e = 2 * v - 2 * q;
      s += std::pow(kPi, e) / (std::tgamma(e + 1.0) * std::pow(4.0, v - q)) *
           std::pow(w, e).real() * T[q];
    }
    T[v] = lead - s;
  }
  return T;
}

double T_recursive(int v, double alpha) {
  if (v < 0 || v % 2 != 0) throw DomainError("T_recursive: v must be even and >= 0");
  return T_recursive_table(v / 2, alpha)[v / 2];
}

Rational binomial_exact(int n, int m) {
  if (m < 0 || m > n) return Rational(0);
  return Rational(factorial(n), factorial(m) * factorial(n - m));
}

double binomial(int n, int m) {
  if (m < 0 || m > n) return 0.0;
  double r = 1.0;
  m = std::min(m, n - m);
  for (int i = 1; i <= m; ++i) r = r * (n - m + i) / i;
  return r;
}

std::vector<Rational> d_coeffs_exact(int b, int k) {
  if (b < 1 || k < 0 || k > b - 1) throw DomainError("d_coeffs: need b >= 1 and 0 <= k <= b-1");
  std::vector<Rational> d;
  for (int l = k; l <= b; ++l) {
    Rational v = binomial_exact(2 * l, l - k) / Rational(b + l);
    Rational s = 0;
    for (int m = 0; m <= l - k - 1; ++m) {
      Rational term(factorial(k + l + m - 1),
                    factorial(m) * factorial(2 * k + m) * factorial(l - k - m));
      term /= Rational(b + k + m);
      if ((l - k - m) % 2 == 1) term = -term;
      s += term;
    }
    d.push_back(v + Rational(2 * l) * s);
  }
  return d;
}

std::vector<double> d_coeffs(int b, int k) {
  std::vector<double> out;
  for (const Rational& r : d_coeffs_exact(b, k)) out.push_back(r.convert_to<double>());
  return out;
}

std::vector<std::vector<Rational>> d_matrix_A(int b, int k) {
  int n = b - k + 1;
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) A[i][j] = binomial_exact(2 * k + 2 * i, i - j);
  return A;
}

std::vector<std::vector<Rational>> d_matrix_B(int b, int k) {
  int n = b - k + 1;
  std::vector<std::vector<Rational>> B(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (k + i == 0) {
        B[i][j] = 1;  // the 0x0 corner, where the general formula reads 2n(n-1)!/(2n)!
        continue;
      }
      Rational v(2 * (k + i) * factorial(2 * k + i + j - 1),
                 factorial(i - j) * factorial(2 * k + 2 * j));
      B[i][j] = ((i - j) % 2 == 0) ? v : Rational(-v);
    }
  }
  return B;
}

}  // namespace chole
