#include "chole/specialfn.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "chole/errors.hpp"
#include "chole/quadrature.hpp"

namespace chole {

namespace {

// B_0 .. B_30 (odd entries past B_1 are zero).
struct Rational {
  double num;
  double den;
};
constexpr std::array<Rational, 16> kBernoulliEven = {{
    {1.0, 1.0},
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
}};

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << name << " requires x > 0, got " << x;
    throw DomainError(os.str());
  }
}

}  // namespace

double bernoulli(int n) {
  if (n < 0 || n > 30) throw DomainError("bernoulli: n outside [0, 30]");
  if (n == 1) return -0.5;
  if (n % 2 == 1) return 0.0;
  const Rational& r = kBernoulliEven[n / 2];
  return r.num / r.den;
}

double digamma(double x) {
  require_positive(x, "digamma");
  return digamma_real(x);
}

double digamma_real(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw PoleError("digamma: pole at a non-positive integer");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double x2 = 1.0 / (x * x);
  double s = 0.0, p = x2;
  for (int n = 1; n <= 7; ++n) {
    s += bernoulli(2 * n) / (2.0 * n) * p;
    p *= x2;
  }
  return acc + std::log(x) - 0.5 / x - s;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  double x2 = 1.0 / (x * x);
  double s = 0.0, p = x2 / x;
  for (int n = 1; n <= 7; ++n) {
    s += bernoulli(2 * n) * p;
    p *= x2;
  }
  return acc + 1.0 / x + 0.5 * x2 + s;
}

double zeta_even(int m) {
  if (m < 1) throw DomainError("zeta_even: m must be >= 1");
  if (m > 15) throw std::overflow_error("zeta_even: 2m > 30 exceeds the Bernoulli table");
  double f = 1.0;
  for (int k = 2; k <= 2 * m; ++k) f *= k;
  return std::pow(2.0 * kPi, 2 * m) * std::fabs(bernoulli(2 * m)) / (2.0 * f);
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw DomainError("hurwitz_zeta: s must exceed 1");
  require_positive(a, "hurwitz_zeta");
  int n = static_cast<int>(std::ceil(std::max(20.0, s + 10.0 - a)));
  double sum = 0.0;
  for (int k = n - 1; k >= 0; --k) sum += std::pow(a + k, -s);
  double w = a + n;
  double wpow = std::pow(w, -s);
  sum += w * wpow / (s - 1.0) + 0.5 * wpow;
  double rising = s;  // (s)_{2j-1}
  double fact = 2.0;  // (2j)!
  double wp = wpow / w;
  for (int j = 1; j <= 10; ++j) {
    double term = bernoulli(2 * j) / fact * rising * wp;
    sum += term;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    wp /= w * w;
  }
  return sum;
}

double zeta(double s) {
  if (s == std::floor(s) && s >= 2 && s <= 30 && static_cast<int>(s) % 2 == 0) {
    return zeta_even(static_cast<int>(s) / 2);
  }
  return hurwitz_zeta(s, 1.0);
}

double incomplete_beta(double z, double alpha, double beta) {
  if (!(z > 0.0 && z < 1.0)) throw DomainError("incomplete_beta: z must lie in (0,1)");
  require_positive(alpha, "incomplete_beta alpha");
  // x = u^(1/alpha) removes the x^(alpha-1) endpoint behaviour.
  double top = std::pow(z, alpha);
  auto f = [&](double u) {
    if (u <= 0.0) return 1.0 / alpha;
    double one_minus_x = -std::expm1(std::log(u) / alpha);
    return std::pow(one_minus_x, beta - 1.0) / alpha;
  };
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 0.0;
  return quad1d(f, 0.0, top, opt);
}

namespace {

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::fabs(a - b) <= 1e-16 * a) break;
  }
  return 0.5 * (a + b);
}

void require_modulus(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("elliptic modulus must lie in (0,1)");
  }
}

}  // namespace

double elliptic_K(double kappa) {
  require_modulus(kappa);
  return kPi / (2.0 * agm(1.0, std::sqrt((1.0 - kappa) * (1.0 + kappa))));
}

double elliptic_Kprime(double kappa) {
  require_modulus(kappa);
  return kPi / (2.0 * agm(1.0, kappa));
}

Nome Nome::from_modulus(double kappa) {
  return Nome{std::exp(-kPi * elliptic_Kprime(kappa) / elliptic_K(kappa))};
}

Theta jacobi_theta(cplx zeta, double q) {
  if (!(q > 0.0 && q < 0.9)) throw DomainError("jacobi_theta: nome must lie in (0, 0.9)");
  const double lq = std::log(q);
  const double y = std::fabs(zeta.imag());
  // Terms grow like exp(2 n y) before q^(n^2) wins.
  const double n_peak = y / (-lq) + 1.0;
  cplx s1 = 0.0, s2 = 0.0, s3 = 1.0, s4 = 1.0;
  for (int n = 0; n < 100000; ++n) {
    double h = n + 0.5;
    double qh = std::exp(lq * h * h);
    cplx a = qh * std::sin((2.0 * n + 1.0) * zeta);
    cplx b = qh * std::cos((2.0 * n + 1.0) * zeta);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    s1 += sign * a;
    s2 += b;
    double mag = std::abs(a) + std::abs(b);
    if (n >= 1) {
      double qn = std::exp(lq * n * n);
      cplx c = qn * std::cos(2.0 * n * zeta);
      s3 += 2.0 * c;
      s4 += 2.0 * sign * c;
      mag += std::abs(c);
    }
    double scale = std::abs(s1) + std::abs(s2) + std::abs(s3) + std::abs(s4);
    if (n > n_peak && mag < 1e-17 * scale) break;
  }
  return Theta{2.0 * s1, 2.0 * s2, s3, s4};
}

JacobiSnCnDn jacobi_sncndn(cplx z, double kappa) {
  double K = elliptic_K(kappa);
  double q = Nome::from_modulus(kappa).q;
  Theta t0 = jacobi_theta(0.0, q);
  Theta t = jacobi_theta(kPi * z / (2.0 * K), q);
  double scale = std::abs(t.t1) + std::abs(t.t2) + std::abs(t.t3);
  if (std::abs(t.t4) <= 1e-15 * scale) {
    throw PoleError("jacobi_sn: argument is at a pole");
  }
  JacobiSnCnDn r;
  r.sn = (t0.t3 / t0.t2) * t.t1 / t.t4;
  r.cn = (t0.t4 / t0.t2) * t.t2 / t.t4;
  r.dn = (t0.t4 / t0.t3) * t.t3 / t.t4;
  return r;
}

cplx jacobi_sn(cplx z, double kappa) { return jacobi_sncndn(z, kappa).sn; }

cplx arctanh_cplx(cplx z) {
  if (z.imag() == 0.0 && std::fabs(z.real()) >= 1.0) {
    throw BranchCutError("arctanh_cplx: argument on a branch cut");
  }
  return 0.5 * (std::log(1.0 + z) - std::log(1.0 - z));
}

namespace {

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

cplx polylog_unit(int j, double x) {
  if (j < 1) throw DomainError("polylog_unit: order must be >= 1");
  double t = std::remainder(x, 2.0 * kPi);
  if (t == 0.0) {
    if (j == 1) throw PoleError("polylog_unit: Li_1(1) diverges");
    return {zeta(j), 0.0};
  }
  const double at = std::fabs(t);
  cplx sum = 0.0;
  // (i t)^(j-1)/(j-1)! [H_{j-1} - log(-i t)]
  double h = 0.0, fact = 1.0;
  for (int k = 1; k <= j - 1; ++k) {
    h += 1.0 / k;
    fact *= k;
  }
  cplx log_term(std::log(at), -0.5 * kPi * (t > 0 ? 1.0 : -1.0));
  sum += ipow(j - 1) * std::pow(t, j - 1) / fact * (h - log_term);
  // Positive-argument zeta terms, k = 0 .. j-2.
  double kf = 1.0;
  for (int k = 0; k <= j - 2; ++k) {
    if (k > 0) kf *= k;
    sum += zeta(j - k) * ipow(k) * std::pow(t, k) / kf;
  }
  // k = j: zeta(0) = -1/2.
  fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= k;
  sum += -0.5 * ipow(j) * std::pow(t, j) / fact;
  // k = j + 2r - 1, zeta(1-2r) = (-1)^r 2 (2r-1)! zeta(2r) / (2 pi)^(2r).
  const double w = t / (2.0 * kPi);
  for (int r = 1; r < 400; ++r) {
    int k = j + 2 * r - 1;
    double ratio = 1.0;  // (2r-1)! / k!
    for (int i = 2 * r; i <= k; ++i) ratio /= i;
    double zr = (r <= 15) ? zeta_even(r) : zeta(2.0 * r);
    double mag = 2.0 * zr * std::pow(w, 2 * r) * ratio * std::pow(t, j - 1);
    double sign = (r % 2 == 0) ? 1.0 : -1.0;
    sum += sign * mag * ipow(k);
    if (std::fabs(mag) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

double clausen_sin(int j, double x) { return polylog_unit(j, x).imag(); }
double clausen_cos(int j, double x) { return polylog_unit(j, x).real(); }

cplx lerch_phi1(cplx z, double v) {
  if (std::abs(z) > 1.0 + 1e-15) throw DomainError("lerch_phi1: |z| must be <= 1");
  if (v <= 0.0 && v == std::floor(v)) throw PoleError("lerch_phi1: v is a non-positive integer");
  if (std::abs(z - 1.0) < 1e-300) throw PoleError("lerch_phi1: z = 1 diverges");
  cplx head = 0.0, zp = 1.0;
  while (v < 1.0) {
    head += zp / v;
    zp *= z;
    v += 1.0;
  }
  if (std::abs(z) <= 0.5) {
    cplx s = 0.0, p = 1.0;
    for (int m = 0; m < 200; ++m) {
      cplx term = p / (m + v);
      s += term;
      if (std::abs(term) < 1e-18 * std::abs(s)) break;
      p *= z;
    }
    return head + zp * s;
  }
  // Phi = (1/v) int_0^1 du / (1 - z u^(1/v)).
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16;
  cplx integral = quad1d_c(
      [&](double u) { return 1.0 / (1.0 - z * std::pow(u, 1.0 / v)); }, 0.0, 1.0,
      opt);
  return head + zp * integral / v;
}

}  // namespace chole
