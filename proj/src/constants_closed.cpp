#include <algorithm>
#include <cmath>

#include "chole/balayage.hpp"
#include "chole/constants.hpp"
#include "chole/errors.hpp"
#include "chole/identities.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"

namespace chole {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

void require_tau(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("tau must lie in [0, 1)");
}

HoleConstant closed(double beta, double C, std::string note) {
  HoleConstant h;
  h.beta = beta;
  h.C = C;
  h.method = CMethod::ClosedForm;
  h.note = std::move(note);
  return h;
}

void require_inside(const Potential& pot, const HoleRegion& region, const char* what) {
  if (!validate(pot, region).hole_in_support)
    throw ContainmentError(std::string(what) + ": hole not contained in the droplet");
}

void require_points_inside(const Potential& pot, const std::vector<cplx>& pts, const char* what) {
  for (cplx z : pts)
    if (!pot.in_support(z, -kGeoEps))
      throw ContainmentError(std::string(what) + ": hole not contained in the droplet");
}

double ipow(double x, int n) { return n == 0 ? 1.0 : std::pow(x, n); }

double fact(int n) { return std::tgamma(n + 1.0); }

// sum_{m > N} m^-s and sum_{m > N} (-1)^m m^-s
double zeta_tail(double s, int N) { return hurwitz_zeta(s, N + 1.0); }
double alt_zeta_tail(double s, int N) {
  double v = std::pow(2.0, -s) * (hurwitz_zeta(s, (N + 1.0) / 2.0) - hurwitz_zeta(s, (N + 2.0) / 2.0));
  return (N % 2 == 0) ? -v : v;
}

// sum_m s_m int_{t0}^{t0+L} P(t) sin(m pi (t - t0) / L) dt, P given by its coefficients.
double sine_series_against_poly(const SineSeries& s, const std::vector<double>& P) {
  int deg = int(P.size()) - 1;
  double t0 = s.t0, t1 = s.t0 + s.L, w = s.L / kPi;
  // derivatives of P at both ends
  std::vector<double> D0(deg + 1, 0.0), D1(deg + 1, 0.0);
  std::vector<double> c = P;
  for (int i = 0; i <= deg; ++i) {
    double v0 = 0.0, v1 = 0.0;
    for (int k = int(c.size()) - 1; k >= 0; --k) {
      v0 = v0 * t0 + c[k];
      v1 = v1 * t1 + c[k];
    }
    D0[i] = v0;
    D1[i] = v1;
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * double(k));
    c = d.empty() ? std::vector<double>{0.0} : d;
  }
  // moment_m = sum_i (B_i + A_i (-1)^m) / m^{i+1}, i even
  std::vector<double> A(deg + 1, 0.0), B(deg + 1, 0.0);
  for (int i = 0; i <= deg; i += 2) {
    double f = ((i / 2) % 2 ? -1.0 : 1.0) * std::pow(w, i + 1);
    B[i] = f * D0[i];
    A[i] = -f * D1[i];
  }
  int N = int(s.exact.size());
  double sum = 0.0;
  for (int m = 1; m <= N; ++m) {
    double sg = (m % 2) ? -1.0 : 1.0, mom = 0.0;
    for (int i = 0; i <= deg; i += 2) mom += (B[i] + A[i] * sg) / std::pow(double(m), i + 1);
    sum += s.exact[m - 1] * mom;
  }
  for (std::size_t j = 1; j < s.alpha.size(); ++j) {
    double al = s.alpha[j], be = j < s.beta.size() ? s.beta[j] : 0.0;
    if (al == 0.0 && be == 0.0) continue;
    for (int i = 0; i <= deg; i += 2) {
      double e = double(j) + i + 1.0;
      sum += (al * B[i] + be * A[i]) * zeta_tail(e, N) + (al * A[i] + be * B[i]) * alt_zeta_tail(e, N);
    }
  }
  return sum;
}

// Q restricted to a side, as a polynomial in the side coordinate.
std::vector<double> side_polynomial(const Potential& pot, double fixed, bool fixed_is_x) {
  if (pot.is_elliptic()) {
    double tau = pot.tau(), d = 1.0 - tau * tau;
    double cx = (1.0 - tau) / d, cy = (1.0 + tau) / d;
    if (fixed_is_x) return {cx * fixed * fixed, 0.0, cy};
    return {cy * fixed * fixed, 0.0, cx};
  }
  int b = pot.int_b();
  std::vector<double> P(2 * b + 1, 0.0);
  for (int k = 0; k <= b; ++k) P[2 * k] = binomial(b, k) * ipow(fixed, 2 * (b - k));
  return P;
}

double rectangle_q_dnu(const Potential& pot, double a1, double a2, double c1, double c2) {
  double s = 0.0;
  s += sine_series_against_poly(bal_rectangle(pot, a1, a2, c1, c2, RectSide::Right),
                                side_polynomial(pot, a2, true));
  s += sine_series_against_poly(bal_rectangle(pot, a1, a2, c1, c2, RectSide::Left),
                                side_polynomial(pot, a1, true));
  s += sine_series_against_poly(bal_rectangle(pot, a1, a2, c1, c2, RectSide::Top),
                                side_polynomial(pot, c2, false));
  s += sine_series_against_poly(bal_rectangle(pot, a1, a2, c1, c2, RectSide::Bottom),
                                side_polynomial(pot, c1, false));
  return s;
}

double rectangle_q_dmu(const Potential& pot, double a1, double a2, double c1, double c2) {
  auto dp = [](double lo, double hi, int n) { return (ipow(hi, n) - ipow(lo, n)) / n; };
  if (pot.is_elliptic()) {
    double tau = pot.tau(), d = 1.0 - tau * tau;
    return ((1.0 - tau) * dp(a1, a2, 3) * (c2 - c1) + (1.0 + tau) * (a2 - a1) * dp(c1, c2, 3)) /
           (kPi * d * d);
  }
  int b = pot.int_b();
  double s = 0.0;
  for (int j = 0; j <= 2 * b - 1; ++j)
    s += binomial(2 * b - 1, j) * dp(a1, a2, 2 * j + 1) * dp(c1, c2, 2 * (2 * b - 1 - j) + 1);
  return b * b / kPi * s;
}

}  // namespace

// ---------------------------------------------------------------- elliptic Ginibre

HoleConstant c_eg_scaled(double tau, cplx zeta0, double rho, double theta0, double base_C_at_tau0,
                         double beta, const HoleRegion* image) {
  require_beta(beta);
  require_tau(tau);
  if (!(rho > 0.0)) throw DomainError("c_eg_scaled: rho must be positive");
  if (image) require_inside(Potential::elliptic_ginibre(tau), *image, "c_eg_scaled");
  (void)zeta0;
  (void)theta0;
  HoleConstant h;
  h.beta = beta;
  h.C = std::pow(rho, 4) / std::pow(1.0 - tau * tau, 2) * base_C_at_tau0;
  h.method = CMethod::ScalingLaw;
  h.note = "rho^4 / (1 - tau^2)^2 scaling";
  return h;
}

HoleConstant c_eg_named(EGShape shape, const EGNamedParams& q, double tau, double beta) {
  require_beta(beta);
  require_tau(tau);
  Potential pot = Potential::elliptic_ginibre(tau);
  double s = beta / 4.0 / std::pow(1.0 - tau * tau, 2);
  switch (shape) {
    case EGShape::Ellipse: {
      require_inside(pot, HoleRegion::ellipse(q.a, q.c, q.zeta0, q.theta0), "ellipse");
      double a = q.a, c = q.c;
      return closed(beta, s * a * a * a * c * c * c / (a * a + c * c), "elliptic Ginibre ellipse");
    }
    case EGShape::Annulus: {
      if (!(q.rho1 > 0.0 && q.rho2 > q.rho1)) throw DomainError("annulus: need 0 < rho1 < rho2");
      std::vector<cplx> pts;
      for (int k = 0; k < 4096; ++k) pts.push_back(q.zeta0 + std::polar(q.rho2, 2.0 * kPi * k / 4096));
      require_points_inside(pot, pts, "annulus");
      double r1 = q.rho1, r2 = q.rho2;
      double v = (std::pow(r2, 4) - std::pow(r1, 4)) / 2.0 -
                 std::pow(r2 * r2 - r1 * r1, 2) / (2.0 * std::log(r2 / r1));
      return closed(beta, s * v, "elliptic Ginibre annulus");
    }
    case EGShape::Cardioid: {
      if (!(q.c >= 0.0 && q.c < 0.5)) throw DomainError("cardioid: need c in [0, 1/2)");
      require_inside(pot, HoleRegion::cardioid(q.a, q.c, q.zeta0, q.theta0), "cardioid");
      double c2 = q.c * q.c;
      return closed(beta, s * std::pow(q.a, 4) * ((c2 + 1.0) * (c2 + 1.0) - 0.5),
                    "elliptic Ginibre cardioid");
    }
    case EGShape::Sector: {
      if (!(q.p >= 2.0)) throw DomainError("sector: p must be >= 2");
      std::vector<cplx> pts;
      cplx rot = std::polar(1.0, q.theta0);
      for (cplx z : HoleRegion::sector(q.a, q.p).boundary_samples(1024))
        pts.push_back(q.zeta0 + rot * z);
      require_points_inside(pot, pts, "sector");
      double p = q.p;
      double v = digamma(0.5) - digamma(0.5 + 2.0 / p) +
                 (trigamma(0.5) + trigamma(0.5 + 2.0 / p)) / p;
      return closed(beta, s * std::pow(q.a, 4) * v / (kPi * kPi), "elliptic Ginibre sector");
    }
  }
  throw DomainError("c_eg_named: unknown shape");
}

HoleConstant c_triangle(double tau, cplx zeta0, double theta0, double a, double beta) {
  require_beta(beta);
  require_tau(tau);
  require_inside(Potential::elliptic_ginibre(tau), HoleRegion::triangle(zeta0, theta0, a),
                 "triangle");
  double d = 1.0 - tau * tau;
  return closed(beta, 9.0 * std::sqrt(3.0) * beta * std::pow(a, 4) / (320.0 * kPi * d * d),
                "elliptic Ginibre equilateral triangle");
}

HoleConstant c_eg_complement_ellipse(double tau, double a, double c, double beta) {
  require_beta(beta);
  require_tau(tau);
  if (!(a > 0.0 && a <= (1.0 + tau) * (1.0 + kGeoEps) && c > 0.0 &&
        c <= (1.0 - tau) * (1.0 + kGeoEps)))
    throw DomainError("ellipse complement: need a in (0, 1+tau] and c in (0, 1-tau]");
  double d = 1.0 - tau * tau;
  double C = beta / (4.0 * d) *
             (a * a * (1.0 - tau) * (1.0 - (a * a + 2.0 * a * c) / (8.0 * (1.0 + tau))) +
              c * c * (1.0 + tau) * (1.0 - (c * c + 2.0 * a * c) / (8.0 * (1.0 - tau))) +
              a * a * c * c / 4.0 + d * (2.0 * std::log(2.0 / (a + c)) - 1.5));
  auto cc = bal_eg_complement_ellipse(tau, a, c);
  Breakdown b;
  b.integral_Q_dnu =
      kPi * (a * a * (1.0 - tau) * (cc.c0 + cc.c1) + c * c * (1.0 + tau) * (cc.c0 - cc.c1)) / d;
  b.c_U_mu = a * a / (4.0 * (1.0 + tau)) + c * c / (4.0 * (1.0 - tau)) - 0.5 + std::log(2.0 / (a + c));
  b.integral_Q_dmu = 0.5 - a * c * (a * a * (1.0 - tau) + c * c * (1.0 + tau)) / (4.0 * d * d);
  HoleConstant h = closed(beta, C, "elliptic Ginibre ellipse complement");
  h.breakdown = b;
  return h;
}

double eg_disk_complement_R2logR(double tau, double x0, double y0) {
  double d = 1.0 - tau * tau;
  auto R = [=](double th) {
    double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
    double rad = 2.0 + 2.0 * tau * tau - x0 * x0 - y0 * y0 + (x0 * x0 - y0 * y0 - 4.0 * tau) * c2 +
                 2.0 * x0 * y0 * s2;
    double num = d * d *
                 (std::sqrt(rad) / (std::sqrt(2.0) * d) - x0 * std::cos(th) / std::pow(1.0 + tau, 2) -
                  y0 * std::sin(th) / std::pow(1.0 - tau, 2));
    return num / (1.0 + tau * tau - 2.0 * tau * c2);
  };
  auto f = [&](double th) {
    double r = R(th);
    return r * r * std::log(r);
  };
  double prev = periodic_trapezoid(f, 256);
  for (int n = 512; n <= (1 << 16); n *= 2) {
    double cur = periodic_trapezoid(f, n);
    if (std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw ToleranceError("eg_disk_complement_R2logR: trapezoid rule did not settle", prev, 0.0);
}

HoleConstant c_eg_complement_disk(double tau, double x0, double y0, double a, double beta) {
  require_beta(beta);
  require_tau(tau);
  require_inside(Potential::elliptic_ginibre(tau), HoleRegion::disk_complement(cplx(x0, y0), a),
                 "disk complement");
  double d = 1.0 - tau * tau;
  double I = eg_disk_complement_R2logR(tau, x0, y0);
  double a2 = a * a;
  double C = beta / 4.0 *
             (I / (kPi * d) - 1.5 + x0 * x0 / (1.0 + tau) + y0 * y0 / (1.0 - tau) - 2.0 * std::log(a) +
              2.0 * a2 * (1.0 / d - x0 * x0 / std::pow(1.0 + tau, 2) - y0 * y0 / std::pow(1.0 - tau, 2)) -
              (1.0 + 2.0 * tau * tau) * a2 * a2 / (2.0 * d * d));
  Potential pot = Potential::elliptic_ginibre(tau);
  auto dens = bal_eg_complement_disk(tau, x0, y0, a);
  cplx z0(x0, y0);
  Breakdown b;
  b.integral_Q_dnu =
      periodic_trapezoid([&](double th) { return pot.Q(z0 + std::polar(a, th)) * dens(th); }, 64);
  b.c_U_mu = I / (2.0 * kPi * d) - 0.5 + a2 / (2.0 * d) - std::log(a);
  b.integral_Q_dmu =
      0.5 - ((1.0 - tau) * (a2 * x0 * x0 + a2 * a2 / 4.0) + (1.0 + tau) * (a2 * y0 * y0 + a2 * a2 / 4.0)) /
                (d * d);
  HoleConstant h = closed(beta, C, "elliptic Ginibre disk complement");
  h.breakdown = b;
  return h;
}

// ---------------------------------------------------------------- rectangles

double eg_rectangle_sum_direct(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  double s = 0.0;
  int n = 1;
  for (;; n += 2) {
    double t1 = std::tanh(alpha * n * kPi / 2.0), t2 = std::tanh(n * kPi / (2.0 * alpha));
    s += (t1 / (alpha * alpha) + alpha * alpha * t2) / std::pow(double(n), 5);
    if (t1 == 1.0 && t2 == 1.0) break;
  }
  // remaining odd n > current with tanh = 1
  double tail = std::pow(2.0, -5.0) * hurwitz_zeta(5.0, (n + 2.0) / 2.0);
  return s + (1.0 / (alpha * alpha) + alpha * alpha) * tail;
}

double eg_rectangle_sum_identity(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  // T_{2,alpha} = (alpha^-2 S1 - alpha^2 S2) / 2, keep the series whose tanh saturates first
  double T2 = std::pow(kPi, 5) * (1.0 / alpha - alpha) / 384.0;
  double r = alpha >= 1.0 ? alpha : 1.0 / alpha;
  double s = 0.0;
  int n = 1;
  for (;; n += 2) {
    double t = std::tanh(r * n * kPi / 2.0);
    s += t / std::pow(double(n), 5);
    if (t == 1.0) break;
  }
  s += std::pow(2.0, -5.0) * hurwitz_zeta(5.0, (n + 2.0) / 2.0);
  if (alpha >= 1.0) return 2.0 * s / (alpha * alpha) - 2.0 * T2;
  return 2.0 * T2 + 2.0 * alpha * alpha * s;
}

namespace {

double eg_rectangle_C(double A, double B, double tau, double beta) {
  double al = A / B, d = 1.0 - tau * tau;
  double S = eg_rectangle_sum_identity(al);
  return beta * A * A * B * B / (4.0 * kPi * d * d) *
         ((al + 1.0 / al) / 6.0 - 32.0 / std::pow(kPi, 5) * S);
}

}  // namespace

HoleConstant c_rectangle(const Potential& pot, double a1, double a2, double c1, double c2,
                         double beta) {
  require_beta(beta);
  if (!(a2 > a1 && c2 > c1)) throw DomainError("rectangle: need a1 < a2 and c1 < c2");
  bool ml = pot.kind() == PotentialKind::MittagLeffler && pot.integer_b();
  if (!pot.is_elliptic() && !ml)
    throw NotCoveredError(
        "c_rectangle: needs elliptic Ginibre or Mittag-Leffler with integer b; nearest covered "
        "case is c_generic with a Mittag-Leffler integer b");
  require_inside(pot, HoleRegion::rectangle(a1, a2, c1, c2), "rectangle");
  Breakdown b;
  b.integral_Q_dnu = rectangle_q_dnu(pot, a1, a2, c1, c2);
  b.integral_Q_dmu = rectangle_q_dmu(pot, a1, a2, c1, c2);
  HoleConstant h;
  h.beta = beta;
  h.breakdown = b;
  h.method = CMethod::ClosedForm;
  if (pot.is_elliptic()) {
    h.C = eg_rectangle_C(a2 - a1, c2 - c1, pot.tau(), beta);
    h.note = "tanh series with T_{2,alpha}";
  } else {
    h.C = combine(beta, b);
    h.note = "four-side sine series";
  }
  return h;
}

HoleConstant c_ml_square(int b, double c, double beta) {
  require_beta(beta);
  if (b < 1 || !(c > 0.0)) throw DomainError("c_ml_square: need b >= 1 and c > 0");
  if (c / std::sqrt(2.0) > std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps))
    throw ContainmentError("c_ml_square: square not contained in the droplet");
  double inner = 0.0;
  for (int j = 0; j <= b; ++j) {
    for (int v = 0; v <= j; ++v) {
      double wj = binomial(b, j) * fact(2 * j) * ((v % 2) ? -1.0 : 1.0) * std::pow(4.0, v) /
                  (fact(2 * j - 2 * v) * std::pow(kPi, 2 * v));
      for (int l = 0; l <= b - 1; ++l) {
        for (int v1 = 0; v1 <= l; ++v1) {
          for (int v2 = 0; v2 <= b - 1 - l; ++v2) {
            double w = binomial(b - 1, l) * fact(2 * l) / fact(2 * l - 2 * v1) *
                       fact(2 * b - 2 - 2 * l) / fact(2 * b - 2 - 2 * l - 2 * v2) *
                       std::pow(4.0, v1 + v2) * ((v2 % 2) ? -1.0 : 1.0) /
                       std::pow(kPi, 2 * v1 + 2 * v2);
            double br = 0.0;
            if ((v1 + v2) % 2 == 0) br += T_plain(2.0 * (v1 + v2 + v)).value;
            for (int q = 0; q < v1; ++q) {
              int e1 = 2 + v2 + q + v;
              br += 4.0 * (((v1 + q) % 2) ? -1.0 : 1.0) / kPi *
                    (1.0 - std::pow(4.0, -e1)) * zeta(2.0 * e1) *
                    (1.0 - std::pow(4.0, -(v1 - q))) * zeta(2.0 * (v1 - q));
            }
            inner += wj * w * br;
          }
        }
      }
    }
  }
  double last = 0.0;
  for (int j = 0; j <= 2 * b - 1; ++j)
    last += binomial(2 * b - 1, j) / ((2.0 * j + 1.0) * (4.0 * b - 1.0 - 2.0 * j));
  double C = beta * b * b * std::pow(c, 4 * b) / (std::pow(4.0, 2 * b) * kPi) *
             (32.0 / std::pow(kPi, 3) * inner - last);
  return closed(beta, C, "centered square through T_v");
}

// ---------------------------------------------------------------- Mittag-Leffler disk, ellipse

HoleConstant c_ml_disk(int b, double x0, double a, double beta) {
  require_beta(beta);
  if (b < 1 || !(a > 0.0) || x0 < 0.0) throw DomainError("c_ml_disk: need b >= 1, a > 0, x0 >= 0");
  if (x0 + a > std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps))
    throw ContainmentError("c_ml_disk: disk not contained in the droplet");
  auto prof = bal_ml_disk(b, x0, a);
  const auto& c = prof.coeffs;
  double qnu = 0.0;
  for (int j = 0; j <= b; ++j) {
    double br = (j % 2 == 0) ? c[0] * binomial(j, j / 2) : 0.0;
    for (int l = 1; l <= b - 1 && l < int(c.size()); ++l)
      if ((j + l) % 2 == 0) br += 2.0 * c[l] * binomial(j, (j + l) / 2);
    qnu += 2.0 * binomial(b, j) * ipow(a, j) * ipow(x0, j) * ipow(x0 * x0 + a * a, b - j) * br;
  }
  double qmu = 0.0;
  for (int j = 0; j <= b - 1; ++j) {
    double in = 0.0;
    for (int k = 0; k <= 2 * b - 1 - 2 * j; ++k)
      in += binomial(2 * b - 1 - 2 * j, k) * ipow(x0, 2 * (2 * b - 1 - j - k)) *
            ipow(a, 2 * (1 + j + k)) / (1.0 + j + k);
    qmu += binomial(2 * b - 1, 2 * j) * binomial(2 * j, j) * in;
  }
  qmu *= double(b) * b;
  Breakdown bd;
  bd.integral_Q_dnu = qnu;
  bd.integral_Q_dmu = qmu;
  HoleConstant h = closed(beta, combine(beta, bd), "Mittag-Leffler disk finite sums");
  h.breakdown = bd;
  return h;
}

HoleConstant c_ml_ellipse(int b, double a, double c, double beta) {
  require_beta(beta);
  if (b < 1 || !(a > 0.0 && c > 0.0)) throw DomainError("c_ml_ellipse: need b >= 1, a, c > 0");
  double lim = std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps);
  if (a > lim || c > lim) throw ContainmentError("c_ml_ellipse: ellipse not contained in the droplet");
  double al = (a + c) / 2.0, ga = (a - c) / 2.0;
  auto prof = bal_ml_ellipse(b, a, c);
  const auto& e = prof.coeffs;
  double s2 = al * al + ga * ga;
  double qnu = 0.0;
  for (int j = 0; j <= b; ++j) {
    double br = (j % 2 == 0) ? e[0] * binomial(j, j / 2) : 0.0;
    for (int l = 1; l <= b && l < int(e.size()); ++l)
      if ((j + l) % 2 == 0) br += 2.0 * e[l] * binomial(j, (j + l) / 2);
    qnu += binomial(b, j) * ipow(al * ga, j) * ipow(s2, b - j) * 2.0 * br;
  }
  double qmu = 0.0;
  for (int j = 0; j <= b - 1; ++j)
    qmu += binomial(2 * b - 1, 2 * j) * binomial(2 * j, j) * ipow(al * ga, 2 * j) *
           ipow(s2, 2 * b - 1 - 2 * j);
  qmu *= (al * al - ga * ga) * b / 2.0;
  Breakdown bd;
  bd.integral_Q_dnu = qnu;
  bd.integral_Q_dmu = qmu;
  HoleConstant h = closed(beta, combine(beta, bd), "Mittag-Leffler ellipse finite sums");
  h.breakdown = bd;
  return h;
}

// ---------------------------------------------------------------- dispatcher

HoleConstant hole_constant(const Potential& pot, const HoleRegion& region, double beta) {
  require_beta(beta);
  const RegionParams& q = region.params();
  bool uniform = pot.is_elliptic();
  bool ml_int = pot.kind() == PotentialKind::MittagLeffler && pot.integer_b();
  double tau = pot.tau();
  switch (region.kind()) {
    case RegionKind::Disk:
      if (pot.is_radial() && q.center == 0.0) return c_radial_disk(pot, q.a, beta);
      if (uniform) {
        EGNamedParams p;
        p.a = p.c = q.a;
        p.zeta0 = q.center;
        return c_eg_named(EGShape::Ellipse, p, tau, beta);
      }
      if (ml_int) return c_ml_disk(pot.int_b(), std::abs(q.center), q.a, beta);
      break;
    case RegionKind::Annulus:
      if (pot.is_radial()) return c_radial_annulus(pot, q.rho1, q.rho2, beta);
      if (uniform) {
        EGNamedParams p;
        p.rho1 = q.rho1;
        p.rho2 = q.rho2;
        return c_eg_named(EGShape::Annulus, p, tau, beta);
      }
      break;
    case RegionKind::DiskComplement:
      if (pot.is_radial() && q.center == 0.0) return c_radial_disk_complement(pot, q.a, beta);
      if (uniform) return c_eg_complement_disk(tau, q.center.real(), q.center.imag(), q.a, beta);
      break;
    case RegionKind::Sector:
      if (pot.is_radial()) return c_sector(pot, q.a, q.p, beta);
      if (uniform) {
        EGNamedParams p;
        p.a = q.a;
        p.p = q.p;
        return c_eg_named(EGShape::Sector, p, tau, beta);
      }
      break;
    case RegionKind::Ellipse:
      if (uniform) {
        EGNamedParams p;
        p.a = q.a;
        p.c = q.c;
        p.zeta0 = q.center;
        p.theta0 = q.theta0;
        return c_eg_named(EGShape::Ellipse, p, tau, beta);
      }
      if (ml_int && q.center == 0.0) {
        // rotation invariance of |z|^{2b}
        return c_ml_ellipse(pot.int_b(), q.a, q.c, beta);
      }
      break;
    case RegionKind::EllipseComplement:
      if (uniform) return c_eg_complement_ellipse(tau, q.a, q.c, beta);
      break;
    case RegionKind::Rectangle:
    case RegionKind::Square:
      if (q.theta0 == 0.0 && (uniform || ml_int))
        return c_rectangle(pot, q.a1, q.a2, q.c1, q.c2, beta);
      if (ml_int) {
        require_inside(pot, region, "rectangle");
        HoleConstant h = c_rectangle(pot, q.a1, q.a2, q.c1, q.c2, beta);
        h.note += ", rotation invariance";
        return h;
      }
      if (uniform) {
        double base = eg_rectangle_C(q.a2 - q.a1, q.c2 - q.c1, 0.0, beta);
        return c_eg_scaled(tau, 0.0, 1.0, q.theta0, base, beta, &region);
      }
      break;
    case RegionKind::EquilateralTriangle:
      if (uniform) return c_triangle(tau, q.center, q.theta0, q.a, beta);
      break;
    case RegionKind::Cardioid:
      if (uniform) {
        EGNamedParams p;
        p.a = q.a;
        p.c = q.c;
        p.zeta0 = q.center;
        p.theta0 = q.theta0;
        return c_eg_named(EGShape::Cardioid, p, tau, beta);
      }
      throw NotCoveredError(
          "hole_constant: cardioid holes are covered only for elliptic Ginibre (c_eg_named)");
  }
  return c_generic(pot, region, beta);
}

}  // namespace chole
