#include <algorithm>
#include <cmath>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/identities.hpp"
#include "chole/specialfn.hpp"

namespace chole {

FourierProfile bal_ml_disk(int b, double x0, double a) {
  if (b < 1) throw DomainError("bal_ml_disk: b must be a positive integer");
  if (!(a > 0.0 && x0 >= 0.0)) throw DomainError("bal_ml_disk: need a > 0, x0 >= 0");
  if (x0 + a > std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps))
    throw ContainmentError("bal_ml_disk: disk not contained in the support");
  FourierProfile out;
  out.coeffs.assign(b, 0.0);
  for (int l = 0; l < b; ++l) {
    double s = 0.0;
    for (int k = l; k <= b - 1; k += 2) {
      double inner = 0.0;
      for (int m = 0; m <= b - 1 - k; ++m) {
        int e = 2 + l + k + 2 * m;
        inner += binomial(b - 1 - k, m) * std::pow(x0, 2.0 * (b - 1 - k - m)) *
                 std::pow(a, double(e)) / e;
      }
      s += binomial(b - 1, k) * binomial(k, (k - l) / 2) * std::pow(x0, double(k)) * inner;
    }
    out.coeffs[l] = double(b) * b / std::pow(a, double(l)) * s;
  }
  return out;
}

FourierProfile bal_ml_ellipse(int b, double a, double c) {
  if (b < 1) throw DomainError("bal_ml_ellipse: b must be a positive integer");
  double lim = std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps);
  if (!(a > 0.0 && c > 0.0)) throw DomainError("bal_ml_ellipse: need a, c > 0");
  if (a > lim || c > lim) throw ContainmentError("bal_ml_ellipse: ellipse not contained in the support");
  double al = (a + c) / 2.0, ga = (a - c) / 2.0;
  std::vector<double> e(b + 1, 0.0);
  std::vector<std::vector<double>> d(b);
  for (int k = 0; k < b; ++k) d[k] = d_coeffs(b, k);  // indices l = k..b
  for (int l = 0; l <= b; ++l) {
    double s = 0.0;
    for (int j = 0; j <= b - 1; ++j) {
      double inner = 0.0;
      for (int k = j % 2; k <= j; k += 2) {
        if (l < k) continue;
        double w = (k != 0) ? 1.0 : 0.5;
        double sym = std::pow(al, double(j + k)) * std::pow(ga, double(j - k)) +
                     std::pow(al, double(j - k)) * std::pow(ga, double(j + k));
        inner += w * sym * binomial(j, (j - k) / 2) * d[k][l - k];
      }
      s += binomial(b - 1, j) * std::pow(al * al + ga * ga, double(b - 1 - j)) * inner;
    }
    e[l] = (al * al - ga * ga) * b * b / 2.0 * s;
  }
  FourierProfile out;
  out.step = 2;
  out.coeffs.resize(b + 1);
  out.coeffs[0] = e[0];
  for (int l = 1; l <= b; ++l) {
    double al2 = std::pow(al, 2.0 * l), ga2 = std::pow(ga, 2.0 * l);
    out.coeffs[l] = e[l] * std::pow(al * ga, double(l)) / (al2 + ga2);
  }
  return out;
}

// ---------------------------------------------------------------- rectangle

namespace {

double fact(int n) { return std::tgamma(n + 1.0); }

// Bracket functions of the hyperbolic direction:
//   coth: (M pi coth(M pi) - 1)/(2 M^{2v+2}) + sum_j (-1)^{v+j} zeta(2v-2j)/M^{2+2j}
//   sinh: (M pi / sinh(M pi) - 1)/(2 M^{2v+2}) + sum_j (-1)^{v+j} (2^{1-2v+2j}-1) zeta(2v-2j)/M^{2+2j}
// Both equal (-1)^v sum_n (+-1)^n / (n^{2v} (n^2 + M^2)); the power series in M^2 is
// used below M = 1/2 to avoid cancellation.
double eta_neg(double s) { return (std::pow(2.0, 1.0 - s) - 1.0) * zeta(s); }  // sum (-1)^n n^-s

double bracket(bool coth, int v, double M) {
  double sv = (v % 2 == 0) ? 1.0 : -1.0;
  if (M < 0.5) {
    double s = 0.0, m2 = M * M, pw = 1.0;
    for (int i = 0; i < 80; ++i) {
      double zz = coth ? zeta(2.0 * v + 2.0 + 2.0 * i) : eta_neg(2.0 * v + 2.0 + 2.0 * i);
      double term = ((i % 2 == 0) ? 1.0 : -1.0) * pw * zz;
      s += term;
      if (std::abs(term) < 1e-18 * std::abs(s)) break;
      pw *= m2;
    }
    return sv * s;
  }
  double x = M * kPi;
  double h = coth ? x / std::tanh(x) : x / std::sinh(x);
  double s = (h - 1.0) / (2.0 * std::pow(M, 2.0 * v + 2.0));
  for (int j = 0; j < v; ++j) {
    double z = zeta_even(v - j);
    if (!coth) z *= std::pow(2.0, 1.0 - 2.0 * (v - j)) - 1.0;
    s += (((v + j) % 2 == 0) ? 1.0 : -1.0) * z / std::pow(M, 2.0 + 2.0 * j);
  }
  return s;
}

// Laurent part of the bracket in powers of 1/m with M = r m (index = power).
std::vector<double> bracket_poly(bool coth, int v, double r, int deg) {
  std::vector<double> out(deg + 1, 0.0);
  if (coth) out[2 * v + 1] += kPi / (2.0 * std::pow(r, 2.0 * v + 1.0));
  out[2 * v + 2] += -1.0 / (2.0 * std::pow(r, 2.0 * v + 2.0));
  for (int j = 0; j < v; ++j) {
    double z = zeta_even(v - j);
    if (!coth) z *= std::pow(2.0, 1.0 - 2.0 * (v - j)) - 1.0;
    out[2 + 2 * j] += (((v + j) % 2 == 0) ? 1.0 : -1.0) * z / std::pow(r, 2.0 + 2.0 * j);
  }
  return out;
}

struct RectGeometry {
  // hyperbolic direction [h_lo, h_hi], sine direction [s_lo, s_hi]
  double h_lo, h_hi, s_lo, s_hi;
  bool coth_on_hi;
  double r() const { return (h_hi - h_lo) / (s_hi - s_lo); }
  // exponent index for the hyperbolic factor given l
};

RectGeometry geometry(double a1, double a2, double c1, double c2, RectSide side) {
  switch (side) {
    case RectSide::Right: return {a1, a2, c1, c2, true};
    case RectSide::Left: return {a1, a2, c1, c2, false};
    case RectSide::Top: return {c1, c2, a1, a2, true};
    case RectSide::Bottom: return {c1, c2, a1, a2, false};
  }
  return {};
}

bool horizontal_alt(RectSide side) { return side == RectSide::Top || side == RectSide::Bottom; }

struct MLRect {
  int b;
  RectGeometry g;
  bool alt_uses_l;  // the sine-direction factor carries index l (top/bottom)

  double weight(int n, double len, int v) const {
    return fact(2 * n) * std::pow(len, 2.0 * v + 1.0) / (fact(2 * n - 2 * v) * std::pow(kPi, 2.0 * v + 1.0));
  }
  double pref() const {
    double sgn = g.coth_on_hi ? -1.0 : 1.0;
    return sgn * 4.0 * b * b / ((g.s_hi - g.s_lo) * kPi * kPi);
  }
  int n_hyp(int l) const { return alt_uses_l ? b - 1 - l : l; }
  int n_alt(int l) const { return alt_uses_l ? l : b - 1 - l; }

  double coefficient(int m) const {
    double lh = g.h_hi - g.h_lo, ls = g.s_hi - g.s_lo, M = g.r() * m;
    double sm = (m % 2 == 0) ? 1.0 : -1.0;
    double total = 0.0;
    for (int l = 0; l <= b - 1; ++l) {
      int nh = n_hyp(l), na = n_alt(l);
      double H = 0.0;
      for (int v = 0; v <= nh; ++v) {
        double e = 2.0 * (nh - v);
        double hi = std::pow(g.h_hi, e) * bracket(g.coth_on_hi, v, M);
        double lo = std::pow(g.h_lo, e) * bracket(!g.coth_on_hi, v, M);
        H += weight(nh, lh, v) * (hi - lo);
      }
      double A = 0.0;
      for (int v = 0; v <= na; ++v) {
        double e = 2.0 * (na - v);
        A += weight(na, ls, v) * ((v % 2 == 0) ? 1.0 : -1.0) *
             (sm * std::pow(g.s_hi, e) - std::pow(g.s_lo, e)) / std::pow(double(m), 2.0 * v + 1.0);
      }
      total += binomial(b - 1, l) * H * A;
    }
    return pref() * total;
  }

  // Laurent coefficients for even and odd m.
  void laurent(std::vector<double>& ev, std::vector<double>& od) const {
    int deg = 4 * b + 2;
    ev.assign(deg + 1, 0.0);
    od.assign(deg + 1, 0.0);
    double lh = g.h_hi - g.h_lo, ls = g.s_hi - g.s_lo, r = g.r();
    for (int l = 0; l <= b - 1; ++l) {
      int nh = n_hyp(l), na = n_alt(l);
      std::vector<double> H(deg + 1, 0.0);
      for (int v = 0; v <= nh; ++v) {
        double e = 2.0 * (nh - v);
        auto ph = bracket_poly(g.coth_on_hi, v, r, deg);
        auto pl = bracket_poly(!g.coth_on_hi, v, r, deg);
        for (int k = 0; k <= deg; ++k)
          H[k] += weight(nh, lh, v) * (std::pow(g.h_hi, e) * ph[k] - std::pow(g.h_lo, e) * pl[k]);
      }
      std::vector<double> Ae(deg + 1, 0.0), Ao(deg + 1, 0.0);
      for (int v = 0; v <= na; ++v) {
        double e = 2.0 * (na - v), w = weight(na, ls, v) * ((v % 2 == 0) ? 1.0 : -1.0);
        Ae[2 * v + 1] += w * (std::pow(g.s_hi, e) - std::pow(g.s_lo, e));
        Ao[2 * v + 1] += w * (-std::pow(g.s_hi, e) - std::pow(g.s_lo, e));
      }
      double bc = binomial(b - 1, l) * pref();
      for (int i = 0; i <= deg; ++i) {
        if (H[i] == 0.0) continue;
        for (int k = 0; i + k <= deg; ++k) {
          ev[i + k] += bc * H[i] * Ae[k];
          od[i + k] += bc * H[i] * Ao[k];
        }
      }
    }
  }
};

int exact_terms(double r) { return std::max(8, int(std::ceil(40.0 / (kPi * r)))); }

SineSeries make_series(double t0, double L, int N, std::function<double(int)> coef,
                       const std::vector<double>& ev, const std::vector<double>& od) {
  SineSeries s;
  s.t0 = t0;
  s.L = L;
  s.exact.resize(N);
  for (int n = 1; n <= N; ++n) s.exact[n - 1] = coef(n);
  s.alpha.resize(ev.size());
  s.beta.resize(ev.size());
  for (std::size_t j = 0; j < ev.size(); ++j) {
    s.alpha[j] = 0.5 * (ev[j] + od[j]);
    s.beta[j] = 0.5 * (ev[j] - od[j]);
  }
  s.coefficient_fn = coef;
  return s;
}

void check_rect(double a1, double a2, double c1, double c2) {
  if (!(a2 > a1 && c2 > c1)) throw DomainError("rectangle: need a2 > a1 and c2 > c1");
}

}  // namespace

SineSeries bal_rectangle(const Potential& pot, double a1, double a2, double c1, double c2,
                         RectSide side) {
  check_rect(a1, a2, c1, c2);
  auto g = geometry(a1, a2, c1, c2, side);
  double r = g.r(), L = g.s_hi - g.s_lo;
  int N = exact_terms(r);
  if (pot.kind() == PotentialKind::EllipticGinibre ||
      (pot.kind() == PotentialKind::Ginibre)) {
    double tau = pot.tau();
    double K = 4.0 * L / (kPi * kPi * kPi * (1.0 - tau * tau));
    auto coef = [=](int n) {
      if (n % 2 == 0) return 0.0;
      return K * std::tanh(r * n * kPi / 2.0) / (double(n) * n);
    };
    std::vector<double> ev(3, 0.0), od(3, 0.0);
    od[2] = K;
    return make_series(g.s_lo, L, N, coef, ev, od);
  }
  if (pot.kind() != PotentialKind::MittagLeffler || !pot.integer_b())
    throw NotCoveredError("bal_rectangle: needs elliptic Ginibre or Mittag-Leffler with integer b");
  auto ml = std::make_shared<MLRect>(MLRect{pot.int_b(), g, horizontal_alt(side)});
  std::vector<double> ev, od;
  ml->laurent(ev, od);
  return make_series(g.s_lo, L, N, [ml](int n) { return ml->coefficient(n); }, ev, od);
}

std::vector<double> bal_rectangle_coeffs(const Potential& pot, double a1, double a2, double c1,
                                         double c2, RectSide side, int m_max) {
  if (m_max < 1) throw DomainError("bal_rectangle_coeffs: m_max must be >= 1");
  auto s = bal_rectangle(pot, a1, a2, c1, c2, side);
  std::vector<double> out(m_max);
  for (int m = 1; m <= m_max; ++m) out[m - 1] = s.coefficient_fn(m);
  return out;
}

SineSeries bal_square_series(int b, double c) {
  if (b < 1 || !(c > 0.0)) throw DomainError("bal_square_series: bad parameters");
  if (c / std::sqrt(2.0) > std::pow(double(b), -1.0 / (2.0 * b)) * (1.0 + kGeoEps))
    throw ContainmentError("bal_square_series: square not contained in the support");
  double pref = 16.0 * b * b * std::pow(c, 2.0 * b - 1.0) / (std::pow(kPi, 3) * std::pow(2.0, 2.0 * b));
  int deg = 4 * b + 2;
  // coefficient of n = 2m+1 after converting cos(y n pi / c) to sin(n pi (y + c/2)/c)
  std::vector<double> lau(deg + 1, 0.0);   // part without tanh
  std::vector<double> tanh_part(deg + 1, 0.0);  // multiplies tanh(n pi / 2)
  for (int l = 0; l <= b - 1; ++l) {
    for (int v1 = 0; v1 <= l; ++v1) {
      for (int v2 = 0; v2 <= b - 1 - l; ++v2) {
        double w = binomial(b - 1, l) * fact(2 * l) / fact(2 * l - 2 * v1) *
                   fact(2 * b - 2 - 2 * l) / fact(2 * b - 2 - 2 * l - 2 * v2) *
                   std::pow(2.0, 2.0 * (v1 + v2)) * ((v2 % 2 == 0) ? 1.0 : -1.0) /
                   std::pow(kPi, 2.0 * (v1 + v2));
        if ((v1 + v2) % 2 == 0) tanh_part[2 + 2 * v1 + 2 * v2] += pref * w;
        for (int q = 0; q < v1; ++q) {
          double z = (1.0 - std::pow(2.0, -2.0 * (v1 - q))) * zeta_even(v1 - q);
          lau[3 + 2 * v2 + 2 * q] += pref * w * 4.0 * (((v1 + q) % 2 == 0) ? 1.0 : -1.0) / kPi * z;
        }
      }
    }
  }
  auto coef = [=](int n) {
    if (n % 2 == 0) return 0.0;
    double th = std::tanh(n * kPi / 2.0), s = 0.0;
    for (int j = 0; j <= deg; ++j) s += (th * tanh_part[j] + lau[j]) / std::pow(double(n), double(j));
    return s;
  };
  std::vector<double> ev(deg + 1, 0.0), od(deg + 1, 0.0);
  for (int j = 0; j <= deg; ++j) od[j] = tanh_part[j] + lau[j];
  return make_series(-c / 2.0, c, exact_terms(1.0), coef, ev, od);
}

}  // namespace chole
