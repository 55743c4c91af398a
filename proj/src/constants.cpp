#include "chole/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/oracle.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"

namespace chole {

std::string to_string(CMethod m) {
  switch (m) {
    case CMethod::ClosedForm: return "closed-form";
    case CMethod::GenericQuadrature: return "generic-quadrature";
    case CMethod::ScalingLaw: return "scaling-law";
  }
  return "?";
}

double combine(double beta, const Breakdown& b) {
  return beta / 4.0 * (b.integral_Q_dnu + 2.0 * b.c_U_mu - b.integral_Q_dmu);
}

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

HoleConstant from_breakdown(double beta, const Breakdown& b, CMethod m, std::string note) {
  HoleConstant h;
  h.beta = beta;
  h.breakdown = b;
  h.C = combine(beta, b);
  h.method = m;
  h.note = std::move(note);
  return h;
}

// int_lo^hi f(r) dmu_rad(r), ring by ring.
double mu_rad_integral(const Potential& pot, double lo, double hi,
                       const std::function<double(double)>& f) {
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-16;
  auto fm = [&](double r) { return f(r) * pot.mu_rad(r); };
  if (pot.kind() == PotentialKind::Spherical) {
    if (std::isinf(hi)) return quad1d_inf(fm, lo, o);
    return quad1d(fm, lo, hi, o);
  }
  const auto& rings = pot.rings();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < rings.size(); j += 2) {
    double u = std::max(rings[j], lo), v = std::min(rings[j + 1], hi);
    if (!(v > u)) continue;
    s += std::isinf(v) ? quad1d_inf(fm, u, o) : quad1d(fm, u, v, o);
  }
  return s;
}

void require_radius(const Potential& pot, double r, const char* what) {
  if (!pot.is_radial()) throw DomainError(std::string(what) + ": potential is not rotation invariant");
  if (!(r > 0.0) || pot.ring_of(r) < 0)
    throw DomainError(std::string(what) + ": radius outside the support rings");
}

// b with Q = |z|^{2b}, or NaN.
double ml_power(const Potential& pot) {
  switch (pot.kind()) {
    case PotentialKind::Ginibre: return 1.0;
    case PotentialKind::EllipticGinibre: return pot.tau() == 0.0 ? 1.0 : std::nan("");
    case PotentialKind::MittagLeffler: return pot.b();
    default: return std::nan("");
  }
}

void require_sector_params(const Potential& pot, double a, double p) {
  if (!pot.is_radial()) throw DomainError("sector: potential is not rotation invariant");
  const auto& rings = pot.rings();
  if (rings.empty() || rings[0] != 0.0) throw DomainError("sector: the support does not start at 0");
  if (!(a > 0.0) || a > rings[1] * (1.0 + kGeoEps))
    throw ContainmentError("sector: radius outside the first support ring");
  if (p >= 2.0) return;
  bool ginibre = ml_power(pot) == 1.0;
  if (p > 1.0 && ginibre && std::abs(a - rings[1]) > 1e-12) return;
  throw DomainError("sector: p must be >= 2 (p in (1,2) only for Ginibre with a != 1)");
}

// Successive Richardson elimination for partial sums at N, 2N, 4N, ...
double richardson(std::vector<double> s, const std::vector<int>& exponents) {
  for (std::size_t e = 0; e < exponents.size() && s.size() > 1; ++e) {
    double f = std::pow(2.0, exponents[e]);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = (f * s[i + 1] - s[i]) / (f - 1.0);
    s.pop_back();
  }
  return s.back();
}

// sum_{m >= 0} f(m) for f with an expansion in powers of 1/m starting at m^-3.
double smooth_series(const std::function<double(int)>& f) {
  const int N0 = 256, levels = 5;
  std::vector<double> partial;
  double s = 0.0;
  int m = 0;
  for (int l = 0; l < levels; ++l) {
    int N = N0 << l;
    for (; m < N; ++m) s += f(m);
    partial.push_back(s);
  }
  return richardson(partial, {2, 3, 4, 5});
}

}  // namespace

// ---------------------------------------------------------------- radial

HoleConstant c_radial_disk(const Potential& pot, double a, double beta) {
  require_beta(beta);
  require_radius(pot, a, "c_radial_disk");
  double ga = pot.g(a);
  Breakdown b;
  b.integral_Q_dnu = ga * pot.mu_cumulative(a);
  b.integral_Q_dmu = mu_rad_integral(pot, 0.0, a, [&](double r) { return pot.g(r); });
  HoleConstant h = from_breakdown(beta, b, CMethod::ClosedForm, "radial disk");
  h.C = beta / 4.0 * mu_rad_integral(pot, 0.0, a, [&](double r) { return ga - pot.g(r); });
  return h;
}

HoleConstant c_radial_annulus(const Potential& pot, double rho1, double rho2, double beta) {
  require_beta(beta);
  auto sp = annulus_split(pot, rho1, rho2);
  double g1 = pot.g(rho1), g2 = pot.g(rho2);
  double lam = sp.lambda;
  Breakdown b;
  b.integral_Q_dnu = sp.kappa * (lam * g1 + (1.0 - lam) * g2);
  b.integral_Q_dmu = mu_rad_integral(pot, rho1, rho2, [&](double r) { return pot.g(r); });
  HoleConstant h = from_breakdown(beta, b, CMethod::ClosedForm, "radial annulus");
  h.C = beta / 4.0 * mu_rad_integral(pot, rho1, rho2, [&](double r) {
          return (1.0 - lam) * g2 + lam * g1 - pot.g(r);
        });
  return h;
}

HoleConstant c_radial_disk_complement(const Potential& pot, double a, double beta) {
  require_beta(beta);
  require_radius(pot, a, "c_radial_disk_complement");
  const double inf = std::numeric_limits<double>::infinity();
  double ga = pot.g(a);
  Breakdown b;
  b.integral_Q_dnu = ga * (pot.mu_cumulative(inf) - pot.mu_cumulative(a));
  b.c_U_mu = mu_rad_integral(pot, a, inf, [&](double r) { return std::log(r / a); });
  b.integral_Q_dmu = mu_rad_integral(pot, a, inf, [&](double r) { return pot.g(r); });
  HoleConstant h = from_breakdown(beta, b, CMethod::ClosedForm, "radial disk complement");
  h.C = beta / 4.0 * mu_rad_integral(pot, a, inf, [&](double r) {
          return ga - pot.g(r) + 2.0 * std::log(r / a);
        });
  return h;
}

// ---------------------------------------------------------------- sector

double c_sector_ml(double b, double a, double p, double beta) {
  if (!(b > 0.0 && a > 0.0 && p > 1.0)) throw DomainError("c_sector_ml: bad parameters");
  double d = 2.0 * b / p;
  double v = digamma(0.5) - digamma(0.5 + d) + b / p * (trigamma(0.5) + trigamma(0.5 + d));
  return beta * std::pow(a, 4.0 * b) * v / (4.0 * kPi * kPi);
}

double sector_moment(const Potential& pot, double a, double s) {
  double b = ml_power(pot);
  if (!std::isnan(b)) return 2.0 * b * b * std::pow(a, 2.0 * b) / (s + 2.0 * b);
  if (pot.kind() == PotentialKind::Spherical) return SphericalSectorArc::moment(a, s);
  // r = a exp(-y/(s+1))
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-300;
  auto f = [&](double y) {
    double r = a * std::exp(-y / (s + 1.0));
    return std::exp(-y * s / (s + 1.0)) * pot.mu_rad(r) * r / (s + 1.0);
  };
  return quad1d_inf(f, 0.0, o);
}

std::vector<PowerTerm> spherical_power_terms(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("spherical_power_terms: need 0 < a < 1");
  std::vector<PowerTerm> t;
  double a2 = a * a, pw = a2;
  for (int k = 1; k < 100000; ++k, pw *= a2) {
    t.push_back({2.0 * k, (k % 2 ? 1.0 : -1.0) / k});
    if (pw / k < 1e-19) break;
  }
  return t;
}

namespace {

struct SectorSeriesValue {
  double bracket;  // C = (beta/4) bracket
  double q_dmu;    // (1/p) int g dmu_rad
};

// n >= 0 with k / p = n + 1/2, or -1.
long degenerate_index(double k, double p) {
  double x = k / p - 0.5;
  double n = std::round(x);
  return (n >= 0.0 && std::abs(x - n) < 1e-10) ? static_cast<long>(n) : -1;
}

SectorSeriesValue sector_series_at(const Potential& pot, double a, double p,
                                   const std::vector<PowerTerm>& terms) {
  std::vector<double> w, k2, Mk;
  std::vector<long> deg;
  double ga = 0.0, gmu = 0.0;
  for (const auto& t : terms) {
    if (t.k <= 0.0) continue;
    double ak = std::pow(a, t.k);
    double m = sector_moment(pot, a, t.k);
    ga += t.coeff * ak;
    gmu += t.coeff * ak * m;
    w.push_back(2.0 * p * t.coeff * ak / (kPi * kPi));
    k2.push_back(t.k * t.k);
    Mk.push_back(m);
    deg.push_back(degenerate_index(t.k, p));
  }
  double wB = ga * 2.0 / (p * kPi * kPi);
  auto f = [&](int m) {
    double s = p * (m + 0.5);
    double M = sector_moment(pot, a, s);
    double acc = wB / ((m + 0.5) * (m + 0.5));
    for (std::size_t i = 0; i < w.size(); ++i)
      if (deg[i] != m) acc += w[i] / (k2[i] - s * s);
    return M * acc;
  };
  double sum = smooth_series(f);
  // - M(k) sum_m 1/(k^2 - s_m^2)
  for (std::size_t i = 0; i < w.size(); ++i) {
    double k = std::sqrt(k2[i]);
    if (deg[i] < 0) {
      double inv = -(digamma_real(0.5 + k / p) - digamma_real(0.5 - k / p)) / (2.0 * k * p);
      sum -= w[i] * Mk[i] * inv;
    } else {
      // sum over m != n is -1/(4k^2); the m = n term tends to -M'(k)/(2k)
      double dM = mu_rad_integral(pot, 0.0, a, [&](double r) {
        double u = r / a;
        return u > 0.0 ? std::pow(u, k) * std::log(u) : 0.0;
      });
      sum += w[i] * Mk[i] / (4.0 * k2[i]) - w[i] * dM / (2.0 * k);
    }
  }
  SectorSeriesValue v;
  v.q_dmu = gmu / p;
  v.bracket = sum - v.q_dmu;
  return v;
}

}  // namespace

HoleConstant c_sector_series(const Potential& pot, double a, double p,
                             const std::vector<PowerTerm>& terms, double beta) {
  require_beta(beta);
  require_sector_params(pot, a, p);
  if (terms.empty()) throw DomainError("c_sector_series: empty power series");
  HoleConstant h;
  h.beta = beta;
  h.method = CMethod::ClosedForm;
  h.C = beta / 4.0 * sector_series_at(pot, a, p, terms).bracket;
  h.note = "sector power series";
  return h;
}

HoleConstant c_sector_quadrature(const Potential& pot, double a, double p, double beta) {
  require_beta(beta);
  require_sector_params(pot, a, p);
  QuadOptions o;
  o.rel_tol = 1e-11;
  o.abs_tol = 1e-15;
  double edge = quad1d(
      [&](double r) {
        if (r <= 0.0 || r >= a) return 0.0;
        return pot.g(r) * bal_sector(pot, a, p, SectorPart::Edge, r);
      },
      0.0, a, o);
  double wa = 2.0 / (p * kPi * kPi);
  double arc_mass = smooth_series([&](int m) {
    return wa * sector_moment(pot, a, p * (m + 0.5)) / ((m + 0.5) * (m + 0.5));
  });
  Breakdown b;
  b.integral_Q_dnu = 2.0 * edge + pot.g(a) * arc_mass;
  b.integral_Q_dmu = mu_rad_integral(pot, 0.0, a, [&](double r) { return pot.g(r); }) / p;
  return from_breakdown(beta, b, CMethod::ClosedForm, "sector edge quadrature");
}

HoleConstant c_sector(const Potential& pot, double a, double p, double beta) {
  require_beta(beta);
  require_sector_params(pot, a, p);
  double b = ml_power(pot);
  if (!std::isnan(b)) {
    HoleConstant h;
    h.beta = beta;
    h.C = c_sector_ml(b, a, p, beta);
    h.method = CMethod::ClosedForm;
    h.note = "digamma form";
    return h;
  }
  if (pot.kind() == PotentialKind::Spherical && a < 1.0)
    return c_sector_series(pot, a, p, spherical_power_terms(a), beta);
  return c_sector_quadrature(pot, a, p, beta);
}

// ---------------------------------------------------------------- generic

HoleConstant c_generic(const Potential& pot, const HoleRegion& region, double beta) {
  require_beta(beta);
  if (region.kind() == RegionKind::Cardioid)
    throw NotCoveredError(
        "c_generic: no closed-form balayage for the cardioid; nearest covered case is the "
        "elliptic Ginibre cardioid constant (c_eg_named)");
  double mass = mu_mass_of_region(pot, region);
  if (!(mass > 0.0)) {
    HoleConstant h;
    h.beta = beta;
    h.breakdown = Breakdown{};
    h.method = CMethod::GenericQuadrature;
    h.note = "mu(U) = 0";
    return h;
  }
  BalayageDensity nu = balayage(pot, region);
  auto Q = [&](cplx z) { return pot.Q(z); };
  Breakdown b;
  b.integral_Q_dnu = nu.integrate(Q, 1e-11);
  b.integral_Q_dmu = integrate_mu(pot, region, Q, 1e-11);
  if (!region.bounded()) b.c_U_mu = c_U_mu_quadrature(pot, region);
  return from_breakdown(beta, b, CMethod::GenericQuadrature, "balayage: " + nu.note);
}

}  // namespace chole
