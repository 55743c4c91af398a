#include <algorithm>
#include <cmath>
#include <limits>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"

namespace chole {

// ---------------------------------------------------------------- containers

namespace {

// int |f| dnu, loosely; sets the absolute floor for cancelling integrands.
double l1_scale(const std::vector<DensitySegment>& segments, const std::function<double(cplx)>& af) {
  double s = 0.0;
  for (const auto& seg : segments) {
    QuadOptions o;
    o.rel_tol = 1e-6;
    o.abs_tol = 1e-300;
    for (double c : seg.chart.corners)
      if (c > seg.chart.t0 && c < seg.chart.t1) o.breaks.push_back(c);
    s += quad1d_result([&](double t) { return af(seg.chart.point(t)) * std::abs(seg.density(t)); },
                       seg.chart.t0, seg.chart.t1, o)
             .value;
  }
  return s;
}

}  // namespace

double BalayageDensity::integrate(const std::function<double(cplx)>& f, double rel_tol) const {
  double s = 0.0;
  const double floor =
      std::max(1e-18, std::max(0.1 * rel_tol, 1e-14) * l1_scale(segments, [&](cplx z) { return std::abs(f(z)); }));
  for (const auto& seg : segments) {
    QuadOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = floor;
    for (double c : seg.chart.corners)
      if (c > seg.chart.t0 && c < seg.chart.t1) o.breaks.push_back(c);
    s += quad1d([&](double t) { return f(seg.chart.point(t)) * seg.density(t); }, seg.chart.t0,
                seg.chart.t1, o);
  }
  return s;
}

cplx BalayageDensity::integrate_c(const std::function<cplx(cplx)>& f, double rel_tol) const {
  cplx s = 0.0;
  const double floor =
      std::max(1e-18, std::max(0.1 * rel_tol, 1e-14) * l1_scale(segments, [&](cplx z) { return std::abs(f(z)); }));
  for (const auto& seg : segments) {
    QuadOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = floor;
    for (double c : seg.chart.corners)
      if (c > seg.chart.t0 && c < seg.chart.t1) o.breaks.push_back(c);
    s += quad1d_c([&](double t) { return f(seg.chart.point(t)) * seg.density(t); }, seg.chart.t0,
                  seg.chart.t1, o);
  }
  return s;
}

double BalayageDensity::mass_by_quadrature(double rel_tol) const {
  return integrate([](cplx) { return 1.0; }, rel_tol);
}

double FourierProfile::operator()(double theta) const {
  double s = coeffs.at(0);
  for (std::size_t l = 1; l < coeffs.size(); ++l)
    s += 2.0 * coeffs[l] * std::cos(step * double(l) * theta);
  return s / kPi;
}

double SineSeries::coefficient(int n) const {
  if (n >= 1 && n <= int(exact.size())) return exact[n - 1];
  if (coefficient_fn) return coefficient_fn(n);
  double s = 0.0, sg = (n % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t j = 1; j < alpha.size(); ++j)
    s += (alpha[j] + beta[j] * sg) / std::pow(double(n), double(j));
  return s;
}

double SineSeries::operator()(double t) const {
  double x = kPi * (t - t0) / L;
  int N = int(exact.size());
  double s = 0.0;
  for (int n = 1; n <= N; ++n) s += exact[n - 1] * std::sin(n * x);
  for (std::size_t j = 1; j < alpha.size(); ++j) {
    double al = alpha[j], be = j < beta.size() ? beta[j] : 0.0;
    if (al == 0.0 && be == 0.0) continue;
    double pa = 0.0, pb = 0.0;
    for (int n = 1; n <= N; ++n) {
      double term = std::sin(n * x) / std::pow(double(n), double(j));
      pa += term;
      pb += (n % 2 == 0) ? term : -term;
    }
    s += al * (clausen_sin(int(j), x) - pa) + be * (clausen_sin(int(j), x + kPi) - pb);
  }
  return s;
}

namespace {

Chart circle_chart(int id, cplx c, double r) {
  Chart ch;
  ch.id = id;
  ch.name = "circle" + std::to_string(id);
  ch.t0 = 0.0;
  ch.t1 = 2.0 * kPi;
  ch.kind = MeasureKind::PerDTheta;
  ch.point = [=](double t) { return c + r * std::polar(1.0, t); };
  ch.tangent = [=](double t) { return cplx(0.0, r) * std::polar(1.0, t); };
  return ch;
}

DensitySegment uniform_circle(int id, double r, double mass) {
  DensitySegment s;
  s.chart = circle_chart(id, 0.0, r);
  double d = mass / (2.0 * kPi);
  s.density = [d](double) { return d; };
  return s;
}

void require_radial(const Potential& pot) {
  if (!pot.is_radial()) throw DomainError("balayage: potential is not rotation invariant");
}

void require_in_ring(const Potential& pot, double r, const char* what) {
  if (!(r > 0.0) || pot.ring_of(r) < 0)
    throw DomainError(std::string(what) + ": radius outside the support rings");
}

// int_u^v log r dmu_rad on one ring, by parts.
double log_moment_piece(const Potential& pot, double u, double v) {
  auto rg = [&](double x) { return x == 0.0 ? 0.0 : x * pot.g1(x) * std::log(x); };
  return 0.5 * (rg(v) - rg(u) - pot.g(v) + pot.g(u));
}

}  // namespace

// ---------------------------------------------------------------- radial

BalayageDensity bal_radial_disk(const Potential& pot, double a) {
  require_radial(pot);
  require_in_ring(pot, a, "bal_radial_disk");
  BalayageDensity out;
  out.total_mass = pot.mu_cumulative(a);
  out.segments.push_back(uniform_circle(0, a, out.total_mass));
  out.note = "uniform";
  return out;
}

AnnulusSplit annulus_split(const Potential& pot, double rho1, double rho2) {
  require_radial(pot);
  if (!(rho1 > 0.0 && rho2 > rho1)) throw DomainError("annulus: need 0 < rho1 < rho2");
  require_in_ring(pot, rho1, "annulus");
  require_in_ring(pot, rho2, "annulus");
  double kappa = pot.mu_cumulative(rho2) - pot.mu_cumulative(rho1);
  if (kappa <= 0.0) return {0.0, 0.5};
  double lm = 0.0;
  const auto& rings = pot.rings();
  for (std::size_t j = 0; j + 1 < rings.size(); j += 2) {
    double u = std::max(rings[j], rho1), v = std::min(rings[j + 1], rho2);
    if (v > u) lm += log_moment_piece(pot, u, v);
  }
  double lambda = (std::log(rho2) - lm / kappa) / std::log(rho2 / rho1);
  return {kappa, lambda};
}

BalayageDensity bal_radial_annulus(const Potential& pot, double rho1, double rho2) {
  auto sp = annulus_split(pot, rho1, rho2);
  BalayageDensity out;
  out.total_mass = sp.kappa;
  out.segments.push_back(uniform_circle(0, rho1, sp.lambda * sp.kappa));
  out.segments.push_back(uniform_circle(1, rho2, (1.0 - sp.lambda) * sp.kappa));
  out.note = "lambda=" + std::to_string(sp.lambda);
  return out;
}

BalayageDensity bal_radial_disk_complement(const Potential& pot, double a) {
  require_radial(pot);
  require_in_ring(pot, a, "bal_radial_disk_complement");
  BalayageDensity out;
  out.total_mass =
      pot.mu_cumulative(std::numeric_limits<double>::infinity()) - pot.mu_cumulative(a);
  out.segments.push_back(uniform_circle(0, a, out.total_mass));
  out.note = "uniform";
  return out;
}

// ---------------------------------------------------------------- sector

namespace {

// b such that Q = |z|^{2b}, or NaN.
double ml_exponent(const Potential& pot) {
  switch (pot.kind()) {
    case PotentialKind::Ginibre: return 1.0;
    case PotentialKind::EllipticGinibre: return pot.tau() == 0.0 ? 1.0 : std::nan("");
    case PotentialKind::MittagLeffler: return pot.b();
    default: return std::nan("");
  }
}

void require_sector(const Potential& pot, double a, double p) {
  require_radial(pot);
  if (!(p >= 1.0)) throw DomainError("sector: p must be >= 1");
  const auto& rings = pot.rings();
  if (rings.empty() || rings[0] != 0.0)
    throw DomainError("sector: the support does not start at 0");
  if (!(a > 0.0) || a > rings[1] * (1.0 + kGeoEps))
    throw ContainmentError("sector: radius outside the first support ring");
}

// atanh(q) with q = exp(t), t < 0, accurate when q is close to 1.
double atanh_exp(double t) {
  double q = std::exp(t);
  return 0.5 * (std::log1p(q) - std::log(-std::expm1(t)));
}

// L(d) = sum_m sin((m+1/2) phi) / (m + 1/2 + d).
double sine_lerch(double phi, double d) {
  cplx z = std::polar(1.0, phi);
  return std::imag(std::polar(1.0, phi / 2.0) * lerch_phi1(z, 0.5 + d));
}

}  // namespace

double bal_sector_generic(const Potential& pot, double a, double p, SectorPart part, double t) {
  require_sector(pot, a, p);
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-16;
  if (part == SectorPart::Arc) {
    double phi = p * t;
    cplx e = std::polar(1.0, phi / 2.0);
    auto f = [&](double x) {
      cplx z = e * std::pow(x / a, p / 2.0);
      double im = 0.5 * (std::arg(1.0 + z) - std::arg(1.0 - z));
      return im * pot.mu_rad(x);
    };
    return 2.0 / (kPi * kPi) * quad1d(f, 0.0, a, o);
  }
  double r = t;
  if (!(r > 0.0 && r < a)) throw DomainError("sector edge: r outside (0, a)");
  double h = p / 2.0;
  auto second = [&](double x) { return atanh_exp(h * std::log(r * x / (a * a))); };
  // x = r - u^2 on [0, r], x = r + u^2 on [r, a]
  auto below = [&](double u) {
    double x = r - u * u;
    if (x <= 0.0) return 0.0;
    double first = atanh_exp(h * std::log1p(-u * u / r));
    return 2.0 * u * (first - second(x)) * pot.mu_rad(x);
  };
  auto above = [&](double u) {
    double x = r + u * u;
    double first = atanh_exp(-h * std::log1p(u * u / r));
    return 2.0 * u * (first - second(x)) * pot.mu_rad(x);
  };
  double s = quad1d(below, 0.0, std::sqrt(r), o) + quad1d(above, 0.0, std::sqrt(a - r), o);
  return s / (kPi * kPi * r);
}

double bal_sector_ml_edge(double b, double a, double p, double r) {
  if (!(r > 0.0 && r < a)) throw DomainError("sector edge: r outside (0, a)");
  double rho = r / a, c = 2.0 * b / p, z = std::pow(rho, p);
  double rp = std::pow(rho, p / 2.0), r2b = std::pow(rho, 2.0 * b);
  double pref = 2.0 * p * b * b * std::pow(a, 2.0 * b) / (kPi * kPi * r);
  double w = 4.0 * b * p;
  double jr = c - 0.5;
  long j = std::lround(jr);
  if (jr >= -0.5 && std::abs(jr - double(j)) < 1e-12 && j >= 0) {
    // 2b = s_j: the j-th term is replaced by its limit
    double S0 = 1.0 / ((2.0 * j + 1.0) * w);
    double inner = 0.0;
    for (long m = 0; m < j; ++m) inner += std::pow(z, double(m)) / double(m - j);
    inner += -std::pow(z, double(j)) * std::log1p(-z);
    inner -= std::real(lerch_phi1(z, double(j) + 1.0)) - std::pow(z, double(j)) / (2.0 * j + 1.0);
    double S1 = rp / w * inner;
    return pref * (r2b * S0 - S1 - r2b * std::log(rho) / (4.0 * b));
  }
  double S0 = kPi * std::tan(kPi * c) / w;
  double S1 = rp / w * std::real(lerch_phi1(z, 0.5 - c) - lerch_phi1(z, 0.5 + c));
  return pref * (r2b * S0 - S1);
}

double bal_sector_ml_arc(double b, double a, double p, double theta) {
  double phi = p * theta;
  if (phi <= 0.0 || phi >= 2.0 * kPi) return 0.0;
  double c = 2.0 * b / p;
  return b * std::pow(a, 2.0 * b) / (kPi * kPi) * (kPi / 2.0 - sine_lerch(phi, c));
}

double SphericalSectorArc::moment(double a, double s) {
  if (s <= 40.0 && std::pow(a, s) < 1e250) {
    double z = a * a / (1.0 + a * a);
    return incomplete_beta(z, 1.0 + s / 2.0, 1.0 - s / 2.0) / std::pow(a, s);
  }
  // t = exp(-y/(s+1)) in a int_0^1 t^s w(a t) dt
  QuadOptions o;
  o.rel_tol = 1e-13;
  auto f = [&](double y) {
    double x = a * std::exp(-y / (s + 1.0));
    return std::exp(-y) * 2.0 * x / std::pow(1.0 + x * x, 2);
  };
  return a / (s + 1.0) * quad1d_inf(f, 0.0, o);
}

SphericalSectorArc::SphericalSectorArc(double a, double p, int n_terms) : a_(a), p_(p) {
  if (!(a > 0.0 && p >= 1.0)) throw DomainError("spherical sector: bad parameters");
  double w = 2.0 * a / std::pow(1.0 + a * a, 2);
  double w1 = 2.0 * (1.0 - 3.0 * a * a) / std::pow(1.0 + a * a, 3);
  A1_ = a * w;
  A2_ = -a * a * w1;
  rem_.resize(n_terms);
  for (int m = 0; m < n_terms; ++m) {
    double s = p * (m + 0.5);
    rem_[m] = moment(a, s) - A1_ / (s + 1.0) - A2_ / ((s + 1.0) * (s + 2.0));
  }
  tail_ = std::abs(rem_.back()) / (3.0 * kPi * kPi);
}

double SphericalSectorArc::operator()(double theta) const {
  double phi = p_ * theta;
  if (phi <= 0.0 || phi >= 2.0 * kPi) return 0.0;
  double d1 = 1.0 / p_, d2 = 2.0 / p_;
  double L1 = sine_lerch(phi, d1), L2 = sine_lerch(phi, d2);
  double s1 = (kPi / 2.0 - L1) / d1;
  double s2 = (kPi / 2.0) / (d1 * d2) - L1 / (d1 * (d2 - d1)) - L2 / (d2 * (d1 - d2));
  double s = A1_ / p_ * s1 + A2_ / (p_ * p_) * s2;
  for (std::size_t m = 0; m < rem_.size(); ++m) {
    double u = m + 0.5;
    s += std::sin(u * phi) / u * rem_[m];
  }
  return s / (kPi * kPi);
}

double bal_sector(const Potential& pot, double a, double p, SectorPart part, double t) {
  require_sector(pot, a, p);
  double b = ml_exponent(pot);
  if (!std::isnan(b)) {
    return part == SectorPart::Edge ? bal_sector_ml_edge(b, a, p, t)
                                    : bal_sector_ml_arc(b, a, p, t);
  }
  if (pot.kind() == PotentialKind::Spherical && part == SectorPart::Arc) {
    return SphericalSectorArc(a, p)(t);
  }
  return bal_sector_generic(pot, a, p, part, t);
}

BalayageDensity bal_sector_density(const Potential& pot, double a, double p) {
  require_sector(pot, a, p);
  BalayageDensity out;
  auto charts = HoleRegion::sector(a, p).charts();
  double b = ml_exponent(pot);
  std::function<double(double)> edge, arc;
  double arc_tail = 0.0;
  if (!std::isnan(b)) {
    edge = [=](double r) { return r <= 0.0 || r >= a ? 0.0 : bal_sector_ml_edge(b, a, p, r); };
    arc = [=](double t) { return bal_sector_ml_arc(b, a, p, t); };
    out.note = "mittag-leffler closed sums";
  } else {
    edge = [=](double r) {
      return r <= 0.0 || r >= a ? 0.0 : bal_sector_generic(pot, a, p, SectorPart::Edge, r);
    };
    if (pot.kind() == PotentialKind::Spherical) {
      auto sa = std::make_shared<SphericalSectorArc>(a, p);
      arc_tail = sa->tail_bound();
      arc = [sa](double t) { return (*sa)(t); };
      out.note = "spherical incomplete-beta arc";
    } else {
      arc = [=](double t) { return bal_sector_generic(pot, a, p, SectorPart::Arc, t); };
      out.note = "arctanh quadrature";
    }
  }
  out.segments.push_back({charts[0], edge, 0.0});
  out.segments.push_back({charts[1], arc, arc_tail});
  out.segments.push_back({charts[2], edge, 0.0});
  out.total_mass = pot.mu_cumulative(a) / p;
  return out;
}

}  // namespace chole
