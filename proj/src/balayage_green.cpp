#include <algorithm>
#include <cmath>
#include <limits>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"

namespace chole {

// ---------------------------------------------------------------- elliptic Ginibre

BalayageDensity bal_triangle_uniform(double tau, cplx zeta0, double theta0, double a) {
  if (!(tau >= 0.0 && tau < 1.0) || !(a > 0.0)) throw DomainError("triangle: bad parameters");
  auto region = HoleRegion::triangle(zeta0, theta0, a);
  auto v = validate(Potential::elliptic_ginibre(tau), region);
  if (!v.hole_in_support) throw ContainmentError("triangle: not contained in the support");
  BalayageDensity out;
  double k = 1.0 / (8.0 * kPi * a * (1.0 - tau * tau));
  for (const auto& ch : region.charts())
    out.segments.push_back({ch, [=](double y) { return k * (3.0 * a * a - 4.0 * y * y); }, 0.0});
  out.total_mass = 3.0 * std::sqrt(3.0) / 4.0 * a * a / (kPi * (1.0 - tau * tau));
  out.note = "polynomial";
  return out;
}

ComplementEllipseCoeffs bal_eg_complement_ellipse(double tau, double a, double c) {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("complement ellipse: tau outside [0,1)");
  if (!(a > 0.0 && c > 0.0) || a > (1.0 + tau) * (1.0 + kGeoEps) ||
      c > (1.0 - tau) * (1.0 + kGeoEps))
    throw DomainError("complement ellipse: need a in (0, 1+tau], c in (0, 1-tau]");
  double t2 = 1.0 - tau * tau;
  return {(t2 - a * c) / (2.0 * kPi * t2),
          (a + c) * ((a + c) * tau - a + c) / (8.0 * kPi * t2)};
}

std::function<double(double)> bal_eg_complement_disk(double tau, double x0, double y0, double a) {
  if (!(tau >= 0.0 && tau < 1.0) || !(a > 0.0)) throw DomainError("complement disk: bad parameters");
  auto v = validate(Potential::elliptic_ginibre(tau), HoleRegion::disk_complement(cplx(x0, y0), a));
  if (!v.hole_in_support) throw ContainmentError("complement disk: disk not contained in the support");
  double t2 = 1.0 - tau * tau;
  return [=](double th) {
    return a / (kPi * t2) *
           (t2 / (2.0 * a) - a / 2.0 - x0 * (1.0 - tau) * std::cos(th) -
            y0 * (1.0 + tau) * std::sin(th) + a * tau * std::cos(2.0 * th));
  };
}

// ---------------------------------------------------------------- Green-function routes

double modulus_for_ratio(double ratio) {
  if (!(ratio > 0.0)) throw DomainError("modulus_for_ratio: ratio must be positive");
  auto f = [&](double k) { return elliptic_Kprime(k) / elliptic_K(k) - ratio; };
  double lo = 1e-6, hi = 1.0 - 1e-6;
  if (f(lo) < 0.0 || f(hi) > 0.0) throw DomainError("modulus_for_ratio: root not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double square_modulus() {
  static const double k = modulus_for_ratio(2.0);
  return k;
}

namespace {

// Convex region seen from a boundary point z: exit distance along e.
struct ConvexShape {
  std::vector<std::pair<cplx, cplx>> halfplanes;  // (point, inward normal)
  bool has_circle = false;
  cplx center = 0.0;
  double radius = 0.0;
  std::vector<cplx> corners;

  double exit(cplx z, cplx e) const {
    double t = std::numeric_limits<double>::infinity();
    double scale = std::abs(z) + radius + 1.0;
    for (const auto& [p, n] : halfplanes) {
      double dist = std::real((z - p) * std::conj(n));  // >= 0 inside
      double rate = std::real(e * std::conj(n));
      if (rate < 0.0 && dist > 1e-14 * scale) t = std::min(t, -dist / rate);
      else if (rate < 0.0 && dist <= 1e-14 * scale) t = 0.0;
    }
    if (has_circle) {
      cplx d = z - center;
      double B = std::real(d * std::conj(e));
      double C = std::norm(d) - radius * radius;
      double disc = std::max(0.0, B * B - C);
      t = std::min(t, std::max(0.0, -B + std::sqrt(disc)));
    }
    return t;
  }
};

// int over the region of kernel(w) dA(w) in polar coordinates about boundary point z.
double polar_about(const ConvexShape& sh, cplx z, cplx inward,
                   const std::function<double(cplx)>& kernel, double rel_tol) {
  double th0 = std::arg(inward);
  double lo = th0 - kPi / 2.0, hi = th0 + kPi / 2.0;
  QuadOptions outer;
  outer.rel_tol = rel_tol;
  outer.abs_tol = 1e-14;
  double scale = std::abs(z) + 1.0;
  for (cplx c : sh.corners) {
    if (std::abs(c - z) < 1e-12 * scale) continue;
    double ang = std::arg(c - z);
    while (ang < lo) ang += 2.0 * kPi;
    while (ang > hi) ang -= 2.0 * kPi;
    if (ang > lo + 1e-12 && ang < hi - 1e-12) outer.breaks.push_back(ang);
  }
  std::sort(outer.breaks.begin(), outer.breaks.end());
  QuadOptions inner;
  inner.rel_tol = rel_tol * 0.1;
  inner.abs_tol = 1e-15;
  auto fth = [&](double th) {
    cplx e = std::polar(1.0, th);
    double R = sh.exit(z, e);
    if (!(R > 0.0) || !std::isfinite(R)) return 0.0;
    return quad1d([&](double r) { return kernel(z + r * e) * r; }, 0.0, R, inner);
  };
  return quad1d(fth, lo, hi, outer);
}

ConvexShape rectangle_shape(double a1, double a2, double c1, double c2) {
  ConvexShape sh;
  sh.halfplanes = {{cplx(a1, 0), 1.0}, {cplx(a2, 0), -1.0}, {cplx(0, c1), cplx(0, 1)},
                   {cplx(0, c2), cplx(0, -1)}};
  sh.corners = {cplx(a1, c1), cplx(a2, c1), cplx(a2, c2), cplx(a1, c2)};
  return sh;
}

cplx rectangle_inward(double a1, double a2, double c1, double c2, cplx z) {
  double w = a2 - a1, h = c2 - c1;
  double d[4] = {std::abs(z.real() - a2) / w, std::abs(z.imag() - c2) / h,
                 std::abs(z.real() - a1) / w, std::abs(z.imag() - c1) / h};
  int k = int(std::min_element(d, d + 4) - d);
  if (d[k] > 1e-9) throw DomainError("green: point is not on the rectangle boundary");
  const cplx n[4] = {-1.0, cplx(0, -1), 1.0, cplx(0, 1)};
  return n[k];
}

}  // namespace

double bal_square_elliptic(double c, double y) {
  if (!(c > 0.0) || c / std::sqrt(2.0) > 1.0 + kGeoEps)
    throw ContainmentError("bal_square_elliptic: square not inside the unit disk");
  if (!(std::abs(y) < c / 2.0)) throw DomainError("bal_square_elliptic: y outside (-c/2, c/2)");
  double k = square_modulus();
  double K = elliptic_K(k);
  cplx iK(0.0, K);
  cplx z(c / 2.0, y);
  auto jz = jacobi_sncndn(2.0 * K * z / c + iK, k);
  double fz = jz.sn.real();
  cplx dfz = jz.cn * jz.dn * (2.0 * K / c);
  auto kernel = [&](cplx w) {
    cplx fw = jacobi_sn(2.0 * K * w / c + iK, k);
    return std::real(-dfz / (kPi * (fw - fz))) / kPi;
  };
  auto sh = rectangle_shape(-c / 2.0, c / 2.0, -c / 2.0, c / 2.0);
  return polar_about(sh, z, -1.0, kernel, 1e-9);
}

double bal_green_generic(const Potential& pot, const HoleRegion& region, cplx z) {
  const auto& q = region.params();
  switch (region.kind()) {
    case RegionKind::Disk: {
      cplx c = q.center;
      double a = q.a;
      if (std::abs(std::abs(z - c) - a) > 1e-9 * a) throw DomainError("green: point not on the circle");
      ConvexShape sh;
      sh.has_circle = true;
      sh.center = c;
      sh.radius = a;
      auto kernel = [&](cplx w) {
        return (a * a - std::norm(w - c)) / (2.0 * kPi * a * std::norm(z - w)) * pot.density(w);
      };
      return polar_about(sh, z, -(z - c) / a, kernel, 1e-9);
    }
    case RegionKind::Sector: {
      double a = q.a, p = q.p, psi = 2.0 * kPi / p;
      if (p < 2.0) throw NotCoveredError("green: sector needs p >= 2 (convex)");
      ConvexShape sh;
      sh.has_circle = true;
      sh.radius = a;
      sh.halfplanes = {{0.0, cplx(0, 1)}, {0.0, cplx(0, -1) * std::polar(1.0, psi)}};
      sh.corners = {0.0, a, a * std::polar(1.0, psi)};
      auto phi = [&](cplx w) {
        cplx s = std::pow(w / a, p / 2.0);
        return -(s + 1.0 / s) / 2.0;
      };
      cplx zeta = std::pow(z / a, p / 2.0);
      double dphi = std::abs(-(1.0 - 1.0 / (zeta * zeta)) / 2.0 * (p / 2.0) * zeta / z);
      double fz = phi(z).real();
      cplx inward;
      double scale = a;
      if (std::abs(std::abs(z) - a) < 1e-9 * scale) inward = -z / std::abs(z);
      else if (std::abs(z.imag()) < 1e-12 * scale) inward = cplx(0, 1);
      else inward = cplx(0, -1) * std::polar(1.0, psi);
      auto kernel = [&](cplx w) {
        cplx fw = phi(w);
        return fw.imag() * dphi / (kPi * std::norm(fw - fz)) * pot.density(w);
      };
      return polar_about(sh, z, inward, kernel, 1e-9);
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      double a1 = q.a1, a2 = q.a2, c1 = q.c1, c2 = q.c2;
      double A = a2 - a1, B = c2 - c1;
      cplx rot = std::polar(1.0, q.theta0);
      cplx zl = z / rot;
      cplx inward = rectangle_inward(a1, a2, c1, c2, zl);
      double k = modulus_for_ratio(2.0 * B / A);
      double K = elliptic_K(k);
      auto u = [&](cplx w) { return -K + (2.0 * K / A) * (w - cplx(a1, c1)); };
      auto jz = jacobi_sncndn(u(zl), k);
      double fz = jz.sn.real();
      double dphi = std::abs(jz.cn * jz.dn) * 2.0 * K / A;
      auto kernel = [&](cplx w) {
        cplx fw = jacobi_sn(u(w), k);
        return fw.imag() * dphi / (kPi * std::norm(fw - fz)) * pot.density(rot * w);
      };
      return polar_about(rectangle_shape(a1, a2, c1, c2), zl, inward, kernel, 1e-9);
    }
    default: throw NotCoveredError("green: region has no conformal map here");
  }
}

std::vector<double> rectangle_green_coefficients(const Potential& pot, double a1, double a2,
                                                 double c1, double c2, int m_max) {
  if (!(a2 > a1 && c2 > c1) || m_max < 1) throw DomainError("green coefficients: bad parameters");
  double A = a2 - a1, B = c2 - c1;
  std::vector<double> out(m_max);
  QuadOptions o, in;
  o.rel_tol = 1e-10;
  in.rel_tol = 1e-11;
  o.abs_tol = in.abs_tol = 1e-16;
  for (int m = 1; m <= m_max; ++m) {
    double k = m * kPi / B;
    double den = -std::expm1(-2.0 * k * A);
    auto f = [&](double xi, double eta) {
      double sh = std::exp(-k * (a2 - xi)) * (-std::expm1(-2.0 * k * (xi - a1))) / den;
      return sh * std::sin(k * (eta - c1)) * pot.density(cplx(xi, eta));
    };
    out[m - 1] = 2.0 / B *
                 quad2d(f, a1, a2, [&](double) { return c1; }, [&](double) { return c2; }, o, in);
  }
  return out;
}

// ---------------------------------------------------------------- dispatcher

namespace {

bool is_uniform(const Potential& pot) {
  return pot.kind() == PotentialKind::Ginibre || pot.kind() == PotentialKind::EllipticGinibre;
}

double uniform_scale(const Potential& pot) { return 1.0 / (1.0 - pot.tau() * pot.tau()); }

void require_valid(const Potential& pot, const HoleRegion& region) {
  auto v = validate(pot, region);
  if (!v.boundary_in_support || !v.hole_in_support)
    throw ContainmentError("balayage: " + region.name() + " is not contained in the support of " +
                           pot.name());
}

BalayageDensity from_profile(const Chart& ch, std::function<double(double)> f, const char* note) {
  BalayageDensity out;
  out.segments.push_back({ch, std::move(f), 0.0});
  out.note = note;
  out.total_mass = out.mass_by_quadrature(1e-12);
  return out;
}

}  // namespace

BalayageDensity balayage(const Potential& pot, const HoleRegion& region) {
  const auto& q = region.params();
  auto charts = region.charts();
  bool ml_int = pot.kind() == PotentialKind::MittagLeffler && pot.integer_b();
  bool centered = std::abs(q.center) == 0.0;
  switch (region.kind()) {
    case RegionKind::Disk: {
      if (pot.is_radial() && centered) return bal_radial_disk(pot, q.a);
      require_valid(pot, region);
      if (is_uniform(pot)) {
        double d = q.a * q.a / (2.0 * kPi) * uniform_scale(pot);
        return from_profile(charts[0], [d](double) { return d; }, "uniform");
      }
      if (ml_int) {
        double x0 = std::abs(q.center), ph = std::arg(q.center);
        auto prof = bal_ml_disk(pot.int_b(), x0, q.a);
        return from_profile(charts[0], [prof, ph](double t) { return prof(t - ph); },
                            "mittag-leffler disk");
      }
      break;
    }
    case RegionKind::Annulus:
      if (pot.is_radial()) return bal_radial_annulus(pot, q.rho1, q.rho2);
      break;
    case RegionKind::DiskComplement: {
      if (pot.is_radial() && centered) return bal_radial_disk_complement(pot, q.a);
      if (is_uniform(pot)) {
        auto f = bal_eg_complement_disk(pot.tau(), q.center.real(), q.center.imag(), q.a);
        return from_profile(charts[0], f, "complement of a disk");
      }
      break;
    }
    case RegionKind::Sector: {
      if (pot.is_radial()) {
        auto out = bal_sector_density(pot, q.a, q.p);
        out.total_mass = out.mass_by_quadrature(1e-10);
        return out;
      }
      if (is_uniform(pot)) {
        require_valid(pot, region);
        auto base = bal_sector_density(Potential::ginibre(), q.a, q.p);
        double s = uniform_scale(pot);
        for (auto& seg : base.segments) {
          auto f = seg.density;
          seg.density = [f, s](double t) { return s * f(t); };
        }
        base.total_mass = base.mass_by_quadrature(1e-10);
        return base;
      }
      break;
    }
    case RegionKind::Ellipse: {
      require_valid(pot, region);
      if (is_uniform(pot)) {
        auto prof = bal_ml_ellipse(1, q.a, q.c);
        double s = uniform_scale(pot);
        return from_profile(charts[0], [prof, s](double t) { return s * prof(t); },
                            "uniform ellipse");
      }
      if (ml_int && centered) {
        auto prof = bal_ml_ellipse(pot.int_b(), q.a, q.c);
        return from_profile(charts[0], prof, "mittag-leffler ellipse");
      }
      break;
    }
    case RegionKind::EllipseComplement: {
      if (is_uniform(pot) && centered && q.theta0 == 0.0) {
        auto cc = bal_eg_complement_ellipse(pot.tau(), q.a, q.c);
        return from_profile(
            charts[0], [cc](double t) { return cc.c0 + 2.0 * cc.c1 * std::cos(2.0 * t); },
            "complement of an ellipse");
      }
      break;
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      if (!(is_uniform(pot) || ml_int)) break;
      require_valid(pot, region);
      BalayageDensity out;
      bool centered_square = region.kind() == RegionKind::Square && ml_int;
      const RectSide sides[4] = {RectSide::Right, RectSide::Top, RectSide::Left, RectSide::Bottom};
      for (int s = 0; s < 4; ++s) {
        auto ser = std::make_shared<SineSeries>(
            centered_square ? bal_square_series(pot.int_b(), q.a2 - q.a1)
                            : bal_rectangle(pot, q.a1, q.a2, q.c1, q.c2, sides[s]));
        out.segments.push_back({charts[s], [ser](double t) { return (*ser)(t); }, 0.0});
      }
      out.note = centered_square ? "centered square series" : "rectangle sine series";
      out.total_mass = out.mass_by_quadrature(1e-11);
      return out;
    }
    case RegionKind::EquilateralTriangle:
      if (is_uniform(pot)) return bal_triangle_uniform(pot.tau(), q.center, q.theta0, q.a);
      break;
    case RegionKind::Cardioid: break;
  }
  throw NotCoveredError("balayage: no closed form for " + region.name() + " with " + pot.name());
}

}  // namespace chole
