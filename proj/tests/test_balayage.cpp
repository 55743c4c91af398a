#include <cmath>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"
#include "doctest.h"

using namespace chole;

namespace {

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

double ml_radius(double b) { return std::pow(b, -1.0 / (2.0 * b)); }

// max_n |int z^n dnu - int_U z^n dmu| by boundary quadrature against 2D quadrature
double moment_gap(const Potential& pot, const HoleRegion& U, const BalayageDensity& nu, int n_max) {
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    auto f = [n](cplx z) { return std::pow(z, n); };
    cplx lhs = nu.integrate_c(f, 1e-12);
    cplx rhs = integrate_mu_c(pot, U, f, 1e-12);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double min_on_grid(const BalayageDensity& nu) {
  double m = 1e300;
  for (const auto& s : nu.segments)
    for (int i = 1; i < 200; ++i) m = std::min(m, s.density(s.chart.t0 + (s.chart.t1 - s.chart.t0) * i / 200.0));
  return m;
}

}  // namespace

TEST_CASE("centered disk") {
  auto nu = bal_radial_disk(Potential::ginibre(), 0.6);
  CHECK(close_rel(nu.total_mass, 0.36, 1e-14));
  REQUIRE(nu.segments.size() == 1);
  for (double t : {0.0, 1.0, 4.0}) CHECK(close_rel(nu.segments[0].density(t), 0.36 / (2.0 * kPi), 1e-14));

  auto sp = bal_radial_disk(Potential::spherical(), 1.0);
  CHECK(close_rel(sp.total_mass, 0.5, 1e-14));
  CHECK(close_rel(sp.segments[0].density(0.3), 1.0 / (4.0 * kPi), 1e-14));

  auto ml = Potential::mittag_leffler(3);
  auto m3 = bal_radial_disk(ml, 0.5);
  CHECK(close_rel(m3.total_mass, 0.046875, 1e-13));
  CHECK(close_rel(m3.total_mass, mu_mass_of_region(ml, HoleRegion::disk(0.0, 0.5)), 1e-10));
  CHECK_THROWS_AS(bal_radial_disk(ml, 0.95), DomainError);
}

TEST_CASE("centered annulus") {
  auto G = Potential::ginibre();
  auto s = annulus_split(G, 0.3, 0.7);
  CHECK(close_rel(s.kappa, 0.4, 1e-14));
  // int r^2 log r ... by antiderivative r^2 log r - r^2 / 2
  auto F = [](double r) { return r * r * std::log(r) - r * r / 2.0; };
  double lam = (std::log(0.7) - (F(0.7) - F(0.3)) / 0.4) / std::log(0.7 / 0.3);
  CHECK(close_rel(s.lambda, lam, 1e-13));
  CHECK(s.lambda >= 0.0);
  CHECK(s.lambda <= 1.0);

  auto sp = annulus_split(Potential::spherical(), 0.5, 2.0);
  QuadOptions o;
  o.rel_tol = 1e-13;
  double kap = quad1d([](double r) { return 2.0 * r / std::pow(1.0 + r * r, 2); }, 0.5, 2.0, o);
  double lr = quad1d([](double r) { return std::log(r) * 2.0 * r / std::pow(1.0 + r * r, 2); }, 0.5, 2.0, o);
  CHECK(close_rel(sp.kappa, kap, 1e-12));
  CHECK(close_rel(sp.lambda, (std::log(2.0) - lr / kap) / std::log(4.0), 1e-12));

  for (double b : {0.5, 2.0, 4.0}) {
    double R = ml_radius(b);
    auto t = annulus_split(Potential::mittag_leffler(b), 0.2 * R, 0.9 * R);
    CHECK(t.lambda >= 0.0);
    CHECK(t.lambda <= 1.0);
  }
  auto nu = bal_radial_annulus(G, 0.3, 0.7);
  CHECK(std::abs(nu.total_mass - 0.4) < 1e-14);
  CHECK(std::abs(nu.mass_by_quadrature() - 0.4) < 1e-10);
  CHECK_THROWS(bal_radial_annulus(G, 0.7, 0.3));
}

TEST_CASE("disk complement") {
  CHECK(close_rel(bal_radial_disk_complement(Potential::ginibre(), 0.4).total_mass, 0.84, 1e-14));
  for (double b : {1.0, 2.0, 3.5}) {
    double a = 0.6 * ml_radius(b);
    auto nu = bal_radial_disk_complement(Potential::mittag_leffler(b), a);
    CHECK(close_rel(nu.total_mass, 1.0 - b * std::pow(a, 2.0 * b), 1e-12));
    CHECK(close_rel(nu.total_mass, mu_mass_of_region(Potential::mittag_leffler(b), HoleRegion::disk_complement(0.0, a)),
                    1e-9));
  }
  CHECK(std::abs(bal_radial_disk_complement(Potential::ginibre(), 1.0).total_mass) < 1e-15);
}

TEST_CASE("sector fast paths agree with the generic kernel") {
  auto ml = Potential::mittag_leffler(2);
  double a = 0.5;
  double r = 0.4 * a;
  CHECK(std::abs(bal_sector_generic(ml, a, 5.0, SectorPart::Edge, r) - bal_sector_ml_edge(2, a, 5.0, r)) <= 1e-9);
  for (double p : {1.0, 2.0, 3.0, 5.0}) {
    CHECK(close_rel(bal_sector_generic(ml, a, p, SectorPart::Edge, r), bal_sector_ml_edge(2, a, p, r), 1e-9));
    double th = 0.3 * 2.0 * kPi / p;
    CHECK(close_rel(bal_sector_generic(ml, a, p, SectorPart::Arc, th), bal_sector_ml_arc(2, a, p, th), 1e-9));
  }
  // 2b = p (j + 1/2): p = 8 and p = 8/3 at b = 2
  for (double p : {8.0, 8.0 / 3.0}) {
    CHECK(close_rel(bal_sector_ml_edge(2, a, p, 0.3 * a), bal_sector_generic(ml, a, p, SectorPart::Edge, 0.3 * a), 1e-9));
  }
  auto sp = Potential::spherical();
  for (double aa : {0.7, 2.0})
    for (double p : {1.0, 3.0}) {
      SphericalSectorArc arc(aa, p);
      double th = 0.4 * 2.0 * kPi / p;
      CHECK(close_rel(arc(th), bal_sector_generic(sp, aa, p, SectorPart::Arc, th), 1e-9));
    }
}

TEST_CASE("sector arc vanishes at the edges and has the ML coefficient shape") {
  const double b = 1.5, a = 0.4, p = 3.0;
  CHECK(std::abs(bal_sector_ml_arc(b, a, p, 0.0)) < 1e-13);
  CHECK(std::abs(bal_sector_ml_arc(b, a, p, 2.0 * kPi / p)) < 1e-12);
  // sine coefficients of the arc density, by quadrature, are proportional to 1/((m+1/2)(2b+pm+p/2))
  QuadOptions o;
  o.rel_tol = 1e-12;
  std::vector<double> ratio;
  for (int m = 0; m < 4; ++m) {
    double k = p * (m + 0.5);
    double s = quad1d([&](double t) { return bal_sector_ml_arc(b, a, p, t) * std::sin(k * t); }, 0.0, 2.0 * kPi / p, o);
    ratio.push_back(s * (m + 0.5) * (2.0 * b + p * m + p / 2.0));
  }
  for (int m = 1; m < 4; ++m) CHECK(close_rel(ratio[m], ratio[0], 1e-8));
}

TEST_CASE("sector mass conservation and positivity") {
  for (auto [b, p] : {std::pair{1.0, 2.0}, {2.0, 5.0}, {0.5, 1.0}, {3.0, 4.0}}) {
    auto pot = Potential::mittag_leffler(b);
    double a = 0.7 * ml_radius(b);
    auto nu = bal_sector_density(pot, a, p);
    double mu = mu_mass_of_region(pot, HoleRegion::sector(a, p));
    CHECK(std::abs(nu.total_mass - mu) <= 1e-8);
    CHECK(std::abs(nu.mass_by_quadrature(1e-10) - mu) <= 1e-8);
    CHECK(min_on_grid(nu) >= -1e-12);
  }
  auto sp = bal_sector_density(Potential::spherical(), 1.5, 2.0);
  CHECK(std::abs(sp.mass_by_quadrature(1e-10) - mu_mass_of_region(Potential::spherical(), HoleRegion::sector(1.5, 2.0))) <=
        1e-8);
}

TEST_CASE("sector corner exponent") {
  for (auto [b, p] : {std::pair{1.0, 5.0}, {1.0, 1.0}, {2.0, 12.0}, {0.75, 2.0}}) {
    double a = 0.5 * ml_radius(b);
    double x1 = std::log(1e-4 * a), x2 = std::log(1e-2 * a);
    double y1 = std::log(bal_sector_ml_edge(b, a, p, 1e-4 * a)), y2 = std::log(bal_sector_ml_edge(b, a, p, 1e-2 * a));
    double slope = (y2 - y1) / (x2 - x1);
    CHECK(std::abs(slope - (std::min(2.0 * b, p / 2.0) - 1.0)) <= 0.05);
  }
}

TEST_CASE("Mittag-Leffler disk") {
  for (int b = 1; b <= 4; ++b) {
    auto f = bal_ml_disk(b, 0.0, 0.5 * ml_radius(b));
    CHECK(close_rel(f.coeffs[0], b * std::pow(0.5 * ml_radius(b), 2.0 * b) / 2.0, 1e-13));
    for (std::size_t l = 1; l < f.coeffs.size(); ++l) CHECK(std::abs(f.coeffs[l]) < 1e-15);
  }
  for (double x0 : {0.0, 0.2, 0.45}) {
    auto f = bal_ml_disk(1, x0, 0.3);
    CHECK(close_rel(f(0.7), 0.09 / (2.0 * kPi), 1e-13));
  }
  double a = 0.4 * ml_radius(3);
  auto pot = Potential::mittag_leffler(3);
  auto U = HoleRegion::disk(a, a);
  auto nu = balayage(pot, U);
  CHECK(moment_gap(pot, U, nu, 8) <= 1e-7);
  CHECK(std::abs(nu.total_mass - mu_mass_of_region(pot, U)) <= 1e-8);
  CHECK(min_on_grid(nu) >= -1e-12);
  CHECK_THROWS_AS(bal_ml_disk(2, 0.5, 0.5), ContainmentError);
}

TEST_CASE("Mittag-Leffler ellipse") {
  const double a = 0.5, c = 0.3;
  const double al = (a + c) / 2.0, ga = (a - c) / 2.0, rho = ga / al;
  auto f1 = bal_ml_ellipse(1, a, c);
  auto f2 = bal_ml_ellipse(2, a, c);
  for (double th : {0.0, 0.4, 1.3, 2.9}) {
    double d1 = al * al / (2.0 * kPi) * (1.0 - rho * rho) * (1.0 - 2.0 * std::cos(2.0 * th) / (1.0 / rho + rho));
    double d2 = std::pow(al, 4) / kPi * (1.0 - std::pow(rho, 4)) *
                (1.0 - 2.0 * std::cos(4.0 * th) / (std::pow(rho, -2) + rho * rho));
    CHECK(close_rel(f1(th), d1, 1e-12));
    CHECK(close_rel(f2(th), d2, 1e-12));
  }
  const double a3 = 0.45, c3 = 0.3;
  const double al3 = (a3 + c3) / 2.0, r3 = (a3 - c3) / 2.0 / al3;
  auto f3 = bal_ml_ellipse(3, a3, c3);
  for (double th : {0.0, 0.4, 1.3}) {
    double d3 = 3.0 * std::pow(al3, 6) / kPi *
                ((1.0 + 3.0 * r3 * r3 - 3.0 * std::pow(r3, 4) - std::pow(r3, 6)) / 2.0 *
                     (1.0 - 2.0 * std::cos(4.0 * th) / (std::pow(r3, -2) + r3 * r3)) +
                 (1.0 - std::pow(r3, 6)) * (std::cos(2.0 * th) / (1.0 / r3 + r3) -
                                            std::cos(6.0 * th) / (std::pow(r3, -3) + std::pow(r3, 3))));
    CHECK(close_rel(f3(th), d3, 1e-12));
  }
  // circle
  auto fc = bal_ml_ellipse(3, 0.4, 0.4);
  auto fd = bal_ml_disk(3, 0.0, 0.4);
  for (double th : {0.1, 1.0, 2.0}) CHECK(close_rel(fc(th), fd(th), 1e-13));

  double R = ml_radius(3);
  auto pot = Potential::mittag_leffler(3);
  auto U = HoleRegion::ellipse(0.4 * R, 0.85 * R);
  auto nu = balayage(pot, U);
  CHECK(moment_gap(pot, U, nu, 10) <= 1e-7);
  CHECK(min_on_grid(nu) >= -1e-12);
}

TEST_CASE("rectangle, b = 1 coefficients") {
  const double a1 = 0.1, a2 = 0.5, c1 = -0.2, c2 = 0.3, tau = 0.3;
  auto E = Potential::elliptic_ginibre(tau);
  auto R = bal_rectangle(E, a1, a2, c1, c2, RectSide::Right);
  auto T = bal_rectangle(E, a1, a2, c1, c2, RectSide::Top);
  for (int m = 0; m < 30; ++m) {
    int n = 2 * m + 1;
    double kr = 4.0 * (c2 - c1) / std::pow(kPi, 3) * std::tanh((a2 - a1) / (c2 - c1) * n * kPi / 2.0) / (n * n);
    double kt = 4.0 * (a2 - a1) / std::pow(kPi, 3) * std::tanh((c2 - c1) / (a2 - a1) * n * kPi / 2.0) / (n * n);
    CHECK(close_rel(R.coefficient(n), kr / (1.0 - tau * tau), 1e-13));
    CHECK(close_rel(T.coefficient(n), kt / (1.0 - tau * tau), 1e-13));
    CHECK(R.coefficient(n + 1) == 0.0);
  }
  // Mittag-Leffler b = 1 runs through the general-b code
  auto M = bal_rectangle(Potential::mittag_leffler(1), a1, a2, c1, c2, RectSide::Left);
  auto G = bal_rectangle(Potential::ginibre(), a1, a2, c1, c2, RectSide::Left);
  for (double y : {-0.15, 0.0, 0.21}) CHECK(close_rel(M(y), G(y), 1e-11));
}

TEST_CASE("rectangle moments and mass") {
  auto E = Potential::elliptic_ginibre(0.2);
  auto U = HoleRegion::rectangle(-0.4, 0.6, -0.1, 0.3);
  auto nu = balayage(E, U);
  CHECK(moment_gap(E, U, nu, 8) <= 1e-7);
  CHECK(std::abs(nu.total_mass - mu_mass_of_region(E, U)) <= 1e-8);
  CHECK(min_on_grid(nu) >= -1e-12);

  auto M = Potential::mittag_leffler(2);
  auto V = HoleRegion::rectangle(0.1, 0.5, -0.2, 0.3);
  auto mu = balayage(M, V);
  CHECK(moment_gap(M, V, mu, 8) <= 1e-7);
  CHECK(std::abs(mu.mass_by_quadrature() - mu_mass_of_region(M, V)) <= 1e-8);
}

TEST_CASE("centered square: all sides agree, even coefficients vanish") {
  for (int b = 1; b <= 3; ++b) {
    double c = 0.8 * ml_radius(b);
    auto pot = Potential::mittag_leffler(b);
    auto sides = {RectSide::Right, RectSide::Top, RectSide::Left, RectSide::Bottom};
    auto R = bal_rectangle_coeffs(pot, -c / 2, c / 2, -c / 2, c / 2, RectSide::Right, 12);
    for (auto s : sides) {
      auto C = bal_rectangle_coeffs(pot, -c / 2, c / 2, -c / 2, c / 2, s, 12);
      for (int m = 0; m < 12; ++m) CHECK(std::abs(C[m] - R[m]) <= 1e-14 * (std::abs(R[0]) + 1e-300));
    }
    for (int m = 1; m < 12; m += 2) CHECK(std::abs(R[m]) <= 1e-15 * std::abs(R[0]));
    auto S = bal_square_series(b, c);
    auto Rr = bal_rectangle(pot, -c / 2, c / 2, -c / 2, c / 2, RectSide::Right);
    for (double y : {0.1 * c, 0.45 * c, -0.3 * c}) CHECK(close_rel(S(y), Rr(y), 1e-11));
    // square symmetry y -> -y and the four-fold rotation
    auto nu = balayage(pot, HoleRegion::square(c));
    REQUIRE(nu.segments.size() == 4);
    for (double f : {0.13, 0.31, 0.47}) {
      double t = -c / 2 + f * c;
      for (int j = 1; j < 4; ++j)
        CHECK(std::abs(nu.segments[j].density(t) - nu.segments[0].density(t)) <= 1e-12 * nu.segments[0].density(t));
      CHECK(std::abs(nu.segments[0].density(t) - nu.segments[0].density(-t)) <= 1e-12 * nu.segments[0].density(t));
    }
  }
}

TEST_CASE("rectangle against the double sine Green series") {
  auto ml2 = Potential::mittag_leffler(2);
  const double a1 = 0.1, a2 = 0.5, c1 = -0.2, c2 = 0.3;
  auto R = bal_rectangle(ml2, a1, a2, c1, c2, RectSide::Right);
  auto g = rectangle_green_coefficients(ml2, a1, a2, c1, c2, 8);
  for (int m = 1; m <= 8; ++m) CHECK(std::abs(R.coefficient(m) - g[m - 1]) <= 1e-9 * std::abs(R.coefficient(1)));
  auto U = HoleRegion::rectangle(a1, a2, c1, c2);
  for (double y : {-0.15, -0.05, 0.0, 0.1, 0.25}) {
    CHECK(close_rel(R(y), bal_green_generic(ml2, U, cplx(a2, y)), 1e-6));
  }
}

TEST_CASE("rectangle corner behavior, b = 1") {
  const double tau = 0.2, c1 = -0.1;
  auto R = bal_rectangle(Potential::elliptic_ginibre(tau), -0.4, 0.6, c1, 0.3, RectSide::Right);
  double lo = 1e300, hi = -1e300;
  for (int k = 6; k <= 30; ++k) {
    double h = std::ldexp(1.0, -k);
    double v = R(c1 + h) / h - 2.0 / (kPi * kPi * (1.0 - tau * tau)) * std::log(1.0 / h);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(std::isfinite(lo));
  CHECK(hi - lo < 0.05);
}

TEST_CASE("triangle") {
  const double tau = 0.2, a = 0.45, th0 = kPi / 10.0;
  const cplx z0(0.5, 0.2);
  auto E = Potential::elliptic_ginibre(tau);
  auto U = HoleRegion::triangle(z0, th0, a);
  auto nu = bal_triangle_uniform(tau, z0, th0, a);
  REQUIRE(nu.segments.size() == 3);
  double h = std::sqrt(3.0) * a / 2.0;
  for (const auto& s : nu.segments) {
    CHECK(std::abs(s.density(h)) < 1e-15);
    CHECK(std::abs(s.density(-h)) < 1e-15);
    CHECK(close_rel(s.density(0.1), (3.0 * a * a - 0.04) / (8.0 * kPi * a * (1.0 - tau * tau)), 1e-14));
  }
  CHECK(close_rel(nu.total_mass, U.area() / (kPi * (1.0 - tau * tau)), 1e-13));
  CHECK(moment_gap(E, U, nu, 8) <= 1e-7);
  // rotation by 2 pi / 3 about z0
  for (int j = 1; j < 3; ++j) {
    cplx rot = std::polar(1.0, 2.0 * kPi * j / 3.0);
    for (double t : {-0.2, 0.05, 0.3}) {
      cplx p0 = nu.segments[0].chart.point(t), pj = nu.segments[j].chart.point(t);
      CHECK(std::abs(z0 + (p0 - z0) * rot - pj) < 1e-14);
      CHECK(std::abs(nu.segments[0].density(t) - nu.segments[j].density(t)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(bal_triangle_uniform(tau, cplx(1.0, 0.0), 0.0, 0.45), ContainmentError);
}

TEST_CASE("elliptic Ginibre ellipse complement") {
  const double tau = 0.2;
  double a = 0.6, c = a * (1.0 - tau) / (1.0 + tau);
  CHECK(std::abs(bal_eg_complement_ellipse(tau, a, c).c1) < 1e-16);
  auto e = bal_eg_complement_ellipse(tau, 1.0 + tau, 1.0 - tau);
  CHECK(std::abs(e.c0) < 1e-16);
  CHECK(std::abs(e.c1) < 1e-16);
  auto k = bal_eg_complement_ellipse(tau, 0.45, 0.75);
  CHECK(close_rel(k.c0, (0.96 - 0.45 * 0.75) / (2.0 * kPi * 0.96), 1e-14));
  CHECK(close_rel(k.c1, 1.2 * (1.2 * tau - 0.45 + 0.75) / (8.0 * kPi * 0.96), 1e-14));

  auto E = Potential::elliptic_ginibre(tau);
  auto U = HoleRegion::ellipse_complement(0.45, 0.75);
  auto nu = balayage(E, U);
  for (int n : {0, 1, 2, 3, 4}) {
    auto f = [n](cplx z) { return std::pow(z, -n); };
    cplx lhs = nu.integrate_c(f, 1e-12);
    cplx rhs = n == 0 ? cplx(mu_mass_of_region(E, U)) : integrate_mu_c(E, U, f, 1e-12);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
    if (n != 0 && n != 2) CHECK(std::abs(lhs) <= 1e-12);
  }
  CHECK(std::abs(integrate_mu_c(E, U, [](cplx z) { return std::pow(z, -2); }, 1e-12)) > 1e-4);
  CHECK_THROWS(bal_eg_complement_ellipse(tau, 1.3, 0.5));
}

TEST_CASE("elliptic Ginibre disk complement") {
  const double tau = 0.3, a = 0.5;
  auto ce = bal_eg_complement_ellipse(tau, a, a);
  auto d = bal_eg_complement_disk(tau, 0.0, 0.0, a);
  for (double th : {0.0, 0.7, 2.0, 4.0})
    CHECK(close_rel(d(th), ce.c0 + 2.0 * ce.c1 * std::cos(2.0 * th), 1e-13));

  auto E = Potential::elliptic_ginibre(tau);
  auto U = HoleRegion::disk_complement(cplx(0.1, -0.05), 0.5);
  auto nu = balayage(E, U);
  CHECK(std::abs(nu.mass_by_quadrature() - mu_mass_of_region(E, U)) <= 1e-8);
  CHECK(min_on_grid(nu) >= -1e-12);

  // tau = 0: density a/pi (1/(2a) - a/2 - x0 cos - y0 sin), minimum in the direction of (x0, y0)
  auto f = bal_eg_complement_disk(0.0, 0.2, 0.1, 0.6);
  double best = 0.0, fmin = 1e300;
  for (int i = 0; i < 20000; ++i) {
    double th = 2.0 * kPi * i / 20000.0;
    if (f(th) < fmin) {
      fmin = f(th);
      best = th;
    }
  }
  // refine by golden section around the grid minimum
  double lo = best - 1e-3, hi = best + 1e-3;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (f(m1) < f(m2)) hi = m2;
    else lo = m1;
  }
  CHECK(std::abs(0.5 * (lo + hi) - std::atan2(0.1, 0.2)) < 1e-6);
}

TEST_CASE("Jacobi sn square map") {
  CHECK(std::abs(square_modulus() - 0.171573) < 1e-6);
  double k = square_modulus();
  CHECK(std::abs(elliptic_Kprime(k) / elliptic_K(k) - 2.0) < 1e-10);
  CHECK(close_rel(modulus_for_ratio(1.0), 1.0 / std::sqrt(2.0), 1e-10));
}

TEST_CASE("Ginibre square by the conformal map") {
  double e0 = bal_square_elliptic(0.8, 0.0);
  CHECK(close_rel(e0, bal_square_series(1, 0.8)(0.0), 1e-6));
  CHECK(close_rel(bal_square_elliptic(0.8, 0.2), bal_square_elliptic(0.8, -0.2), 1e-9));
  CHECK(close_rel(bal_square_elliptic(0.8, 0.2), bal_square_series(1, 0.8)(0.2), 1e-6));
}

TEST_CASE("generic Green-function balayage") {
  auto G = Potential::ginibre();
  for (double th : {0.0, 1.0, 2.5}) {
    cplx z = std::polar(0.4, th);
    // per arclength: (a^2 / 2 pi) / a
    CHECK(close_rel(bal_green_generic(G, HoleRegion::disk(0.0, 0.4), z), 0.4 / (2.0 * kPi), 1e-8));
  }
  auto ml1 = Potential::mittag_leffler(1);
  const double a = 0.6;
  auto S = HoleRegion::sector(a, 2.0);
  for (double r : {0.1, 0.25, 0.4, 0.55}) {
    CHECK(close_rel(bal_green_generic(ml1, S, cplx(r, 0.0)), bal_sector_ml_edge(1, a, 2.0, r), 1e-7));
  }
  double th = 1.1;
  CHECK(close_rel(bal_green_generic(ml1, S, std::polar(a, th)), bal_sector_ml_arc(1, a, 2.0, th) / a, 1e-7));
}

TEST_CASE("Green series coefficients up to m = 200") {
  // the inner sum is in closed form, so each coefficient is exact up to quadrature
  auto ml2 = Potential::mittag_leffler(2);
  auto g = rectangle_green_coefficients(ml2, 0.1, 0.5, -0.2, 0.3, 200);
  auto s = bal_rectangle_coeffs(ml2, 0.1, 0.5, -0.2, 0.3, RectSide::Right, 200);
  double worst = 0.0;
  for (int m = 0; m < 200; ++m) worst = std::max(worst, std::abs(g[m] - s[m]));
  CHECK(worst < 1e-9 * std::abs(s[0]));
}

TEST_CASE("dispatcher") {
  auto G = Potential::ginibre();
  CHECK(balayage(G, HoleRegion::annulus(0.2, 0.5)).segments.size() == 2);
  CHECK_THROWS_AS(balayage(G, HoleRegion::cardioid(0.3, 0.2)), NotCoveredError);
  auto nu = balayage(G, HoleRegion::disk(cplx(0.2, 0.1), 0.3));
  CHECK(close_rel(nu.total_mass, 0.09, 1e-13));
  for (double t : {0.0, 2.0}) CHECK(close_rel(nu.segments[0].density(t), 0.09 / (2.0 * kPi), 1e-13));
}
