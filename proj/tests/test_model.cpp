#include <cmath>
#include <random>

#include "chole/errors.hpp"
#include "chole/model.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"
#include "doctest.h"

using namespace chole;

namespace {

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// int over S of the density, polar about the origin
double total_mass_2d(const Potential& pot) {
  QuadOptions o, in;
  o.rel_tol = 1e-11;
  in.rel_tol = 1e-12;
  if (pot.is_elliptic()) {
    double sx = pot.semi_x(), sy = pot.semi_y();
    return quad2d([&](double x, double y) { return pot.density(cplx(x, y)); }, -sx, sx,
                  [&](double x) { return -sy * std::sqrt(std::max(0.0, 1.0 - x * x / (sx * sx))); },
                  [&](double x) { return sy * std::sqrt(std::max(0.0, 1.0 - x * x / (sx * sx))); }, o, in);
  }
  double R = pot.outer_radius();
  double radial;
  if (std::isinf(R)) {
    radial = quad1d_inf([&](double r) { return pot.density(cplx(r, 0.0)) * r; }, 0.0, in);
  } else {
    radial = quad1d([&](double r) { return pot.density(cplx(r, 0.0)) * r; }, 0.0, R, in);
  }
  return 2.0 * kPi * radial;
}

}  // namespace

TEST_CASE("equilibrium densities") {
  CHECK(close_rel(equilibrium_density(Potential::ginibre(), cplx(0.3, 0.1)), 1.0 / kPi, 1e-15));
  CHECK(equilibrium_density(Potential::ginibre(), cplx(1.2, 0.0)) == 0.0);
  CHECK(close_rel(equilibrium_density(Potential::mittag_leffler(2), std::polar(0.5, 0.7)), 1.0 / kPi, 1e-14));
  CHECK(close_rel(equilibrium_density(Potential::elliptic_ginibre(0.3), cplx(1.0, 0.1)), 1.0 / (kPi * 0.91), 1e-14));
  CHECK(equilibrium_density(Potential::elliptic_ginibre(0.3), cplx(0.0, 0.8)) == 0.0);
  CHECK(close_rel(equilibrium_density(Potential::spherical(), cplx(2.0, 0.0)), 1.0 / (kPi * 25.0), 1e-15));
}

TEST_CASE("supports") {
  CHECK(close_rel(Potential::mittag_leffler(2).outer_radius(), std::pow(2.0, -0.25), 1e-15));
  CHECK(close_rel(Potential::mittag_leffler(3).outer_radius(), std::pow(3.0, -1.0 / 6.0), 1e-15));
  CHECK(std::isinf(Potential::spherical().outer_radius()));
  auto eg = Potential::elliptic_ginibre(0.25);
  CHECK(eg.semi_x() == 1.25);
  CHECK(eg.semi_y() == 0.75);
  CHECK(eg.in_support(cplx(1.2, 0.0)));
  CHECK_FALSE(eg.in_support(cplx(0.0, 0.8)));
}

TEST_CASE("equilibrium measures are probability measures") {
  for (const auto& pot : {Potential::ginibre(), Potential::elliptic_ginibre(0.4), Potential::mittag_leffler(1.5),
                          Potential::mittag_leffler(3), Potential::spherical()}) {
    CHECK(std::abs(total_mass_2d(pot) - 1.0) < 1e-9);
  }
  for (const auto& pot : {Potential::ginibre(), Potential::mittag_leffler(2), Potential::spherical()}) {
    RadialMeasure m(pot);
    CHECK(std::abs(m.total_mass() - 1.0) < 1e-10);
  }
}

TEST_CASE("radial measure density is nonnegative and integrates to the cumulative mass") {
  auto pot = Potential::mittag_leffler(2.5);
  RadialMeasure m(pot);
  double R = pot.outer_radius();
  for (int i = 1; i < 20; ++i) {
    double r = R * i / 20.0;
    CHECK(m.density(r) >= 0.0);
    double q = quad1d([&](double x) { return m.density(x); }, 0.0, r);
    CHECK(std::abs(q - m.cumulative(r)) < 1e-12);
  }
}

TEST_CASE("tabulated radial potential with two rings") {
  // g = r^2 on [0, 0.5] u [0.7, r3], with the outer ring reaching total mass 1
  RadialCallbacks cb;
  cb.g = [](double r) { return r * r; };
  cb.g1 = [](double r) { return 2.0 * r; };
  cb.g2 = [](double) { return 2.0; };
  double r3 = std::sqrt(1.0 - 0.25 + 0.49);
  cb.rings = {0.0, 0.5, 0.7, r3};
  auto pot = Potential::radial_tabulated(cb);
  CHECK(pot.is_radial());
  CHECK(pot.ring_of(0.6) == -1);
  CHECK(pot.ring_of(0.8) == 1);
  CHECK(std::abs(pot.mu_cumulative(0.6) - 0.25) < 1e-12);
  CHECK(std::abs(RadialMeasure(pot).total_mass() - 1.0) < 1e-10);
  CHECK(pot.density(cplx(0.6, 0.0)) == 0.0);
}

TEST_CASE("mass of regions") {
  auto G = Potential::ginibre();
  CHECK(close_rel(mu_mass_of_region(G, HoleRegion::disk(0.0, 0.4)), 0.16, 1e-12));
  CHECK(close_rel(mu_mass_of_region(G, HoleRegion::disk(cplx(0.2, 0.1), 0.4)), 0.16, 1e-10));
  for (double b : {1.0, 2.0, 3.0}) {
    double a = 0.8 * std::pow(b, -1.0 / (2.0 * b));
    CHECK(close_rel(mu_mass_of_region(Potential::mittag_leffler(b), HoleRegion::disk(0.0, a)),
                    b * std::pow(a, 2.0 * b), 1e-10));
  }
  CHECK(close_rel(mu_mass_of_region(Potential::spherical(), HoleRegion::disk(0.0, 1.3)), 1.69 / 2.69, 1e-12));
  // Ellipse in elliptic Ginibre: area / (pi (1 - tau^2))
  auto E = Potential::elliptic_ginibre(0.2);
  CHECK(close_rel(mu_mass_of_region(E, HoleRegion::ellipse(0.3, 0.2, cplx(0.1, 0.1), 0.4)),
                  0.06 / 0.96, 1e-10));
  // Sector by 2D quadrature against the radial formula
  auto M2 = Potential::mittag_leffler(2);
  double direct = integrate_mu(M2, HoleRegion::sector(0.6, 3.0), [](cplx) { return 1.0; });
  CHECK(close_rel(direct, 2.0 * std::pow(0.6, 4) / 3.0, 1e-10));
}

TEST_CASE("validity flags") {
  auto E = Potential::elliptic_ginibre(0.2);
  Validity v = validate(E, HoleRegion::rectangle(-0.4, 0.5, -0.3, 0.2));
  CHECK(v.boundary_in_support);
  CHECK(v.hole_in_support);
  CHECK(v.exterior_ball);

  Validity s = validate(Potential::ginibre(), HoleRegion::sector(0.5, 1.5));
  CHECK_FALSE(s.exterior_ball);
  CHECK(s.hole_in_support);

  Validity m = validate(Potential::mittag_leffler(2), HoleRegion::disk(cplx(0.5, 0.0), 0.5));
  CHECK_FALSE(m.hole_in_support);

  CHECK(validate(Potential::ginibre(), HoleRegion::cardioid(0.2, 0.3)).exterior_ball);
  CHECK_FALSE(validate(Potential::ginibre(), HoleRegion::cardioid(0.2, 0.5)).exterior_ball);
  CHECK(validate(Potential::ginibre(), HoleRegion::disk_complement(0.0, 0.5)).hole_in_support);
}

TEST_CASE("chart perimeters") {
  auto perim = [](const HoleRegion& r) {
    double s = 0.0;
    for (const auto& ch : r.charts()) {
      QuadOptions o;
      o.rel_tol = 1e-13;
      for (double c : ch.corners)
        if (c > ch.t0 && c < ch.t1) o.breaks.push_back(c);
      s += quad1d([&](double t) { return ch.speed(t); }, ch.t0, ch.t1, o);
    }
    return s;
  };
  CHECK(close_rel(perim(HoleRegion::disk(cplx(0.1, 0.2), 0.3)), 2.0 * kPi * 0.3, 1e-10));
  CHECK(close_rel(perim(HoleRegion::rectangle(-0.1, 0.4, -0.3, 0.2)), 2.0, 1e-10));
  CHECK(close_rel(perim(HoleRegion::rectangle(-0.1, 0.4, -0.3, 0.2, 0.7)), 2.0, 1e-10));
  CHECK(close_rel(perim(HoleRegion::triangle(cplx(0.1, 0.0), 0.3, 0.4)), 3.0 * std::sqrt(3.0) * 0.4, 1e-10));
  CHECK(close_rel(perim(HoleRegion::square(0.6)), 2.4, 1e-10));
  CHECK(close_rel(perim(HoleRegion::sector(0.5, 3.0)), 1.0 + 2.0 * kPi * 0.5 / 3.0, 1e-10));
  CHECK(close_rel(HoleRegion::disk(0.0, 0.3).perimeter(), 2.0 * kPi * 0.3, 1e-12));
}

TEST_CASE("charts have positive speed away from corners") {
  for (const auto& r : {HoleRegion::disk(0.0, 0.3), HoleRegion::ellipse(0.3, 0.2), HoleRegion::square(0.5),
                        HoleRegion::triangle(0.0, 0.0, 0.4), HoleRegion::cardioid(0.2, 0.3), HoleRegion::sector(0.4, 4.0),
                        HoleRegion::annulus(0.2, 0.5)}) {
    for (const auto& ch : r.charts()) {
      for (int i = 1; i < 50; ++i) {
        double t = ch.t0 + (ch.t1 - ch.t0) * i / 50.0;
        CHECK(ch.speed(t) > 0.0);
      }
    }
  }
}

TEST_CASE("containment and nearest boundary points") {
  auto d = HoleRegion::disk(cplx(0.1, 0.0), 0.3);
  CHECK(d.contains(cplx(0.2, 0.1)));
  CHECK_FALSE(d.contains(cplx(0.5, 0.0)));
  CHECK(std::abs(d.nearest_boundary_point(cplx(0.2, 0.0)) - cplx(0.4, 0.0)) < 1e-14);
  auto sq = HoleRegion::square(1.0);
  CHECK(std::abs(sq.nearest_boundary_point(cplx(0.4, 0.1)) - cplx(0.5, 0.1)) < 1e-14);
  auto dc = HoleRegion::disk_complement(0.0, 0.5);
  CHECK(dc.contains(cplx(0.7, 0.0)));
  CHECK_FALSE(dc.contains(cplx(0.2, 0.0)));
  CHECK_FALSE(dc.bounded());
  auto e = HoleRegion::ellipse(0.4, 0.2);
  cplx p = e.nearest_boundary_point(cplx(0.1, 0.05));
  CHECK(std::abs(std::pow(p.real() / 0.4, 2) + std::pow(p.imag() / 0.2, 2) - 1.0) < 1e-10);
}

TEST_CASE("density integrates to the region mass, Monte Carlo within 3 sigma") {
  auto E = Potential::elliptic_ginibre(0.3);
  auto U = HoleRegion::triangle(cplx(0.2, 0.1), 0.4, 0.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-0.5, 0.7), uy(-0.4, 0.6);
  const int N = 200000;
  double s = 0.0, s2 = 0.0, box = 1.2 * 1.0;
  for (int i = 0; i < N; ++i) {
    cplx z(ux(rng), uy(rng));
    double f = U.contains(z) ? E.density(z) * box : 0.0;
    s += f;
    s2 += f * f;
  }
  double mean = s / N, sd = std::sqrt((s2 / N - mean * mean) / N);
  double exact = mu_mass_of_region(E, U);
  CHECK(std::abs(mean - exact) < 3.0 * sd);
  CHECK(close_rel(exact, U.area() / (kPi * 0.91), 1e-10));
}

TEST_CASE("bad parameters are rejected") {
  CHECK_THROWS_AS(Potential::elliptic_ginibre(1.0), DomainError);
  CHECK_THROWS_AS(Potential::mittag_leffler(-1.0), DomainError);
  CHECK_THROWS_AS(HoleRegion::disk(0.0, -0.1), DomainError);
  CHECK_THROWS_AS(HoleRegion::annulus(0.5, 0.3), DomainError);
  CHECK_THROWS_AS(HoleRegion::rectangle(0.5, 0.3, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(HoleRegion::cardioid(0.3, 0.7), DomainError);
}
