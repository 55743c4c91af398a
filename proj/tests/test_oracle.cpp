#include <cmath>

#include "chole/balayage.hpp"
#include "chole/errors.hpp"
#include "chole/oracle.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"
#include "doctest.h"

using namespace chole;

namespace {

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("one-dimensional quadrature") {
  CHECK(std::abs(quad1d([](double x) { return x; }, 0.0, 1.0) - 0.5) < 1e-15);
  // int_0^1 log(1/|x - r|) dx = r - r log r + (1 - r) - (1 - r) log(1 - r)
  const double r = 0.3;
  QuadOptions o;
  o.breaks = {r};
  double q = quad1d([=](double x) { return -std::log(std::abs(x - r)); }, 0.0, 1.0, o);
  double exact = r - r * std::log(r) + (1.0 - r) - (1.0 - r) * std::log(1.0 - r);
  CHECK(std::abs(q - exact) < 1e-12);
  CHECK(close_rel(quad1d_inf([](double x) { return std::exp(-x); }, 0.0), 1.0, 1e-12));
  CHECK_THROWS_AS(quad1d([](double x) { return 1.0 / x; }, 0.0, 1.0), ToleranceError);
}

TEST_CASE("two-dimensional quadrature") {
  auto top = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
  auto bot = [&](double x) { return -top(x); };
  double area = quad2d([](double, double) { return 1.0 / kPi; }, -1.0, 1.0, bot, top);
  CHECK(std::abs(area - 1.0) < 1e-10);
  double m = quad2d([](double x, double y) { return x * x * y * y; }, 0.0, 1.0, [](double) { return 0.0; },
                    [](double) { return 2.0; });
  CHECK(close_rel(m, 8.0 / 9.0, 1e-13));
}

TEST_CASE("moments of the Ginibre disk vanish beyond the mass") {
  auto G = Potential::ginibre();
  auto U = HoleRegion::disk(0.0, 0.5);
  auto rep = verify_moments(G, U, balayage(G, U), 8);
  CHECK(rep.n_max == 8);
  CHECK_FALSE(rep.inverse);
  CHECK_FALSE(rep.log_residual);
  REQUIRE(rep.residuals.size() == 9);
  CHECK(rep.max_abs_residual <= 1e-12);
}

TEST_CASE("moment residuals, bounded holes") {
  auto M3 = Potential::mittag_leffler(3);
  double R = std::pow(3.0, -1.0 / 6.0);
  auto U = HoleRegion::ellipse(0.4 * R, 0.85 * R);
  auto rep = verify_moments(M3, U, balayage(M3, U), 10);
  CHECK(rep.max_abs_residual <= 1e-7);
  // odd moments vanish on both sides; quadrature leaves roundoff only
  for (int n = 1; n <= 10; n += 2) CHECK(std::abs(rep.residuals[n]) <= 1e-15);

  auto E = Potential::elliptic_ginibre(0.2);
  for (const auto& V : {HoleRegion::triangle(cplx(0.5, 0.2), kPi / 10.0, 0.45), HoleRegion::rectangle(-0.4, 0.6, -0.1, 0.3),
                        HoleRegion::disk(cplx(0.2, 0.1), 0.3)}) {
    CHECK(verify_moments(E, V, balayage(E, V), 8).max_abs_residual <= 1e-7);
  }
  auto M1 = Potential::mittag_leffler(1);
  auto S = HoleRegion::sector(0.6, 5.0);
  CHECK(verify_moments(M1, S, balayage(M1, S), 8).max_abs_residual <= 1e-7);
}

TEST_CASE("moment residuals, unbounded holes") {
  auto E = Potential::elliptic_ginibre(0.2);
  auto U = HoleRegion::ellipse_complement(0.45, 0.75);
  auto rep = verify_moments(E, U, balayage(E, U), 6);
  CHECK(rep.inverse);
  REQUIRE(rep.log_residual);
  CHECK(rep.max_abs_residual <= 1e-7);
  CHECK(std::abs(*rep.log_residual) <= 1e-7);

  auto D = HoleRegion::disk_complement(cplx(0.1, 0.05), 0.4);
  auto rd = verify_moments(E, D, balayage(E, D), 6);
  CHECK(rd.max_abs_residual <= 1e-6);
  CHECK(std::abs(*rd.log_residual) <= 1e-6);

  // a hole containing the origin cannot use z0 = 0
  auto bad = HoleRegion::disk_complement(cplx(0.5, 0.0), 0.3);
  CHECK_THROWS(verify_moments(E, bad, balayage(E, bad), 4));
}

TEST_CASE("a wrong measure is caught") {
  auto G = Potential::ginibre();
  auto U = HoleRegion::square(0.8);
  auto nu = balayage(G, U);
  auto off = nu;
  for (auto& s : off.segments) {
    auto d = s.density;
    s.density = [d](double t) { return d(t) * (1.0 + 0.01 * t); };
  }
  CHECK(verify_moments(G, U, nu, 6).max_abs_residual <= 1e-7);
  CHECK(verify_moments(G, U, off, 6).max_abs_residual > 1e-5);
}

TEST_CASE("c_U for unbounded holes") {
  // centered disk complement of a radial potential: int_a^R log(r / a) dmu_rad
  auto M2 = Potential::mittag_leffler(2);
  double a = 0.5, R = std::pow(2.0, -0.25);
  QuadOptions o;
  o.rel_tol = 1e-13;
  double ref = quad1d([&](double r) { return std::log(r / a) * 8.0 * r * r * r; }, a, R, o);
  auto U = HoleRegion::disk_complement(0.0, a);
  CHECK(close_rel(c_U_mu_quadrature(M2, U), ref, 1e-10));
  CHECK(close_rel(c_U_mu_closed(M2, U), ref, 1e-10));

  for (double tau : {0.0, 0.2, 0.5}) {
    double ea = 0.45, ec = 0.4;
    auto V = HoleRegion::ellipse_complement(ea, ec);
    auto E = Potential::elliptic_ginibre(tau);
    double closed = ea * ea / (4.0 * (1.0 + tau)) + ec * ec / (4.0 * (1.0 - tau)) - 0.5 + std::log(2.0 / (ea + ec));
    CHECK(std::abs(c_U_mu_quadrature(E, V) - closed) <= 1e-8);
    CHECK(std::abs(c_U_mu_closed(E, V) - closed) <= 1e-14);
  }
  // boundary of U on the boundary of S: mu(Omega cap S) = 0
  double tau = 0.3;
  auto W = HoleRegion::ellipse_complement(1.0 + tau, 1.0 - tau);
  auto E = Potential::elliptic_ginibre(tau);
  CHECK(std::abs(c_U_mu_closed(E, W)) < 1e-14);
  CHECK(std::abs(c_U_mu_quadrature(E, W)) < 1e-12);
  // off-center disk complement: closed form against quadrature
  auto D = HoleRegion::disk_complement(cplx(0.1, 0.05), 0.4);
  CHECK(std::abs(c_U_mu_closed(E, D) - c_U_mu_quadrature(E, D)) <= 1e-8);
  CHECK_THROWS_AS(c_U_mu_closed(Potential::spherical(), HoleRegion::ellipse_complement(0.5, 0.4)), NotCoveredError);
  CHECK_THROWS(c_U_mu_quadrature(M2, HoleRegion::disk(0.0, 0.3)));
}

TEST_CASE("Fekete minimizer: determinism, monotone energy, constraint") {
  auto G = Potential::ginibre();
  auto H = HoleRegion::disk(0.0, 0.5);
  FeketeConfig cfg;
  cfg.n_points = 64;
  cfg.max_iter = 300;
  cfg.seed = 11;
  auto a = fekete_minimize(G, &H, cfg);
  auto b = fekete_minimize(G, &H, cfg);
  REQUIRE(a.points.size() == 64);
  CHECK(a.points == b.points);
  CHECK(a.final_energy == b.final_energy);
  for (std::size_t i = 1; i < a.energy_history.size(); ++i) CHECK(a.energy_history[i] <= a.energy_history[i - 1]);
  for (cplx z : a.points) CHECK(std::abs(z) >= 0.5 - 1e-12);
  CHECK(close_rel(discrete_energy(G, a.points), a.final_energy, 1e-13));

  cfg.seed = 12;
  auto c = fekete_minimize(G, &H, cfg);
  CHECK(c.points != a.points);
}

TEST_CASE("Fekete energy is rotation invariant for radial potentials") {
  auto M = Potential::mittag_leffler(2);
  FeketeConfig cfg;
  cfg.n_points = 48;
  cfg.max_iter = 200;
  auto pc = fekete_minimize(M, nullptr, cfg);
  auto rot = pc.points;
  for (auto& z : rot) z *= std::polar(1.0, 0.7);
  CHECK(std::abs(discrete_energy(M, rot) - discrete_energy(M, pc.points)) <= 1e-12);
}

TEST_CASE("Fekete with other regions and a custom projection") {
  auto E = Potential::elliptic_ginibre(0.3);
  auto sq = HoleRegion::square(0.6);
  FeketeConfig cfg;
  cfg.n_points = 40;
  cfg.max_iter = 150;
  auto pc = fekete_minimize(E, &sq, cfg);
  for (cplx z : pc.points) CHECK_FALSE(sq.contains(z));

  auto tri = HoleRegion::triangle(cplx(0.1, 0.0), 0.2, 0.4);
  pc = fekete_minimize(E, &tri, cfg);
  for (cplx z : pc.points) CHECK_FALSE(tri.contains(z));

  // keep every point in the closed upper half-plane
  cfg.projection = [](cplx z) { return cplx(z.real(), std::max(0.0, z.imag())); };
  pc = fekete_minimize(E, nullptr, cfg);
  for (cplx z : pc.points) CHECK(z.imag() >= 0.0);
}

TEST_CASE("Fekete reports non-convergence") {
  FeketeConfig cfg;
  cfg.n_points = 32;
  cfg.max_iter = 2;
  auto pc = fekete_minimize(Potential::ginibre(), nullptr, cfg);
  CHECK_FALSE(pc.converged);
  CHECK(pc.iterations == 2);
  cfg.n_points = 4;
  CHECK_THROWS(fekete_minimize(Potential::ginibre(), nullptr, cfg));
  cfg.n_points = 32;
  cfg.step = 0.0;
  CHECK_THROWS(fekete_minimize(Potential::ginibre(), nullptr, cfg));
}
