#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chole/model.hpp"

namespace chole {

struct DensitySegment {
  Chart chart;
  std::function<double(double)> density;  // w.r.t. the chart parameter
  double tail_bound = 0.0;
};

struct BalayageDensity {
  std::vector<DensitySegment> segments;
  double total_mass = 0.0;
  std::string note;

  // Boundary integral of f against nu, chart by chart.
  double integrate(const std::function<double(cplx)>& f, double rel_tol = 1e-11) const;
  cplx integrate_c(const std::function<cplx(cplx)>& f, double rel_tol = 1e-11) const;
  double mass_by_quadrature(double rel_tol = 1e-11) const;
};

// Density (c0 + 2 sum_l c_l cos(step * l * theta)) / pi per dtheta.
struct FourierProfile {
  std::vector<double> coeffs;
  int step = 1;
  double operator()(double theta) const;
  double mass() const { return 2.0 * coeffs.at(0); }
};

// Sine series sum_n s_n sin(n pi (t - t0) / L), n >= 1. The first n_exact
// coefficients are stored; beyond that s_n = sum_j (alpha_j + beta_j (-1)^n) / n^j
// and the remainder is summed in closed form with polylogarithms.
struct SineSeries {
  double t0 = 0.0, L = 1.0;
  std::vector<double> exact;  // exact[n-1] = s_n, n = 1..n_exact
  std::vector<double> alpha, beta;
  std::function<double(int)> coefficient_fn;  // s_n for any n

  double coefficient(int n) const;
  double operator()(double t) const;
};

// ---- rotation-invariant potentials

BalayageDensity bal_radial_disk(const Potential& pot, double a);

struct AnnulusSplit {
  double kappa;   // mu of the annulus
  double lambda;  // share swept to the inner circle
};
AnnulusSplit annulus_split(const Potential& pot, double rho1, double rho2);
BalayageDensity bal_radial_annulus(const Potential& pot, double rho1, double rho2);
BalayageDensity bal_radial_disk_complement(const Potential& pot, double a);

// ---- circular sector {0 < r < a, 0 < theta < 2 pi / p}

enum class SectorPart { Edge, Arc };

// Fast path where available (Mittag-Leffler, spherical arc), else the
// arctanh-kernel quadrature. Edge: dnu/dr. Arc: dnu/dtheta.
double bal_sector(const Potential& pot, double a, double p, SectorPart part, double t);
double bal_sector_generic(const Potential& pot, double a, double p, SectorPart part, double t);
double bal_sector_ml_edge(double b, double a, double p, double r);
double bal_sector_ml_arc(double b, double a, double p, double theta);

class SphericalSectorArc {
 public:
  SphericalSectorArc(double a, double p, int n_terms = 2000);
  double operator()(double theta) const;
  double tail_bound() const { return tail_; }
  // int_0^a (x/a)^s dmu_rad(x) via the incomplete beta function.
  static double moment(double a, double s);

 private:
  double a_, p_, A1_, A2_, tail_;
  std::vector<double> rem_;  // remainders after two Kummer terms
};

BalayageDensity bal_sector_density(const Potential& pot, double a, double p);

// ---- Mittag-Leffler, integer b

// Disk |z - x0| < a, z = x0 + a e^{i theta}.
FourierProfile bal_ml_disk(int b, double x0, double a);
// Ellipse z = a cos theta + i c sin theta.
FourierProfile bal_ml_ellipse(int b, double a, double c);

enum class RectSide { Right = 0, Top = 1, Left = 2, Bottom = 3 };

// Boundary density of the rectangle (a1,a2) x (c1,c2) on one side as a sine
// series in the side coordinate. Elliptic Ginibre or Mittag-Leffler integer b.
SineSeries bal_rectangle(const Potential& pot, double a1, double a2, double c1, double c2,
                         RectSide side);
// Coefficients s_1..s_{m_max} of the same series.
std::vector<double> bal_rectangle_coeffs(const Potential& pot, double a1, double a2, double c1,
                                         double c2, RectSide side, int m_max);
// Centered square of side c, right side, t = y in (-c/2, c/2).
SineSeries bal_square_series(int b, double c);

// ---- elliptic Ginibre

BalayageDensity bal_triangle_uniform(double tau, cplx zeta0, double theta0, double a);
struct ComplementEllipseCoeffs {
  double c0, c1;
};
ComplementEllipseCoeffs bal_eg_complement_ellipse(double tau, double a, double c);
// Density per dtheta at z = z0 + a e^{i theta}.
std::function<double(double)> bal_eg_complement_disk(double tau, double x0, double y0, double a);

// ---- Green-function oracles

// Modulus with K'(kappa)/K(kappa) = ratio, by bisection.
double modulus_for_ratio(double ratio);
double square_modulus();
// Ginibre square of side c: density per dy on the right side.
double bal_square_elliptic(double c, double y);
// int_U d g_U(w, z)/dn_z dmu(w) per arclength; Disk, Sector (p >= 2), Rectangle.
double bal_green_generic(const Potential& pot, const HoleRegion& region, cplx z);
// Coefficients (2/B) int_U sinh(k(xi-a1))/sinh(kA) sin(k(eta-c1)) dmu, k = m pi/B:
// the right-side density from the rectangle's double sine Green series.
std::vector<double> rectangle_green_coefficients(const Potential& pot, double a1, double a2,
                                                 double c1, double c2, int m_max);

// ---- dispatcher

BalayageDensity balayage(const Potential& pot, const HoleRegion& region);

}  // namespace chole
