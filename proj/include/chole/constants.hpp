#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chole/model.hpp"

namespace chole {

enum class CMethod { ClosedForm, GenericQuadrature, ScalingLaw };

std::string to_string(CMethod m);

struct Breakdown {
  double integral_Q_dnu = 0.0;
  double c_U_mu = 0.0;
  double integral_Q_dmu = 0.0;
};

struct HoleConstant {
  double C = 0.0;
  double beta = 2.0;
  // Present only when the three terms were computed on their own.
  std::optional<Breakdown> breakdown;
  CMethod method = CMethod::ClosedForm;
  std::string note;
};

// (beta/4)(int Q dnu + 2 c_U^mu - int_U Q dmu)
double combine(double beta, const Breakdown& b);

// ---- generic formula from the balayage density

HoleConstant c_generic(const Potential& pot, const HoleRegion& region, double beta);

// ---- rotation-invariant potentials

HoleConstant c_radial_disk(const Potential& pot, double a, double beta);
HoleConstant c_radial_annulus(const Potential& pot, double rho1, double rho2, double beta);
HoleConstant c_radial_disk_complement(const Potential& pot, double a, double beta);

// ---- circular sector {0 < r < a, 0 < theta < 2 pi / p}

// Digamma form for Q = |z|^{2b}.
double c_sector_ml(double b, double a, double p, double beta);

// Mittag-Leffler digamma form, spherical series (a < 1), else quadrature.
HoleConstant c_sector(const Potential& pot, double a, double p, double beta);
// Edge quadrature plus arc series; fills the breakdown.
HoleConstant c_sector_quadrature(const Potential& pot, double a, double p, double beta);

// g(r) = sum_k coeff r^k on [0, a].
struct PowerTerm {
  double k;
  double coeff;
};
// Series over the power terms of g. Degenerate exponents k in p/2 + p N are
// handled through the exact limit of the m = (k - p/2)/p term.
HoleConstant c_sector_series(const Potential& pot, double a, double p,
                             const std::vector<PowerTerm>& terms, double beta);
// log(1 + r^2) = sum (-1)^{k+1} r^{2k} / k, truncated for a < 1.
std::vector<PowerTerm> spherical_power_terms(double a);

// int_0^a (r/a)^s dmu_rad(r).
double sector_moment(const Potential& pot, double a, double s);

// ---- elliptic Ginibre

// C(tau, zeta0, rho, theta0) = rho^4 / (1 - tau^2)^2 C(0, 0, 1, 0).
// If image is given, it is checked against the support of pot_tau.
HoleConstant c_eg_scaled(double tau, cplx zeta0, double rho, double theta0, double base_C_at_tau0,
                         double beta, const HoleRegion* image = nullptr);

enum class EGShape { Ellipse, Annulus, Cardioid, Sector };

struct EGNamedParams {
  double a = 0.0, c = 0.0;  // ellipse axes; cardioid scale and shape; sector radius (a)
  double rho1 = 0.0, rho2 = 0.0;
  double p = 2.0;
  cplx zeta0 = 0.0;
  double theta0 = 0.0;
};

HoleConstant c_eg_named(EGShape shape, const EGNamedParams& q, double tau, double beta);

HoleConstant c_triangle(double tau, cplx zeta0, double theta0, double a, double beta);

HoleConstant c_eg_complement_ellipse(double tau, double a, double c, double beta);
HoleConstant c_eg_complement_disk(double tau, double x0, double y0, double a, double beta);
// int_{-pi}^{pi} R(theta)^2 log R(theta) dtheta, periodic trapezoid.
double eg_disk_complement_R2logR(double tau, double x0, double y0);

// ---- rectangles

// Elliptic Ginibre (tanh series) or Mittag-Leffler with integer b (four sides).
HoleConstant c_rectangle(const Potential& pot, double a1, double a2, double c1, double c2,
                         double beta);
// Sum over odd n of (alpha^-2 tanh(alpha n pi/2) + alpha^2 tanh(n pi/(2 alpha))) / n^5,
// direct and through T_{2,alpha}.
double eg_rectangle_sum_direct(double alpha);
double eg_rectangle_sum_identity(double alpha);
// Centered Mittag-Leffler square of side c through the T_v series.
HoleConstant c_ml_square(int b, double c, double beta);

// ---- Mittag-Leffler, integer b

HoleConstant c_ml_disk(int b, double x0, double a, double beta);
HoleConstant c_ml_ellipse(int b, double a, double c, double beta);

// ---- dispatcher

HoleConstant hole_constant(const Potential& pot, const HoleRegion& region, double beta);

}  // namespace chole
