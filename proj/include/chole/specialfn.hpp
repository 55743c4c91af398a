#pragma once

#include <complex>

namespace chole {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// x > 0.
double digamma(double x);
// Any real x except the poles 0, -1, -2, ...
double digamma_real(double x);
double trigamma(double x);

// Bernoulli number B_n, exact table for n <= 30.
double bernoulli(int n);

// zeta(2m) from the Bernoulli table; m in [1, 15].
double zeta_even(int m);

// Riemann zeta at real s > 1.
double zeta(double s);

// Hurwitz zeta sum_{k>=0} (k + a)^{-s}, s > 1, a > 0.
double hurwitz_zeta(double s, double a);

// int_0^z x^(alpha-1) (1-x)^(beta-1) dx by adaptive quadrature.
// beta may be negative.
double incomplete_beta(double z, double alpha, double beta);

double elliptic_K(double kappa);
double elliptic_Kprime(double kappa);

struct Nome {
  double q;
  static Nome from_modulus(double kappa);
};

struct Theta {
  cplx t1, t2, t3, t4;
};

// Jacobi theta functions at complex zeta with nome q.
Theta jacobi_theta(cplx zeta, double q);

struct JacobiSnCnDn {
  cplx sn, cn, dn;
};

JacobiSnCnDn jacobi_sncndn(cplx z, double kappa);
cplx jacobi_sn(cplx z, double kappa);

// Principal branch; throws BranchCutError on (-inf,-1] and [1,inf).
cplx arctanh_cplx(cplx z);

// Polylogarithm Li_j(e^{ix}) for integer j >= 1.
// Im gives sum sin(mx)/m^j, Re gives sum cos(mx)/m^j.
cplx polylog_unit(int j, double x);
double clausen_sin(int j, double x);
double clausen_cos(int j, double x);

// Lerch transcendent sum_{m>=0} z^m / (m + v), |z| <= 1, z != 1.
cplx lerch_phi1(cplx z, double v);

}  // namespace chole
