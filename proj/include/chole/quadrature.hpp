#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace chole {

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  // Interior points where the integrand is singular or kinked.
  std::vector<double> breaks;
  int limit = 4000;
};

struct QuadResult {
  double value;
  double error;
};

// Adaptive Gauss-Kronrod with extrapolation. Throws ToleranceError when
// the error estimate exceeds the requested tolerance.
QuadResult quad1d_result(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& opt = {});
double quad1d(const std::function<double(double)>& f, double a, double b,
              const QuadOptions& opt = {});
std::complex<double> quad1d_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadOptions& opt = {});

// Integral over [a, +inf).
double quad1d_inf(const std::function<double(double)>& f, double a,
                  const QuadOptions& opt = {});

// Integral over [a0,a1] x [b0(x), b1(x)], inner variable y.
double quad2d(const std::function<double(double, double)>& f, double a0,
              double a1, const std::function<double(double)>& b0,
              const std::function<double(double)>& b1,
              const QuadOptions& outer = {}, const QuadOptions& inner = {});

// Periodic trapezoid rule on [0, 2pi) with n nodes.
double periodic_trapezoid(const std::function<double(double)>& f, int n);

}  // namespace chole
