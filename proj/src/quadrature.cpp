#include "chole/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "chole/errors.hpp"

namespace chole {

namespace {

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init;

struct Workspace {
  explicit Workspace(int n) : w(gsl_integration_workspace_alloc(n)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  gsl_integration_workspace* w;
};

double trampoline(double x, void* p) {
  return (*static_cast<const std::function<double(double)>*>(p))(x);
}

void check(double value, double err, const QuadOptions& opt, double a,
           double b) {
  if (!std::isfinite(value)) {
    throw ToleranceError("quadrature produced a non-finite value", value, err);
  }
  double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(value));
  if (err > 10.0 * target) {
    std::ostringstream os;
    os.precision(3);
    os << "quadrature on [" << a << ", " << b << "] missed tolerance: error "
       << err << " > " << target;
    throw ToleranceError(os.str(), value, err);
  }
}

}  // namespace

QuadResult quad1d_result(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& opt) {
  if (a == b) return {0.0, 0.0};
  if (a > b) {
    QuadResult r = quad1d_result(f, b, a, opt);
    return {-r.value, r.error};
  }
  // intervals at the rounding level of their endpoints: midpoint rule
  if (b - a <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)})) {
    return {(b - a) * f(0.5 * (a + b)), 0.0};
  }
  gsl_function F;
  F.function = &trampoline;
  F.params = const_cast<void*>(static_cast<const void*>(&f));
  Workspace ws(opt.limit);
  double value = 0.0, err = 0.0;
  std::vector<double> pts;
  for (double x : opt.breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  if (pts.empty()) {
    gsl_integration_qags(&F, a, b, opt.abs_tol, opt.rel_tol, opt.limit, ws.w,
                         &value, &err);
  } else {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.insert(pts.begin(), a);
    pts.push_back(b);
    gsl_integration_qagp(&F, pts.data(), pts.size(), opt.abs_tol, opt.rel_tol,
                         opt.limit, ws.w, &value, &err);
  }
  check(value, err, opt, a, b);
  return {value, err};
}

double quad1d(const std::function<double(double)>& f, double a, double b,
              const QuadOptions& opt) {
  return quad1d_result(f, a, b, opt).value;
}

std::complex<double> quad1d_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadOptions& opt) {
  double re = quad1d([&](double t) { return f(t).real(); }, a, b, opt);
  double im = quad1d([&](double t) { return f(t).imag(); }, a, b, opt);
  return {re, im};
}

double quad1d_inf(const std::function<double(double)>& f, double a,
                  const QuadOptions& opt) {
  gsl_function F;
  F.function = &trampoline;
  F.params = const_cast<void*>(static_cast<const void*>(&f));
  Workspace ws(opt.limit);
  double value = 0.0, err = 0.0;
  gsl_integration_qagiu(&F, a, opt.abs_tol, opt.rel_tol, opt.limit, ws.w,
                        &value, &err);
  check(value, err, opt, a, INFINITY);
  return value;
}

double quad2d(const std::function<double(double, double)>& f, double a0,
              double a1, const std::function<double(double)>& b0,
              const std::function<double(double)>& b1,
              const QuadOptions& outer, const QuadOptions& inner) {
  return quad1d(
      [&](double x) {
        double lo = b0(x), hi = b1(x);
        if (!(hi > lo)) return 0.0;
        return quad1d([&](double y) { return f(x, y); }, lo, hi, inner);
      },
      a0, a1, outer);
}

double periodic_trapezoid(const std::function<double(double)>& f, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f(2.0 * M_PI * k / n);
  return s * 2.0 * M_PI / n;
}

}  // namespace chole
