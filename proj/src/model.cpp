#include "chole/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chole/errors.hpp"
#include "chole/quadrature.hpp"
#include "chole/specialfn.hpp"

namespace chole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Potential

Potential Potential::ginibre() {
  Potential p;
  p.kind_ = PotentialKind::Ginibre;
  p.rings_ = {0.0, 1.0};
  return p;
}

Potential Potential::elliptic_ginibre(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("elliptic Ginibre: tau must lie in [0,1)");
  Potential p;
  p.kind_ = PotentialKind::EllipticGinibre;
  p.tau_ = tau;
  p.rings_ = {0.0, 1.0};
  return p;
}

Potential Potential::mittag_leffler(double b) {
  if (!(b > 0.0)) throw DomainError("Mittag-Leffler: b must be positive");
  Potential p;
  p.kind_ = PotentialKind::MittagLeffler;
  p.b_ = b;
  p.rings_ = {0.0, std::pow(b, -1.0 / (2.0 * b))};
  return p;
}

Potential Potential::spherical() {
  Potential p;
  p.kind_ = PotentialKind::Spherical;
  p.rings_ = {0.0, kInf};
  return p;
}

Potential Potential::radial_tabulated(RadialCallbacks cb) {
  if (!cb.g || !cb.g1 || !cb.g2) throw DomainError("radial potential: g, g', g'' are required");
  if (cb.rings.size() < 2 || cb.rings.size() % 2 != 0) {
    throw DomainError("radial potential: rings must come in [start, end] pairs");
  }
  if (cb.rings[0] < 0.0) throw DomainError("radial potential: negative ring radius");
  for (std::size_t i = 1; i < cb.rings.size(); ++i) {
    if (!(cb.rings[i] > cb.rings[i - 1])) {
      throw DomainError("radial potential: rings must be strictly increasing");
    }
  }
  Potential p;
  p.kind_ = PotentialKind::RadialTabulated;
  p.rings_ = cb.rings;
  p.cb_ = std::make_shared<const RadialCallbacks>(std::move(cb));
  return p;
}

bool Potential::integer_b() const {
  return kind_ == PotentialKind::MittagLeffler && b_ == std::floor(b_);
}

int Potential::int_b() const {
  if (is_elliptic()) return 1;
  if (!integer_b()) throw DomainError("potential does not have an integer exponent b");
  return static_cast<int>(b_);
}

std::string Potential::name() const {
  switch (kind_) {
    case PotentialKind::Ginibre: return "ginibre";
    case PotentialKind::EllipticGinibre: return "eg:tau=" + fmt_num(tau_);
    case PotentialKind::MittagLeffler: return "ml:b=" + fmt_num(b_);
    case PotentialKind::Spherical: return "spherical";
    case PotentialKind::RadialTabulated: return "radial";
  }
  return "?";
}

bool Potential::is_radial() const {
  return kind_ != PotentialKind::EllipticGinibre || tau_ == 0.0;
}

bool Potential::is_elliptic() const {
  return kind_ == PotentialKind::Ginibre || kind_ == PotentialKind::EllipticGinibre;
}

double Potential::Q(cplx z) const {
  double r2 = std::norm(z);
  switch (kind_) {
    case PotentialKind::Ginibre: return r2;
    case PotentialKind::EllipticGinibre:
      return (r2 - tau_ * (z.real() * z.real() - z.imag() * z.imag())) / (1.0 - tau_ * tau_);
    case PotentialKind::MittagLeffler: return std::pow(r2, b_);
    case PotentialKind::Spherical: return std::log1p(r2);
    case PotentialKind::RadialTabulated: return cb_->g(std::sqrt(r2));
  }
  return 0.0;
}

cplx Potential::grad_Q(cplx z) const {
  switch (kind_) {
    case PotentialKind::Ginibre: return 2.0 * z;
    case PotentialKind::EllipticGinibre:
      return {2.0 * z.real() / (1.0 + tau_), 2.0 * z.imag() / (1.0 - tau_)};
    case PotentialKind::MittagLeffler: {
      double r2 = std::norm(z);
      if (r2 == 0.0) return 0.0;
      return 2.0 * b_ * std::pow(r2, b_ - 1.0) * z;
    }
    case PotentialKind::Spherical: return 2.0 * z / (1.0 + std::norm(z));
    case PotentialKind::RadialTabulated: {
      double r = std::abs(z);
      if (r == 0.0) return 0.0;
      return cb_->g1(r) * z / r;
    }
  }
  return 0.0;
}

bool Potential::in_support(cplx z, double margin) const {
  if (kind_ == PotentialKind::Spherical) return true;
  if (is_elliptic()) {
    double x = z.real() / semi_x(), y = z.imag() / semi_y();
    return x * x + y * y <= 1.0 + margin;
  }
  return ring_of(std::abs(z), margin) >= 0;
}

double Potential::density(cplx z) const {
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::EllipticGinibre:
      return in_support(z) ? 1.0 / (kPi * (1.0 - tau_ * tau_)) : 0.0;
    case PotentialKind::MittagLeffler: {
      double r = std::abs(z);
      if (r > rings_[1]) return 0.0;
      return b_ * b_ / kPi * std::pow(r, 2.0 * b_ - 2.0);
    }
    case PotentialKind::Spherical: {
      double d = 1.0 + std::norm(z);
      return 1.0 / (kPi * d * d);
    }
    case PotentialKind::RadialTabulated: {
      double r = std::abs(z);
      if (r == 0.0) return 0.5 * (cb_->g2(0.0) + cb_->g2(0.0)) / (2.0 * kPi);
      return mu_rad(r) / (2.0 * kPi * r);
    }
  }
  return 0.0;
}

double Potential::g(double r) const {
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::EllipticGinibre: return r * r;
    case PotentialKind::MittagLeffler: return std::pow(r, 2.0 * b_);
    case PotentialKind::Spherical: return std::log1p(r * r);
    case PotentialKind::RadialTabulated: return cb_->g(r);
  }
  return 0.0;
}

double Potential::g1(double r) const {
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::EllipticGinibre: return 2.0 * r;
    case PotentialKind::MittagLeffler: return 2.0 * b_ * std::pow(r, 2.0 * b_ - 1.0);
    case PotentialKind::Spherical: return 2.0 * r / (1.0 + r * r);
    case PotentialKind::RadialTabulated: return cb_->g1(r);
  }
  return 0.0;
}

double Potential::g2(double r) const {
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::EllipticGinibre: return 2.0;
    case PotentialKind::MittagLeffler:
      return 2.0 * b_ * (2.0 * b_ - 1.0) * std::pow(r, 2.0 * b_ - 2.0);
    case PotentialKind::Spherical: {
      double d = 1.0 + r * r;
      return 2.0 * (1.0 - r * r) / (d * d);
    }
    case PotentialKind::RadialTabulated: return cb_->g2(r);
  }
  return 0.0;
}

const std::vector<double>& Potential::rings() const {
  if (!is_radial()) throw DomainError("potential " + name() + " is not radial");
  return rings_;
}

int Potential::ring_of(double r, double tol) const {
  for (std::size_t j = 0; j + 1 < rings_.size(); j += 2) {
    if (r >= rings_[j] - tol && r <= rings_[j + 1] + tol) return static_cast<int>(j / 2);
  }
  return -1;
}

double Potential::outer_radius() const { return rings_.back(); }

double Potential::mu_rad(double r) const {
  if (!is_radial()) throw DomainError("mu_rad requires a radial potential");
  if (ring_of(r, 0.0) < 0) return 0.0;
  switch (kind_) {
    case PotentialKind::Ginibre:
    case PotentialKind::EllipticGinibre: return 2.0 * r;
    case PotentialKind::MittagLeffler: return 2.0 * b_ * b_ * std::pow(r, 2.0 * b_ - 1.0);
    case PotentialKind::Spherical: {
      double d = 1.0 + r * r;
      return 2.0 * r / (d * d);
    }
    case PotentialKind::RadialTabulated: return 0.5 * r * (cb_->g2(r) + cb_->g1(r) / r);
  }
  return 0.0;
}

double Potential::mu_cumulative(double r) const {
  if (!is_radial()) throw DomainError("mu_cumulative requires a radial potential");
  // dmu_rad = d(r g'(r))/2 on each ring, with r g'(r) read as 0 at r = 0.
  auto rg = [&](double x) {
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return kind_ == PotentialKind::Spherical ? 2.0 : kInf;
    return x * g1(x);
  };
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < rings_.size(); j += 2) {
    double lo = rings_[j], hi = rings_[j + 1];
    if (r <= lo) break;
    double top = std::min(r, hi);
    m += 0.5 * (rg(top) - rg(lo));
  }
  return m;
}

RadialMeasure::RadialMeasure(Potential pot) : pot_(std::move(pot)) {
  if (!pot_.is_radial()) throw DomainError("RadialMeasure requires a radial potential");
}

double RadialMeasure::total_mass() const { return pot_.mu_cumulative(kInf); }

double equilibrium_density(const Potential& pot, cplx z) { return pot.density(z); }

// ---------------------------------------------------------------- HoleRegion

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Disk: return "disk";
    case RegionKind::Annulus: return "annulus";
    case RegionKind::DiskComplement: return "disk_complement";
    case RegionKind::Sector: return "sector";
    case RegionKind::Ellipse: return "ellipse";
    case RegionKind::EllipseComplement: return "ellipse_complement";
    case RegionKind::Rectangle: return "rectangle";
    case RegionKind::Square: return "square";
    case RegionKind::EquilateralTriangle: return "triangle";
    case RegionKind::Cardioid: return "cardioid";
  }
  return "?";
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::PerDTheta: return "per_dtheta";
    case MeasureKind::PerArclength: return "per_arclength";
    case MeasureKind::PerDy: return "per_dy";
    case MeasureKind::PerDx: return "per_dx";
    case MeasureKind::PerDr: return "per_dr";
  }
  return "?";
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

HoleRegion HoleRegion::disk(cplx center, double a) {
  require(a > 0.0, "disk: radius must be positive");
  HoleRegion r;
  r.kind_ = RegionKind::Disk;
  r.p_.center = center;
  r.p_.a = a;
  return r;
}

HoleRegion HoleRegion::annulus(double rho1, double rho2) {
  require(rho1 > 0.0 && rho2 > rho1, "annulus: need 0 < rho1 < rho2");
  HoleRegion r;
  r.kind_ = RegionKind::Annulus;
  r.p_.rho1 = rho1;
  r.p_.rho2 = rho2;
  return r;
}

HoleRegion HoleRegion::disk_complement(cplx center, double a) {
  require(a > 0.0, "disk complement: radius must be positive");
  HoleRegion r;
  r.kind_ = RegionKind::DiskComplement;
  r.p_.center = center;
  r.p_.a = a;
  return r;
}

HoleRegion HoleRegion::sector(double a, double p) {
  require(a > 0.0, "sector: radius must be positive");
  require(p >= 1.0, "sector: p must be >= 1");
  HoleRegion r;
  r.kind_ = RegionKind::Sector;
  r.p_.a = a;
  r.p_.p = p;
  return r;
}

HoleRegion HoleRegion::ellipse(double a, double c, cplx center, double theta0) {
  require(a > 0.0 && c > 0.0, "ellipse: semi-axes must be positive");
  HoleRegion r;
  r.kind_ = RegionKind::Ellipse;
  r.p_.a = a;
  r.p_.c = c;
  r.p_.center = center;
  r.p_.theta0 = theta0;
  return r;
}

HoleRegion HoleRegion::ellipse_complement(double a, double c) {
  require(a > 0.0 && c > 0.0, "ellipse complement: semi-axes must be positive");
  HoleRegion r;
  r.kind_ = RegionKind::EllipseComplement;
  r.p_.a = a;
  r.p_.c = c;
  return r;
}

HoleRegion HoleRegion::rectangle(double a1, double a2, double c1, double c2, double theta0) {
  require(a2 > a1 && c2 > c1, "rectangle: need a1 < a2 and c1 < c2");
  HoleRegion r;
  r.kind_ = RegionKind::Rectangle;
  r.p_.a1 = a1;
  r.p_.a2 = a2;
  r.p_.c1 = c1;
  r.p_.c2 = c2;
  r.p_.theta0 = theta0;
  return r;
}

HoleRegion HoleRegion::square(double c) {
  require(c > 0.0, "square: side must be positive");
  HoleRegion r = rectangle(-c / 2, c / 2, -c / 2, c / 2);
  r.kind_ = RegionKind::Square;
  r.p_.c = c;
  return r;
}

HoleRegion HoleRegion::triangle(cplx center, double theta0, double a) {
  require(a > 0.0, "triangle: size must be positive");
  HoleRegion r;
  r.kind_ = RegionKind::EquilateralTriangle;
  r.p_.center = center;
  r.p_.theta0 = theta0;
  r.p_.a = a;
  return r;
}

HoleRegion HoleRegion::cardioid(double a, double c, cplx center, double theta0) {
  require(a > 0.0, "cardioid: scale must be positive");
  require(c >= 0.0 && c <= 0.5, "cardioid: shape parameter must lie in [0, 1/2]");
  HoleRegion r;
  r.kind_ = RegionKind::Cardioid;
  r.p_.a = a;
  r.p_.c = c;
  r.p_.center = center;
  r.p_.theta0 = theta0;
  return r;
}

bool HoleRegion::bounded() const {
  return kind_ != RegionKind::DiskComplement && kind_ != RegionKind::EllipseComplement;
}

std::string HoleRegion::name() const { return to_string(kind_); }

namespace {

Chart circle_chart(int id, const std::string& name, cplx center, double a) {
  Chart ch;
  ch.id = id;
  ch.name = name;
  ch.t0 = 0.0;
  ch.t1 = 2.0 * kPi;
  ch.kind = MeasureKind::PerDTheta;
  ch.point = [=](double t) { return center + a * std::polar(1.0, t); };
  ch.tangent = [=](double t) { return cplx(0.0, a) * std::polar(1.0, t); };
  return ch;
}

Chart segment_chart(int id, const std::string& name, double t0, double t1, MeasureKind kind,
                    std::function<cplx(double)> pt, cplx dir) {
  Chart ch;
  ch.id = id;
  ch.name = name;
  ch.t0 = t0;
  ch.t1 = t1;
  ch.kind = kind;
  ch.point = std::move(pt);
  ch.tangent = [=](double) { return dir; };
  ch.corners = {t0, t1};
  return ch;
}

}  // namespace

std::vector<Chart> HoleRegion::charts() const {
  std::vector<Chart> out;
  const RegionParams& q = p_;
  switch (kind_) {
    case RegionKind::Disk:
    case RegionKind::DiskComplement:
      out.push_back(circle_chart(0, "circle", q.center, q.a));
      break;
    case RegionKind::Annulus:
      out.push_back(circle_chart(0, "inner", 0.0, q.rho1));
      out.push_back(circle_chart(1, "outer", 0.0, q.rho2));
      break;
    case RegionKind::Sector: {
      double a = q.a, phi = 2.0 * kPi / q.p;
      cplx e = std::polar(1.0, phi);
      out.push_back(segment_chart(0, "edge0", 0.0, a, MeasureKind::PerDr,
                                  [](double r) { return cplx(r, 0.0); }, 1.0));
      Chart arc;
      arc.id = 1;
      arc.name = "arc";
      arc.t0 = 0.0;
      arc.t1 = phi;
      arc.kind = MeasureKind::PerDTheta;
      arc.point = [=](double t) { return a * std::polar(1.0, t); };
      arc.tangent = [=](double t) { return cplx(0.0, a) * std::polar(1.0, t); };
      arc.corners = {0.0, phi};
      out.push_back(arc);
      out.push_back(segment_chart(2, "edge1", 0.0, a, MeasureKind::PerDr,
                                  [=](double r) { return r * e; }, e));
      break;
    }
    case RegionKind::Ellipse:
    case RegionKind::EllipseComplement: {
      cplx c0 = q.center, rot = std::polar(1.0, q.theta0);
      double a = q.a, c = q.c;
      Chart ch;
      ch.id = 0;
      ch.name = "ellipse";
      ch.t0 = 0.0;
      ch.t1 = 2.0 * kPi;
      ch.kind = MeasureKind::PerDTheta;
      ch.point = [=](double t) { return c0 + rot * cplx(a * std::cos(t), c * std::sin(t)); };
      ch.tangent = [=](double t) { return rot * cplx(-a * std::sin(t), c * std::cos(t)); };
      out.push_back(ch);
      break;
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      cplx rot = std::polar(1.0, q.theta0);
      double a1 = q.a1, a2 = q.a2, c1 = q.c1, c2 = q.c2;
      out.push_back(segment_chart(0, "right", c1, c2, MeasureKind::PerDy,
                                  [=](double y) { return rot * cplx(a2, y); }, rot * cplx(0, 1)));
      out.push_back(segment_chart(1, "top", a1, a2, MeasureKind::PerDx,
                                  [=](double x) { return rot * cplx(x, c2); }, rot));
      out.push_back(segment_chart(2, "left", c1, c2, MeasureKind::PerDy,
                                  [=](double y) { return rot * cplx(a1, y); }, rot * cplx(0, 1)));
      out.push_back(segment_chart(3, "bottom", a1, a2, MeasureKind::PerDx,
                                  [=](double x) { return rot * cplx(x, c1); }, rot));
      break;
    }
    case RegionKind::EquilateralTriangle: {
      double h = std::sqrt(3.0) * q.a / 2.0;
      for (int j = 0; j < 3; ++j) {
        cplx rot = std::polar(1.0, q.theta0 + 2.0 * kPi * j / 3.0);
        cplx c0 = q.center;
        double a = q.a;
        out.push_back(segment_chart(j, "edge" + std::to_string(j), -h, h, MeasureKind::PerDy,
                                    [=](double y) { return c0 + rot * cplx(a / 2.0, y); },
                                    rot * cplx(0, 1)));
      }
      break;
    }
    case RegionKind::Cardioid: {
      cplx c0 = q.center, rot = std::polar(1.0, q.theta0);
      double a = q.a, c = q.c;
      Chart ch;
      ch.id = 0;
      ch.name = "cardioid";
      ch.t0 = 0.0;
      ch.t1 = 2.0 * kPi;
      ch.kind = MeasureKind::PerDTheta;
      ch.point = [=](double t) {
        return c0 + rot * (a * (1.0 + 2.0 * c * std::cos(t)) * std::polar(1.0, t));
      };
      ch.tangent = [=](double t) {
        double r = a * (1.0 + 2.0 * c * std::cos(t));
        double dr = -2.0 * a * c * std::sin(t);
        return rot * cplx(dr, r) * std::polar(1.0, t);
      };
      out.push_back(ch);
      break;
    }
  }
  return out;
}

bool HoleRegion::contains(cplx z) const {
  const RegionParams& q = p_;
  switch (kind_) {
    case RegionKind::Disk: return std::abs(z - q.center) < q.a;
    case RegionKind::DiskComplement: return std::abs(z - q.center) > q.a;
    case RegionKind::Annulus: {
      double r = std::abs(z);
      return r > q.rho1 && r < q.rho2;
    }
    case RegionKind::Sector: {
      double r = std::abs(z);
      if (!(r > 0.0 && r < q.a)) return false;
      double t = std::arg(z);
      if (t < 0.0) t += 2.0 * kPi;
      return t > 0.0 && t < 2.0 * kPi / q.p;
    }
    case RegionKind::Ellipse:
    case RegionKind::EllipseComplement: {
      cplx w = std::polar(1.0, -q.theta0) * (z - q.center);
      double f = std::pow(w.real() / q.a, 2) + std::pow(w.imag() / q.c, 2);
      return kind_ == RegionKind::Ellipse ? f < 1.0 : f > 1.0;
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      cplx w = std::polar(1.0, -q.theta0) * z;
      return w.real() > q.a1 && w.real() < q.a2 && w.imag() > q.c1 && w.imag() < q.c2;
    }
    case RegionKind::EquilateralTriangle: {
      cplx w = std::polar(1.0, -q.theta0) * (z - q.center);
      for (int j = 0; j < 3; ++j) {
        if ((w * std::polar(1.0, -2.0 * kPi * j / 3.0)).real() >= q.a / 2.0) return false;
      }
      return true;
    }
    case RegionKind::Cardioid: {
      cplx w = std::polar(1.0, -q.theta0) * (z - q.center);
      double r = std::abs(w);
      return r < q.a * (1.0 + 2.0 * q.c * std::cos(std::arg(w)));
    }
  }
  return false;
}

namespace {

cplx project_segment(cplx z, cplx a, cplx b) {
  cplx d = b - a;
  double t = std::real((z - a) * std::conj(d)) / std::norm(d);
  t = std::clamp(t, 0.0, 1.0);
  return a + t * d;
}

// Minimise |point(t) - z| over [t0, t1] by dense sampling and golden section.
double chart_nearest_param(const Chart& ch, cplx z) {
  const int n = 720;
  double best_t = ch.t0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    double t = ch.t0 + (ch.t1 - ch.t0) * i / n;
    double d = std::abs(ch.point(t) - z);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  double h = (ch.t1 - ch.t0) / n;
  double lo = std::max(ch.t0, best_t - h), hi = std::min(ch.t1, best_t + h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = std::abs(ch.point(x1) - z), f2 = std::abs(ch.point(x2) - z);
  for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + std::fabs(hi)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(ch.point(x1) - z);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(ch.point(x2) - z);
    }
  }
  return 0.5 * (lo + hi);
}

// Closest point on the ellipse (x/a)^2 + (y/c)^2 = 1 to w, by bisection on
// the Lagrange multiplier (first quadrant, then reflected).
cplx ellipse_nearest(cplx w, double a, double c) {
  double x = std::fabs(w.real()), y = std::fabs(w.imag());
  double sx = w.real() < 0 ? -1.0 : 1.0, sy = w.imag() < 0 ? -1.0 : 1.0;
  bool swap = false;
  if (a < c) {
    std::swap(a, c);
    std::swap(x, y);
    swap = true;
  }
  double px, py;
  if (y > 0.0) {
    if (x > 0.0) {
      // Solve F(t) = (a x/(t+a^2))^2 + (c y/(t+c^2))^2 - 1 = 0 for t > -c^2.
      double lo = -c * c + c * y, hi = a * x + c * y;
      lo = std::max(lo, -c * c + 1e-300);
      auto F = [&](double t) {
        double u = a * x / (t + a * a), v = c * y / (t + c * c);
        return u * u + v * v - 1.0;
      };
      // F is decreasing in t; ensure bracket.
      while (F(lo) < 0.0) lo = -c * c + 0.5 * (lo + c * c);
      while (F(hi) > 0.0) hi *= 2.0;
      for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (F(mid) > 0.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-17 * (std::fabs(lo) + std::fabs(hi))) break;
      }
      double t = 0.5 * (lo + hi);
      px = a * a * x / (t + a * a);
      py = c * c * y / (t + c * c);
    } else {
      px = 0.0;
      py = c;
    }
  } else {
    double num = a * x, den = a * a - c * c;
    if (num < den) {
      double xa = num / den;
      px = a * xa;
      py = c * std::sqrt(std::max(0.0, 1.0 - xa * xa));
    } else {
      px = a;
      py = 0.0;
    }
  }
  if (swap) std::swap(px, py);
  return {sx * px, sy * py};
}

}  // namespace

cplx HoleRegion::nearest_boundary_point(cplx z) const {
  const RegionParams& q = p_;
  switch (kind_) {
    case RegionKind::Disk:
    case RegionKind::DiskComplement: {
      cplx d = z - q.center;
      double r = std::abs(d);
      if (r == 0.0) return q.center + q.a;
      return q.center + q.a * d / r;
    }
    case RegionKind::Annulus: {
      double r = std::abs(z);
      cplx u = r == 0.0 ? cplx(1.0, 0.0) : z / r;
      return std::fabs(r - q.rho1) <= std::fabs(r - q.rho2) ? q.rho1 * u : q.rho2 * u;
    }
    case RegionKind::Sector: {
      double phi = 2.0 * kPi / q.p;
      cplx e = std::polar(1.0, phi);
      cplx c1 = project_segment(z, 0.0, q.a);
      cplx c2 = project_segment(z, 0.0, q.a * e);
      double t = std::arg(z);
      if (t < 0.0) t += 2.0 * kPi;
      // Smaller angle wins ties at the corner.
      double tc = t <= phi ? t : (t - phi < 2.0 * kPi - t ? phi : 0.0);
      cplx c3 = q.a * std::polar(1.0, tc);
      cplx best = c1;
      if (std::abs(c3 - z) < std::abs(best - z)) best = c3;
      if (std::abs(c2 - z) < std::abs(best - z)) best = c2;
      return best;
    }
    case RegionKind::Ellipse:
    case RegionKind::EllipseComplement: {
      cplx rot = std::polar(1.0, q.theta0);
      cplx w = std::conj(rot) * (z - q.center);
      return q.center + rot * ellipse_nearest(w, q.a, q.c);
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      cplx rot = std::polar(1.0, q.theta0);
      cplx w = std::conj(rot) * z;
      double x = std::clamp(w.real(), q.a1, q.a2), y = std::clamp(w.imag(), q.c1, q.c2);
      if (x > q.a1 && x < q.a2 && y > q.c1 && y < q.c2) {
        double dr = q.a2 - x, dl = x - q.a1, dt = q.c2 - y, db = y - q.c1;
        double m = std::min({dr, dl, dt, db});
        if (m == dr) x = q.a2;
        else if (m == dt) y = q.c2;
        else if (m == dl) x = q.a1;
        else y = q.c1;
      }
      return rot * cplx(x, y);
    }
    case RegionKind::EquilateralTriangle:
    case RegionKind::Cardioid: {
      cplx best = 0.0;
      double bd = std::numeric_limits<double>::infinity();
      for (const Chart& ch : charts()) {
        cplx c;
        if (kind_ == RegionKind::EquilateralTriangle) {
          c = project_segment(z, ch.point(ch.t0), ch.point(ch.t1));
        } else {
          c = ch.point(chart_nearest_param(ch, z));
        }
        double d = std::abs(c - z);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      return best;
    }
  }
  return z;
}

double HoleRegion::perimeter() const {
  const RegionParams& q = p_;
  switch (kind_) {
    case RegionKind::Disk:
    case RegionKind::DiskComplement: return 2.0 * kPi * q.a;
    case RegionKind::Annulus: return 2.0 * kPi * (q.rho1 + q.rho2);
    case RegionKind::Sector: return 2.0 * q.a + 2.0 * kPi * q.a / q.p;
    case RegionKind::Rectangle:
    case RegionKind::Square: return 2.0 * (rect_width() + rect_height());
    case RegionKind::EquilateralTriangle: return 3.0 * std::sqrt(3.0) * q.a;
    default: break;
  }
  double s = 0.0;
  for (const Chart& ch : charts()) {
    s += quad1d([&](double t) { return ch.speed(t); }, ch.t0, ch.t1);
  }
  return s;
}

double HoleRegion::area() const {
  const RegionParams& q = p_;
  switch (kind_) {
    case RegionKind::Disk: return kPi * q.a * q.a;
    case RegionKind::Annulus: return kPi * (q.rho2 * q.rho2 - q.rho1 * q.rho1);
    case RegionKind::Sector: return kPi * q.a * q.a / q.p;
    case RegionKind::Ellipse: return kPi * q.a * q.c;
    case RegionKind::Rectangle:
    case RegionKind::Square: return rect_width() * rect_height();
    case RegionKind::EquilateralTriangle: return 3.0 * std::sqrt(3.0) / 4.0 * q.a * q.a;
    case RegionKind::Cardioid: return kPi * q.a * q.a * (1.0 + 2.0 * q.c * q.c);
    default: throw DomainError("area: region is unbounded");
  }
}

std::vector<cplx> HoleRegion::boundary_samples(int per_chart) const {
  std::vector<cplx> out;
  for (const Chart& ch : charts()) {
    for (int i = 0; i <= per_chart; ++i) {
      out.push_back(ch.point(ch.t0 + (ch.t1 - ch.t0) * i / per_chart));
    }
  }
  return out;
}

// ---------------------------------------------------------------- validity

namespace {

// Largest value of the support gauge along the boundary (gauge <= 1 inside S).
// Segments are convex in the gauge, so their maximum sits at an endpoint.
double boundary_gauge_max(const Potential& pot, const HoleRegion& region) {
  auto gauge = [&](cplx z) {
    if (pot.is_elliptic()) {
      double x = z.real() / pot.semi_x(), y = z.imag() / pot.semi_y();
      return std::sqrt(x * x + y * y);
    }
    return std::abs(z);
  };
  double best = 0.0;
  for (const Chart& ch : region.charts()) {
    bool straight = ch.kind == MeasureKind::PerDy || ch.kind == MeasureKind::PerDx ||
                    ch.kind == MeasureKind::PerDr;
    if (straight) {
      best = std::max({best, gauge(ch.point(ch.t0)), gauge(ch.point(ch.t1))});
      continue;
    }
    const int n = 2048;
    int arg = 0;
    double top = -1.0;
    for (int i = 0; i <= n; ++i) {
      double v = gauge(ch.point(ch.t0 + (ch.t1 - ch.t0) * i / n));
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    double h = (ch.t1 - ch.t0) / n;
    double lo = ch.t0 + h * (arg - 1), hi = ch.t0 + h * (arg + 1);
    lo = std::max(lo, ch.t0);
    hi = std::min(hi, ch.t1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 120; ++it) {
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      if (gauge(ch.point(x1)) > gauge(ch.point(x2))) hi = x2; else lo = x1;
    }
    best = std::max({best, top, gauge(ch.point(0.5 * (lo + hi)))});
  }
  return best;
}

// Radial extent [rmin, rmax] of the closure of a bounded region.
std::pair<double, double> radial_extent(const HoleRegion& region) {
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (cplx z : region.boundary_samples(4096)) {
    rmin = std::min(rmin, std::abs(z));
    rmax = std::max(rmax, std::abs(z));
  }
  // Refine with the nearest boundary point to the origin.
  rmin = std::min(rmin, std::abs(region.nearest_boundary_point(0.0)));
  if (region.bounded() && (region.contains(0.0) || rmin < kGeoEps)) rmin = 0.0;
  return {rmin, rmax};
}

}  // namespace

Validity validate(const Potential& pot, const HoleRegion& region) {
  Validity v;
  const RegionParams& q = region.params();
  switch (region.kind()) {
    case RegionKind::Sector: v.exterior_ball = q.p >= 2.0; break;
    case RegionKind::Cardioid: v.exterior_ball = q.c < 0.5; break;
    default: v.exterior_ball = true;
  }
  if (pot.kind() == PotentialKind::Spherical) {
    v.boundary_in_support = true;
    v.hole_in_support = true;
    return v;
  }
  double gmax = boundary_gauge_max(pot, region);
  if (pot.is_elliptic() || pot.kind() == PotentialKind::MittagLeffler) {
    double lim = pot.is_elliptic() ? 1.0 : pot.outer_radius();
    v.boundary_in_support = gmax <= lim * (1.0 + kGeoEps);
    // S is convex, so U inside S iff its boundary is (bounded U); for
    // unbounded U we report whether the complement of U lies in S.
    v.hole_in_support = v.boundary_in_support;
    return v;
  }
  // Radial potential with several rings.
  v.boundary_in_support = true;
  for (cplx z : region.boundary_samples(4096)) {
    if (pot.ring_of(std::abs(z)) < 0) {
      v.boundary_in_support = false;
      break;
    }
  }
  if (region.bounded()) {
    auto [rmin, rmax] = radial_extent(region);
    int r0 = pot.ring_of(rmin), r1 = pot.ring_of(rmax);
    v.hole_in_support = v.boundary_in_support && r0 >= 0 && r0 == r1;
  } else {
    v.hole_in_support = v.boundary_in_support && gmax <= pot.rings()[1] + kGeoEps;
  }
  return v;
}

// ---------------------------------------------------------------- integration over U

namespace {

struct PolarDomain {
  cplx center;
  double th0, th1;
  std::vector<double> th_breaks;
  std::function<double(double)> r_lo, r_hi;  // r_hi may be +inf
  std::vector<double> r_breaks;               // absolute radii about center
};

double integrate_polar(const PolarDomain& d, const std::function<double(cplx)>& f,
                       double rel_tol, double floor) {
  QuadOptions outer, inner;
  outer.rel_tol = rel_tol;
  outer.abs_tol = floor;
  outer.breaks = d.th_breaks;
  inner.rel_tol = std::max(rel_tol * 0.1, 1e-12);
  inner.abs_tol = floor;
  return quad1d(
      [&](double th) {
        cplx e = std::polar(1.0, th);
        double lo = d.r_lo(th), hi = d.r_hi(th);
        if (!(hi > lo)) return 0.0;
        if (std::isinf(hi)) {
          // r = lo / s
          return quad1d(
              [&](double s) {
                if (s <= 0.0) return 0.0;
                double r = lo / s;
                return f(d.center + r * e) * r * lo / (s * s);
              },
              0.0, 1.0, inner);
        }
        QuadOptions in = inner;
        in.breaks = d.r_breaks;
        return quad1d([&](double r) { return f(d.center + r * e) * r; }, lo, hi, in);
      },
      d.th0, d.th1, outer);
}

// Distance from c (inside S) to the boundary of S along direction e.
double support_ray(const Potential& pot, cplx c, cplx e) {
  if (pot.kind() == PotentialKind::Spherical) return std::numeric_limits<double>::infinity();
  double A, B, C;
  if (pot.is_elliptic()) {
    double sx = pot.semi_x(), sy = pot.semi_y();
    A = std::pow(e.real() / sx, 2) + std::pow(e.imag() / sy, 2);
    B = 2.0 * (c.real() * e.real() / (sx * sx) + c.imag() * e.imag() / (sy * sy));
    C = std::pow(c.real() / sx, 2) + std::pow(c.imag() / sy, 2) - 1.0;
  } else {
    double R = pot.outer_radius();
    A = 1.0;
    B = 2.0 * std::real(c * std::conj(e));
    C = std::norm(c) - R * R;
  }
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return 0.0;
  return (-B + std::sqrt(disc)) / (2.0 * A);
}

double integrate_mu_floor(const Potential& pot, const HoleRegion& region,
                          const std::function<double(cplx)>& f, double rel_tol, double floor) {
  const RegionParams& q = region.params();
  auto fm = [&](cplx z) { return f(z) * pot.density(z); };
  std::vector<double> ring_breaks;
  if (pot.is_radial() && pot.kind() != PotentialKind::Spherical) {
    for (double r : pot.rings()) ring_breaks.push_back(r);
  }
  auto cst = [](double v) { return [v](double) { return v; }; };
  PolarDomain d;
  switch (region.kind()) {
    case RegionKind::Disk:
      d = {q.center, 0.0, 2.0 * kPi, {}, cst(0.0), cst(q.a), {}};
      if (q.center == 0.0) d.r_breaks = ring_breaks;
      return integrate_polar(d, fm, rel_tol, floor);
    case RegionKind::Annulus:
      d = {0.0, 0.0, 2.0 * kPi, {}, cst(q.rho1), cst(q.rho2), ring_breaks};
      return integrate_polar(d, fm, rel_tol, floor);
    case RegionKind::Sector:
      d = {0.0, 0.0, 2.0 * kPi / q.p, {}, cst(0.0), cst(q.a), ring_breaks};
      return integrate_polar(d, fm, rel_tol, floor);
    case RegionKind::Cardioid: {
      cplx rot = std::polar(1.0, q.theta0);
      d = {q.center, 0.0, 2.0 * kPi, {}, cst(0.0),
           [=](double t) { return q.a * (1.0 + 2.0 * q.c * std::cos(t - q.theta0)); }, {}};
      (void)rot;
      return integrate_polar(d, fm, rel_tol, floor);
    }
    case RegionKind::EquilateralTriangle: {
      double a = q.a, t0 = q.theta0;
      auto R = [=](double th) {
        double phi = th - t0;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 3; ++j) {
          double cs = std::cos(phi - 2.0 * kPi * j / 3.0);
          if (cs > 1e-300) best = std::min(best, a / 2.0 / cs);
        }
        return best;
      };
      std::vector<double> br;
      for (int j = 0; j < 3; ++j) br.push_back(t0 + kPi / 3.0 + 2.0 * kPi * j / 3.0);
      // Shift the window so that it starts at a vertex.
      d = {q.center, t0 - kPi / 3.0, t0 + 5.0 * kPi / 3.0, br, cst(0.0), R, {}};
      return integrate_polar(d, fm, rel_tol, floor);
    }
    case RegionKind::Ellipse: {
      cplx rot = std::polar(1.0, q.theta0);
      QuadOptions outer, inner;
      outer.rel_tol = rel_tol;
      outer.abs_tol = floor;
      inner.rel_tol = std::max(rel_tol * 0.1, 1e-12);
      inner.abs_tol = floor;
      return quad1d(
          [&](double t) {
            cplx u(q.a * std::cos(t), q.c * std::sin(t));
            return quad1d([&](double r) { return fm(q.center + rot * (r * u)) * r; }, 0.0, 1.0,
                          inner) *
                   q.a * q.c;
          },
          0.0, 2.0 * kPi, outer);
    }
    case RegionKind::Rectangle:
    case RegionKind::Square: {
      cplx rot = std::polar(1.0, q.theta0);
      QuadOptions outer, inner;
      outer.rel_tol = rel_tol;
      outer.abs_tol = floor;
      inner.rel_tol = std::max(rel_tol * 0.1, 1e-12);
      inner.abs_tol = floor;
      return quad2d([&](double x, double y) { return fm(rot * cplx(x, y)); }, q.a1, q.a2,
                    cst(q.c1), cst(q.c2), outer, inner);
    }
    case RegionKind::DiskComplement: {
      cplx c0 = q.center;
      d = {c0, 0.0, 2.0 * kPi, {}, cst(q.a),
           [&pot, c0](double th) { return support_ray(pot, c0, std::polar(1.0, th)); }, {}};
      if (c0 == 0.0) d.r_breaks = ring_breaks;
      return integrate_polar(d, fm, rel_tol, floor);
    }
    case RegionKind::EllipseComplement: {
      double a = q.a, c = q.c;
      d = {0.0, 0.0, 2.0 * kPi, {},
           [=](double th) {
             return 1.0 / std::sqrt(std::pow(std::cos(th) / a, 2) + std::pow(std::sin(th) / c, 2));
           },
           [&pot](double th) { return support_ray(pot, 0.0, std::polar(1.0, th)); }, ring_breaks};
      return integrate_polar(d, fm, rel_tol, floor);
    }
  }
  throw NotCoveredError("integrate_mu: unsupported region");
}

}  // namespace

double integrate_mu(const Potential& pot, const HoleRegion& region,
                    const std::function<double(cplx)>& f, double rel_tol) {
  // Absolute floor from a loose int |f| dmu, for cancelling integrands.
  double l1 = integrate_mu_floor(pot, region, [&](cplx z) { return std::abs(f(z)); }, 1e-4, 1e-15);
  return integrate_mu_floor(pot, region, f, rel_tol, std::max(1e-18, std::max(0.1 * rel_tol, 1e-14) * l1));
}

std::complex<double> integrate_mu_c(const Potential& pot, const HoleRegion& region,
                                    const std::function<cplx(cplx)>& f, double rel_tol) {
  // Real and imaginary parts share the tolerance of the larger one.
  double re = integrate_mu(pot, region, [&](cplx z) { return f(z).real(); }, rel_tol);
  double im = integrate_mu(pot, region, [&](cplx z) { return f(z).imag(); }, rel_tol);
  return {re, im};
}

double mu_mass_of_region(const Potential& pot, const HoleRegion& region) {
  const RegionParams& q = region.params();
  if (pot.is_elliptic()) {
    Validity v = validate(pot, region);
    double dens = 1.0 / (kPi * (1.0 - pot.tau() * pot.tau()));
    if (region.bounded() && v.hole_in_support) return region.area() * dens;
    if (!region.bounded() && v.hole_in_support) {
      double inner = region.kind() == RegionKind::DiskComplement ? kPi * q.a * q.a
                                                                 : kPi * q.a * q.c;
      return 1.0 - inner * dens;
    }
  }
  if (pot.is_radial()) {
    bool centered = q.center == 0.0;
    switch (region.kind()) {
      case RegionKind::Disk:
        if (centered) return pot.mu_cumulative(q.a);
        break;
      case RegionKind::Annulus: return pot.mu_cumulative(q.rho2) - pot.mu_cumulative(q.rho1);
      case RegionKind::DiskComplement:
        if (centered) return pot.mu_cumulative(std::numeric_limits<double>::infinity()) -
                             pot.mu_cumulative(q.a);
        break;
      case RegionKind::Sector: return pot.mu_cumulative(q.a) / q.p;
      default: break;
    }
  }
  return integrate_mu(pot, region, [](cplx) { return 1.0; }, 1e-12);
}

}  // namespace chole
