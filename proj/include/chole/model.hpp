#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace chole {

using cplx = std::complex<double>;

constexpr double kGeoEps = 1e-12;

enum class PotentialKind { Ginibre, EllipticGinibre, MittagLeffler, Spherical, RadialTabulated };

// User-provided radial potential Q(z) = g(|z|), with the support given as
// rings [r0,r1] u [r2,r3] u ... (flattened, strictly increasing).
struct RadialCallbacks {
  std::function<double(double)> g, g1, g2;
  std::vector<double> rings;
};

class Potential {
 public:
  static Potential ginibre();
  static Potential elliptic_ginibre(double tau);
  static Potential mittag_leffler(double b);
  static Potential spherical();
  static Potential radial_tabulated(RadialCallbacks cb);

  PotentialKind kind() const { return kind_; }
  double tau() const { return tau_; }
  double b() const { return b_; }
  bool integer_b() const;
  int int_b() const;
  std::string name() const;

  // Ginibre, ML, spherical, tabulated, and elliptic Ginibre at tau = 0.
  bool is_radial() const;
  // Ginibre or elliptic Ginibre: uniform density on an ellipse.
  bool is_elliptic() const;

  double Q(cplx z) const;
  cplx grad_Q(cplx z) const;  // dQ/dx + i dQ/dy
  double density(cplx z) const;
  // z in S shrunk by margin (margin > 0 demands strict interior).
  bool in_support(cplx z, double margin = 0.0) const;

  // Radial profile; requires is_radial().
  double g(double r) const;
  double g1(double r) const;
  double g2(double r) const;
  double mu_rad(double r) const;  // density of dmu_rad in r, 0 off the rings
  double mu_cumulative(double r) const;  // mu({|z| < r})
  const std::vector<double>& rings() const;
  // Index of the ring containing r, or -1.
  int ring_of(double r, double tol = kGeoEps) const;
  // Largest radius of S (infinity for spherical).
  double outer_radius() const;

  // Semi-axes of the elliptic support (1+tau, 1-tau).
  double semi_x() const { return 1.0 + tau_; }
  double semi_y() const { return 1.0 - tau_; }

 private:
  PotentialKind kind_ = PotentialKind::Ginibre;
  double tau_ = 0.0;
  double b_ = 1.0;
  std::shared_ptr<const RadialCallbacks> cb_;
  std::vector<double> rings_;
};

// Density and cumulative mass of dmu_rad.
class RadialMeasure {
 public:
  explicit RadialMeasure(Potential pot);
  double density(double r) const { return pot_.mu_rad(r); }
  double cumulative(double r) const { return pot_.mu_cumulative(r); }
  double total_mass() const;
  const std::vector<double>& rings() const { return pot_.rings(); }

 private:
  Potential pot_;
};

enum class RegionKind {
  Disk,
  Annulus,
  DiskComplement,
  Sector,
  Ellipse,
  EllipseComplement,
  Rectangle,
  Square,
  EquilateralTriangle,
  Cardioid
};

enum class MeasureKind { PerDTheta, PerArclength, PerDy, PerDx, PerDr };

std::string to_string(RegionKind k);
std::string to_string(MeasureKind k);

struct Chart {
  int id = 0;
  std::string name;
  double t0 = 0.0, t1 = 0.0;
  MeasureKind kind = MeasureKind::PerDTheta;
  std::function<cplx(double)> point;
  std::function<cplx(double)> tangent;
  std::vector<double> corners;  // parameters where the speed or density may be singular

  double speed(double t) const { return std::abs(tangent(t)); }
};

struct RegionParams {
  cplx center = 0.0;  // disk / disk complement / ellipse / triangle / cardioid
  double a = 0.0;     // radius, semi-axis, circumradius, cardioid scale, sector radius
  double c = 0.0;     // ellipse semi-axis, square side, cardioid shape
  double rho1 = 0.0, rho2 = 0.0;
  double p = 2.0;
  double a1 = 0.0, a2 = 0.0, c1 = 0.0, c2 = 0.0;
  double theta0 = 0.0;
};

class HoleRegion {
 public:
  static HoleRegion disk(cplx center, double a);
  static HoleRegion annulus(double rho1, double rho2);
  static HoleRegion disk_complement(cplx center, double a);
  static HoleRegion sector(double a, double p);
  static HoleRegion ellipse(double a, double c, cplx center = 0.0, double theta0 = 0.0);
  static HoleRegion ellipse_complement(double a, double c);
  // Rectangle (a1,a2) x (c1,c2), optionally rotated by theta0 about the origin.
  static HoleRegion rectangle(double a1, double a2, double c1, double c2, double theta0 = 0.0);
  static HoleRegion square(double c);
  static HoleRegion triangle(cplx center, double theta0, double a);
  static HoleRegion cardioid(double a, double c, cplx center = 0.0, double theta0 = 0.0);

  RegionKind kind() const { return kind_; }
  const RegionParams& params() const { return p_; }
  bool bounded() const;
  std::string name() const;

  std::vector<Chart> charts() const;
  // Strictly inside the open set U.
  bool contains(cplx z) const;
  // Closest point of the boundary.
  cplx nearest_boundary_point(cplx z) const;
  double perimeter() const;
  double area() const;  // bounded regions only

  // Region in its own frame: rectangle corners before rotation etc.
  double rect_width() const { return p_.a2 - p_.a1; }
  double rect_height() const { return p_.c2 - p_.c1; }

  // Dense sample of boundary points (for containment tests).
  std::vector<cplx> boundary_samples(int per_chart) const;

 private:
  RegionKind kind_ = RegionKind::Disk;
  RegionParams p_;
};

struct Validity {
  bool boundary_in_support = false;
  bool hole_in_support = false;  // unbounded U: the complement of U lies in S
  bool exterior_ball = false;
};

Validity validate(const Potential& pot, const HoleRegion& region);

// mu(U).
double mu_mass_of_region(const Potential& pot, const HoleRegion& region);

// integral over U (or U n S for unbounded U) of f dmu.
double integrate_mu(const Potential& pot, const HoleRegion& region,
                    const std::function<double(cplx)>& f, double rel_tol = 1e-11);
std::complex<double> integrate_mu_c(const Potential& pot, const HoleRegion& region,
                                    const std::function<cplx(cplx)>& f,
                                    double rel_tol = 1e-11);

// Equilibrium density (alias of Potential::density).
double equilibrium_density(const Potential& pot, cplx z);

}  // namespace chole
