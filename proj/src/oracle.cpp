#include "chole/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "chole/constants.hpp"
#include "chole/errors.hpp"

namespace chole {

namespace {

cplx ellipse_exterior_map(double a, double c, cplx z) {
  cplx s = std::sqrt(z * z - cplx(a * a - c * c, 0.0));
  cplx w1 = (z + s) / (a + c);
  cplx w2 = (z - s) / (a + c);
  return std::abs(w1) >= std::abs(w2) ? w1 : w2;
}

// Runs body(lo, hi) over [0, n) in contiguous chunks.
template <class F>
void parallel_chunks(int n, F body) {
  int t = std::min(worker_threads(), std::max(1, n / 64));
  if (t <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + t - 1) / t;
  for (int k = 0; k < t; ++k) {
    int lo = k * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

int worker_threads() {
  if (const char* s = std::getenv("COULOMB_HOLE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 256L));
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

// ---------------------------------------------------------------- c_U^mu

double c_U_mu_quadrature(const Potential& pot, const HoleRegion& region) {
  const auto& q = region.params();
  switch (region.kind()) {
    case RegionKind::DiskComplement:
      return integrate_mu(pot, region, [&](cplx z) { return std::log(std::abs(z - q.center) / q.a); },
                          1e-12);
    case RegionKind::EllipseComplement:
      return integrate_mu(
          pot, region, [&](cplx z) { return std::log(std::abs(ellipse_exterior_map(q.a, q.c, z))); },
          1e-12);
    default:
      throw NotCoveredError("c_U_mu_quadrature: only disk and ellipse complements");
  }
}

double c_U_mu_closed(const Potential& pot, const HoleRegion& region) {
  const auto& q = region.params();
  if (region.kind() == RegionKind::EllipseComplement && pot.is_elliptic())
    return c_eg_complement_ellipse(pot.tau(), q.a, q.c, 2.0).breakdown->c_U_mu;
  if (region.kind() == RegionKind::DiskComplement) {
    if (pot.is_elliptic())
      return c_eg_complement_disk(pot.tau(), q.center.real(), q.center.imag(), q.a, 2.0)
          .breakdown->c_U_mu;
    if (pot.is_radial() && std::abs(q.center) == 0.0)
      return c_radial_disk_complement(pot, q.a, 2.0).breakdown->c_U_mu;
  }
  throw NotCoveredError("c_U_mu_closed: no closed form for " + region.name() + " under " +
                        pot.name());
}

// ---------------------------------------------------------------- moments

MomentReport verify_moments(const Potential& pot, const HoleRegion& region,
                            const BalayageDensity& nu, int n_max) {
  if (n_max < 0) throw DomainError("verify_moments: n_max must be >= 0");
  MomentReport rep;
  rep.n_max = n_max;
  rep.inverse = !region.bounded();
  if (!rep.inverse) {
    for (int n = 0; n <= n_max; ++n) {
      auto f = [n](cplx z) { return n == 0 ? cplx(1.0) : std::pow(z, n); };
      rep.residuals.push_back(nu.integrate_c(f) - integrate_mu_c(pot, region, f));
    }
  } else {
    if (region.contains(0.0) || std::abs(region.nearest_boundary_point(0.0)) < 1e-9)
      throw DomainError("verify_moments: the origin must lie inside the hole complement");
    for (int n = 0; n <= n_max; ++n) {
      auto f = [n](cplx z) { return n == 0 ? cplx(1.0) : std::pow(z, -n); };
      rep.residuals.push_back(nu.integrate_c(f) - integrate_mu_c(pot, region, f));
    }
    double cU;
    try {
      cU = c_U_mu_closed(pot, region);
    } catch (const NotCoveredError&) {
      cU = c_U_mu_quadrature(pot, region);
    }
    auto lg = [](cplx z) { return std::log(std::abs(z)); };
    rep.log_residual = nu.integrate(lg) - (integrate_mu(pot, region, lg) - cU);
  }
  for (const auto& r : rep.residuals) rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
  if (rep.log_residual)
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(*rep.log_residual));
  return rep;
}

// ---------------------------------------------------------------- Fekete

double discrete_energy(const Potential& pot, const std::vector<cplx>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) return 0.0;
  std::vector<double> row(n, 0.0);
  parallel_chunks(n, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      double s = 0.0;
      for (int k = j + 1; k < n; ++k) s -= std::log(std::norm(pts[j] - pts[k]));
      row[j] = s / (double(n) * n) + pot.Q(pts[j]) / n;
    }
  });
  double e = 0.0;
  for (double r : row) e += r;
  return e;
}

namespace {

// n times the gradient of the discrete energy.
std::vector<cplx> scaled_gradient(const Potential& pot, const std::vector<cplx>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<cplx> g(n);
  parallel_chunks(n, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        cplx d = pts[j] - pts[k];
        s += d / std::norm(d);
      }
      g[j] = -2.0 / n * s + pot.grad_Q(pts[j]);
    }
  });
  return g;
}

double sampling_radius(const Potential& pot) {
  if (pot.kind() == PotentialKind::EllipticGinibre) return 1.0 + std::abs(pot.tau());
  double r = pot.outer_radius();
  return std::isfinite(r) ? r : 3.0;
}

}  // namespace

PointCloud fekete_minimize(const Potential& pot, const HoleRegion* region, const FeketeConfig& cfg) {
  if (cfg.n_points < 8) throw DomainError("fekete_minimize: n_points must be >= 8");
  if (!(cfg.step > 0.0)) throw DomainError("fekete_minimize: step must be positive");
  if (cfg.max_iter < 0) throw DomainError("fekete_minimize: max_iter must be >= 0");

  std::function<cplx(cplx)> project = cfg.projection;
  if (!project) {
    if (region) {
      project = [region](cplx z) { return region->contains(z) ? region->nearest_boundary_point(z) : z; };
    } else {
      project = [](cplx z) { return z; };
    }
  }

  const int n = cfg.n_points;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double R = 0.9 * sampling_radius(pot);
  std::vector<cplx> x(n);
  for (int j = 0; j < n; ++j) {
    double r = R * std::sqrt(unif(rng));
    double t = 2.0 * M_PI * unif(rng);
    x[j] = project(std::polar(r, t));
  }

  PointCloud out;
  double e = discrete_energy(pot, x);
  out.energy_history.push_back(e);
  double t = cfg.step;
  std::vector<cplx> y(n);
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    std::vector<cplx> g = scaled_gradient(pot, x);
    bool accepted = false;
    double e_new = e;
    for (int bt = 0; bt < 60; ++bt) {
      double slope = 0.0;
      for (int j = 0; j < n; ++j) {
        y[j] = project(x[j] - t * g[j]);
        cplx d = y[j] - x[j];
        slope += (g[j].real() * d.real() + g[j].imag() * d.imag()) / n;
      }
      e_new = discrete_energy(pot, y);
      if (std::isfinite(e_new) && e_new <= e + 1e-4 * std::min(0.0, slope) && e_new <= e) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    double drop = e - e_new;
    x.swap(y);
    e = e_new;
    out.energy_history.push_back(e);
    if (drop <= 1e-14 * std::max(1.0, std::abs(e))) {
      out.converged = true;
      ++it;
      break;
    }
    t = std::min(cfg.step, 2.0 * t);
  }
  out.iterations = it;
  out.points = std::move(x);
  out.final_energy = e;
  return out;
}

}  // namespace chole
