#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chole/balayage.hpp"
#include "chole/model.hpp"

namespace chole {

struct MomentReport {
  int n_max = 0;
  double max_abs_residual = 0.0;
  // Bounded U: n = 0..n_max of int z^n dnu - int_U z^n dmu.
  // Unbounded U: n = 0 is the mass, n >= 1 the inverse moments z^-n.
  std::vector<cplx> residuals;
  bool inverse = false;
  // Unbounded U: int log|z| dnu - (int_U log|z| dmu - c_U^mu).
  std::optional<double> log_residual;
};

MomentReport verify_moments(const Potential& pot, const HoleRegion& region,
                            const BalayageDensity& nu, int n_max);

// c_U^mu = int log|phi(z)| dmu over U n S, phi the exterior map of the hole complement.
double c_U_mu_quadrature(const Potential& pot, const HoleRegion& region);
// Closed forms: elliptic Ginibre complements, centered radial disk complement.
double c_U_mu_closed(const Potential& pot, const HoleRegion& region);

struct FeketeConfig {
  int n_points = 256;
  int max_iter = 2000;
  double step = 0.2;
  std::uint64_t seed = 1;
  // Map onto the complement of U; defaults to the nearest boundary point.
  std::function<cplx(cplx)> projection;
};

struct PointCloud {
  std::vector<cplx> points;
  double final_energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;  // accepted iterates
};

// (1/n^2) sum_{j<k} log(1/|z_j - z_k|^2) + (1/n) sum Q(z_j)
double discrete_energy(const Potential& pot, const std::vector<cplx>& pts);

PointCloud fekete_minimize(const Potential& pot, const HoleRegion* region, const FeketeConfig& cfg);

// Worker cap from COULOMB_HOLE_THREADS (default: hardware concurrency).
int worker_threads();

}  // namespace chole
