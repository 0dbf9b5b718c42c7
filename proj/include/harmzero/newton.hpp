#pragma once

#include <vector>

#include "harmzero/harmonic.hpp"

namespace harmzero {

enum class NewtonStatus { Converged, Diverged, HitCritical, MaxIter };

const char* to_string(NewtonStatus status);

struct NewtonOptions {
  /// Residual test |f(z) - eta| <= tol * (1 + |eta|).
  double tol = 1e-13;
  /// Step test |z_k - z_{k-1}| <= step_tol * (1 + |z_k|).
  double step_tol = 1e-13;
  int max_iter = 50;
  /// |J| <= jac_floor * (|h'| + |g'|)^2 counts as a critical point.
  double jac_floor = 1e-14;
  /// Iterates beyond divergence_factor * (1 + pole scale) are abandoned.
  double divergence_factor = 1e8;
  /// Keep the step lengths |z_k - z_{k-1}| in the outcome.
  bool record_steps = false;
};

struct NewtonOutcome {
  NewtonStatus status = NewtonStatus::MaxIter;
  Complex limit{};
  int iterations = 0;
  double residual = INFINITY;
  double jacobian = 0.0;
  std::vector<double> steps;

  bool converged() const { return status == NewtonStatus::Converged; }
};

/// One harmonic Newton update for f - eta. Throws HitCritical when the
/// Jacobian is below the floor and PoleProximity at a singular point.
Complex newton_step(const HarmonicMapping& f, Complex eta, Complex z,
                    const NewtonOptions& opts = {});

/// Iterates the harmonic Newton map from z0. Never throws; the status
/// carries the failure cause.
NewtonOutcome newton_solve(const HarmonicMapping& f, Complex eta, Complex z0,
                           const NewtonOptions& opts = {});

/// Greedy clustering: a point within sep_tol * (1 + |z|) of an earlier
/// representative is dropped. Representatives keep their input order.
std::vector<Complex> distinct_filter(const std::vector<Complex>& points, double sep_tol = 1e-8);

/// True when no two points are within sep_tol * (1 + |z|) of each other.
bool pairwise_distinct(const std::vector<Complex>& points, double sep_tol = 1e-8);

/// Largest distance in a greedy nearest-neighbour matching of two multisets,
/// or infinity when the sizes differ.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

/// Lexicographic (Re, Im) order used for canonical output.
void sort_points(std::vector<Complex>& points);

}  // namespace harmzero
