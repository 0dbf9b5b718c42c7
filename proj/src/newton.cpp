#include "harmzero/newton.hpp"

#include <algorithm>
#include <cmath>

namespace harmzero {

namespace {

double jac_floor(const PointData& d, const NewtonOptions& opts) {
  const double s = std::abs(d.h1) + std::abs(d.g1);
  return opts.jac_floor * s * s;
}

// (conj(h') F - conj(g' F)) / J
Complex newton_increment(const PointData& d, Complex residual) {
  return (std::conj(d.h1) * residual - std::conj(d.g1 * residual)) / d.jacobian();
}

}  // namespace

const char* to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::Converged: return "Converged";
    case NewtonStatus::Diverged: return "Diverged";
    case NewtonStatus::HitCritical: return "HitCritical";
    case NewtonStatus::MaxIter: return "MaxIter";
  }
  return "Unknown";
}

Complex newton_step(const HarmonicMapping& f, Complex eta, Complex z, const NewtonOptions& opts) {
  const auto d = f.evaluate(z);
  if (std::abs(d.jacobian()) <= jac_floor(d, opts)) {
    throw Error(ErrorKind::HitCritical, "Jacobian vanishes at the iterate");
  }
  return z - newton_increment(d, d.f - eta);
}

NewtonOutcome newton_solve(const HarmonicMapping& f, Complex eta, Complex z0,
                           const NewtonOptions& opts) {
  NewtonOutcome out;
  const double res_tol = opts.tol * (1.0 + std::abs(eta));
  const double escape = opts.divergence_factor * (1.0 + f.pole_scale());
  Complex z = z0;
  double prev_step = INFINITY;
  PointData d;
  for (int it = 0; it <= opts.max_iter; ++it) {
    out.iterations = it;
    if (!is_finite(z) || std::abs(z) > escape || !f.try_evaluate(z, d)) {
      out.status = NewtonStatus::Diverged;
      out.limit = z;
      return out;
    }
    const Complex residual = d.f - eta;
    out.residual = std::abs(residual);
    out.jacobian = d.jacobian();
    out.limit = z;
    if (std::abs(out.jacobian) <= jac_floor(d, opts)) {
      out.status = NewtonStatus::HitCritical;
      return out;
    }
    const Complex step = newton_increment(d, residual);
    const double step_len = std::abs(step);
    if (out.residual <= res_tol) {
      // Either the step is negligible, or it has stopped shrinking and only
      // rounding noise is left to chase.
      if (step_len <= opts.step_tol * (1.0 + std::abs(z)) || (it > 0 && step_len >= 0.5 * prev_step)) {
        out.status = NewtonStatus::Converged;
        return out;
      }
    }
    if (it == opts.max_iter) break;
    z -= step;
    prev_step = step_len;
    if (opts.record_steps) out.steps.push_back(step_len);
  }
  out.status = NewtonStatus::MaxIter;
  return out;
}

std::vector<Complex> distinct_filter(const std::vector<Complex>& points, double sep_tol) {
  std::vector<Complex> reps;
  for (const auto& z : points) {
    const bool dup = std::any_of(reps.begin(), reps.end(), [&](Complex r) {
      return std::abs(r - z) <= sep_tol * (1.0 + std::abs(z));
    });
    if (!dup) reps.push_back(z);
  }
  return reps;
}

bool pairwise_distinct(const std::vector<Complex>& points, double sep_tol) {
  std::vector<Complex> sorted = points;
  sort_points(sorted);
  // Any close pair differs by at most the tolerance in Re, so a sweep in Re
  // order only has to look ahead within that window.
  double window = 0.0;
  for (const auto& z : sorted) window = std::max(window, sep_tol * (1.0 + std::abs(z)));
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double tol_i = sep_tol * (1.0 + std::abs(sorted[i]));
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j].real() - sorted[i].real() > window) break;
      const double tol = std::max(tol_i, sep_tol * (1.0 + std::abs(sorted[j])));
      if (std::abs(sorted[j] - sorted[i]) <= tol) return false;
    }
  }
  return true;
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](Complex p, Complex q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

void sort_points(std::vector<Complex>& points) {
  std::sort(points.begin(), points.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
}

}  // namespace harmzero
