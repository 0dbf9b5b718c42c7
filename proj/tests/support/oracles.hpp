#pragma once

// Reference computations used by the tests. They evaluate the test families
// from their closed forms and never call the transport machinery.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "harmzero/newton.hpp"

namespace oracle {

using harmzero::Complex;
using Field = std::function<Complex(Complex)>;

inline Complex ipow(Complex z, int n) {
  Complex p = 1.0;
  for (int k = 0; k < n; ++k) p *= z;
  return p;
}

inline Field wilmshurst(int n) {
  return [n](Complex z) {
    const Complex i{0.0, 1.0};
    const Complex a = ipow(z - 1.0, n);
    const Complex b = ipow(z, n);
    return a + b + std::conj(i * a - i * b);
  };
}

inline Field mpw(int n, double rho) {
  return [n, rho](Complex z) { return z - std::conj(ipow(z, n - 1) / (ipow(z, n) - std::pow(rho, n))); };
}

inline Field rhie(int n, double rho, double eps) {
  return [n, rho, eps](Complex z) {
    return z - std::conj((1.0 - eps) * ipow(z, n - 1) / (ipow(z, n) - std::pow(rho, n)) + eps / z);
  };
}

inline Field log_example() {
  return [](Complex z) { return z * z + std::conj(1.0 / z + 1.0 / (z + 1.0)) + 2.0 * std::log(std::abs(z)); };
}

inline Field chang_refsdal() {
  return [](Complex z) { return z - 1.0 / std::conj(z); };
}

/// Determinant of the real 2x2 Jacobian of (Re F, Im F) by central differences.
inline double fd_jacobian(const Field& F, Complex z, double h = 1e-6) {
  const Complex fx = (F(z + h) - F(z - h)) / (2.0 * h);
  const Complex fy = (F(z + Complex{0.0, h}) - F(z - Complex{0.0, h})) / (2.0 * h);
  return fx.real() * fy.imag() - fx.imag() * fy.real();
}

/// Closed-form preimages of z - 1/conj(z) = eta for eta != 0.
inline std::vector<Complex> chang_refsdal_preimages(Complex eta) {
  const double s = std::sqrt(1.0 + 4.0 / std::norm(eta));
  return {0.5 * (1.0 + s) * eta, 0.5 * (1.0 - s) * eta};
}

/// Grid scan of |F - eta| over a box. A local minimum of the sampled modulus
/// is kept when it is below `threshold` or below the change of F across the
/// neighbouring cells (a steep zero can sit between grid points with a large
/// sampled modulus). Kept minima are refined with Newton on f, and the
/// converged limits are returned without duplicates.
inline std::vector<Complex> grid_scan(const harmzero::HarmonicMapping& f, const Field& F, Complex eta, double x0,
                                      double x1, double y0, double y1, int n = 600, double threshold = 1e-2) {
  std::vector<double> mod(static_cast<size_t>(n) * n, INFINITY);
  std::vector<Complex> val(static_cast<size_t>(n) * n);
  auto at = [&](int i, int j) -> double& { return mod[static_cast<size_t>(i) * n + j]; };
  auto value = [&](int i, int j) -> Complex& { return val[static_cast<size_t>(i) * n + j]; };
  auto point = [&](int i, int j) {
    return Complex{x0 + (x1 - x0) * (j + 0.5) / n, y0 + (y1 - y0) * (i + 0.5) / n};
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex v = F(point(i, j)) - eta;
      value(i, j) = v;
      at(i, j) = harmzero::is_finite(v) ? std::abs(v) : INFINITY;
    }
  }
  std::vector<Complex> out;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = 1; j + 1 < n; ++j) {
      const double m = at(i, j);
      if (!std::isfinite(m)) continue;
      bool is_min = true;
      double variation = 0.0;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (!(di || dj)) continue;
          if (at(i + di, j + dj) < m) {
            is_min = false;
            break;
          }
          variation = std::max(variation, std::abs(value(i + di, j + dj) - value(i, j)));
        }
      }
      if (!is_min || !(m < threshold || m <= variation)) continue;
      const auto r = harmzero::newton_solve(f, eta, point(i, j));
      if (r.converged()) out.push_back(r.limit);
    }
  }
  out = harmzero::distinct_filter(out, 1e-8);
  harmzero::sort_points(out);
  return out;
}

}  // namespace oracle
