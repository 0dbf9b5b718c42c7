#include "harmzero/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace harmzero {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite polynomial coefficient");
  }
  trim();
}

Polynomial::Polynomial(std::initializer_list<Complex> coeffs)
    : Polynomial(std::vector<Complex>(coeffs)) {}

Polynomial Polynomial::constant(Complex c) { return Polynomial(std::vector<Complex>{c}); }

Polynomial Polynomial::monomial(int degree, Complex c) {
  std::vector<Complex> v(static_cast<size_t>(degree) + 1, Complex{});
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_factor(Complex root) { return Polynomial({-root, 1.0}); }

Polynomial Polynomial::from_roots(std::span<const Complex> roots, Complex lead) {
  std::vector<Complex> c{lead};
  for (const Complex r : roots) {
    c.push_back(Complex{});
    for (size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex Polynomial::eval(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial::Jet Polynomial::eval_jet(Complex z) const {
  Complex p{}, d1{}, d2{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    d2 = d2 * z + d1;
    d1 = d1 * z + p;
    p = p * z + *it;
  }
  return {p, d1, 2.0 * d2};
}

double Polynomial::eval_scale(Complex z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(Complex z0) const {
  // Repeated synthetic division by (z - z0).
  std::vector<Complex> c = coeffs_;
  const size_t n = c.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t k = n - 1; k > i; --k) c[k - 1] += z0 * c[k];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::deflate(Complex root) const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> q(coeffs_.size() - 1);
  Complex acc{};
  for (size_t k = coeffs_.size() - 1; k > 0; --k) {
    acc = acc * root + coeffs_[k];
    q[k - 1] = acc;
  }
  return Polynomial(std::move(q));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorKind::InvalidInput, "division by the zero polynomial");
  const int dn = degree();
  const int dd = divisor.degree();
  if (dn < dd) return {Polynomial{}, *this};
  std::vector<Complex> rem = coeffs_;
  std::vector<Complex> quo(static_cast<size_t>(dn - dd) + 1);
  const Complex lead = divisor.leading();
  for (int k = dn - dd; k >= 0; --k) {
    const Complex q = rem[static_cast<size_t>(k + dd)] / lead;
    quo[static_cast<size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(k + j)] -= q * divisor[j];
    rem[static_cast<size_t>(k + dd)] = Complex{};
  }
  rem.resize(static_cast<size_t>(std::max(dd, 0)));
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::reversed() const {
  std::vector<Complex> c(coeffs_.rbegin(), coeffs_.rend());
  return Polynomial(std::move(c));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double cut = rel_tol * max_abs_coeff();
  std::vector<Complex> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<Complex> c = coeffs_;
  for (auto& x : c) x = -x;
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (size_t k = 0; k < c.size(); ++k) c[k] = a[static_cast<int>(k)] + b[static_cast<int>(k)];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == Complex{}) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(Complex s, const Polynomial& p) {
  std::vector<Complex> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

Complex poly_eval(const Polynomial& p, Complex z) { return p.eval(z); }

Polynomial poly_derivative(const Polynomial& p) { return p.derivative(); }

double cauchy_radius(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return 0.0;
  const double lead = std::abs(p.leading());
  // g(x) = |c_n| - sum_{k<n} |c_k| x^{k-n} increases monotonically in x.
  auto g = [&](double x) {
    double s = 0.0;
    double xp = 1.0 / x;
    for (int k = n - 1; k >= 0; --k, xp /= x) s += std::abs(p[k]) * xp;
    return lead - s;
  };
  double hi = 1.0;
  for (int k = 0; k < n; ++k) hi = std::max(hi, 1.0 + std::abs(p[k]) / lead);
  double lo = 0.0;
  if (g(hi) < 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == 0.0 || g(mid) < 0.0) lo = mid; else hi = mid;
  }
  return hi;
}

namespace {

struct NewtonRatio {
  Complex ratio;      // p(z) / p'(z)
  bool at_noise;      // |p(z)| within the rounding bound
  double residual;    // |p(z)| / (max|c| max(1,|z|)^n)
};

NewtonRatio newton_ratio(const Polynomial& p, const Polynomial& rev, Complex z) {
  const int n = p.degree();
  const double maxc = p.max_abs_coeff();
  const double noise = 4.0 * kEps * (n + 1);
  if (std::abs(z) <= 1.0) {
    const auto jet = p.eval_jet(z);
    const double scale = p.eval_scale(z);
    return {jet.value / jet.d1, std::abs(jet.value) <= noise * scale, std::abs(jet.value) / maxc};
  }
  // p(z) = z^n q(w), w = 1/z, keeps the evaluation bounded for large |z|.
  const Complex w = 1.0 / z;
  const auto jet = rev.eval_jet(w);
  const double scale = rev.eval_scale(w);
  const Complex denom = static_cast<double>(n) * jet.value - w * jet.d1;
  return {z * jet.value / denom, std::abs(jet.value) <= noise * scale, std::abs(jet.value) / maxc};
}

}  // namespace

std::vector<Complex> poly_roots(const Polynomial& p_in, const RootOptions& opts) {
  if (p_in.degree() < 1) throw Error(ErrorKind::InvalidInput, "poly_roots needs degree >= 1");

  // Exact zero roots are split off first.
  std::vector<Complex> roots;
  const auto& c = p_in.coeffs();
  size_t lowest = 0;
  while (lowest < c.size() && c[lowest] == Complex{}) ++lowest;
  roots.assign(lowest, Complex{});
  const Polynomial p(std::vector<Complex>(c.begin() + static_cast<long>(lowest), c.end()));
  const int n = p.degree();
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }

  const Polynomial rev = p.reversed();
  const double radius = cauchy_radius(p);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> z(static_cast<size_t>(n));
  const double phase0 = 0.4;
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * k / n + phase0 + opts.perturbation * unit(rng);
    z[static_cast<size_t>(k)] = std::polar(radius, phi);
  }

  std::vector<char> done(static_cast<size_t>(n), 0);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    bool all_done = true;
    for (size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      const auto nr = newton_ratio(p, rev, z[i]);
      if (nr.at_noise) {
        done[i] = 1;
        continue;
      }
      Complex sum{};
      for (size_t j = 0; j < z.size(); ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const Complex w = nr.ratio / (1.0 - nr.ratio * sum);
      if (!is_finite(w)) {
        done[i] = 1;
        continue;
      }
      z[i] -= w;
      if (std::abs(w) <= kEps * std::abs(z[i])) done[i] = 1;
      else all_done = false;
    }
    if (all_done) break;
  }

  for (const Complex& r : z) {
    const auto nr = newton_ratio(p, rev, r);
    // For |r| > 1 the residual comes from the reversed form, which already
    // divides out |r|^n.
    if (!(nr.residual <= opts.tol || nr.at_noise)) {
      throw Error(ErrorKind::NonConvergence, "Aberth iteration did not reach the residual tolerance");
    }
    roots.push_back(r);
  }
  return roots;
}

namespace {

// A root of multiplicity m is a simple root of p^(m-1); Newton there recovers
// full accuracy that the cluster mean lacks.
Complex polish_multiple_root(const Polynomial& p, Complex start, int m) {
  Polynomial q = p;
  for (int k = 1; k < m; ++k) q = q.derivative();
  const Polynomial dq = q.derivative();
  Complex z = start;
  for (int it = 0; it < 8; ++it) {
    const Complex d = dq(z);
    if (d == Complex{}) break;
    const Complex step = q(z) / d;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return std::abs(z - start) <= 1e-3 * (1.0 + std::abs(start)) && is_finite(z) ? z : start;
}

}  // namespace

std::vector<RootCluster> root_clusters(const Polynomial& p, double cluster_tol,
                                       const RootOptions& opts) {
  if (p.degree() < 1) return {};
  const auto roots = poly_roots(p, opts);
  const size_t n = roots.size();
  // Single-linkage grouping.
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double tol = cluster_tol * (1.0 + std::max(std::abs(roots[i]), std::abs(roots[j])));
      if (std::abs(roots[i] - roots[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<RootCluster> out;
  std::vector<long> slot(n, -1);
  std::vector<Complex> sums;
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.push_back({Complex{}, 0});
      sums.emplace_back();
    }
    auto& cl = out[static_cast<size_t>(slot[r])];
    sums[static_cast<size_t>(slot[r])] += roots[i];
    ++cl.multiplicity;
  }
  for (size_t k = 0; k < out.size(); ++k) {
    auto& cl = out[k];
    cl.root = sums[k] / static_cast<double>(cl.multiplicity);
    if (cl.multiplicity > 1) cl.root = polish_multiple_root(p, cl.root, cl.multiplicity);
  }
  return out;
}

}  // namespace harmzero
