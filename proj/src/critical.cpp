#include "harmzero/critical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "harmzero/newton.hpp"

namespace harmzero {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kNodeTol = 1e-11;
constexpr double kGlueTol = 1e-6;
constexpr int kMedianWindow = 32;
constexpr int kMedianWarmup = 8;

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

double window_median(const std::vector<double>& steps) {
  const size_t n = std::min<size_t>(steps.size(), kMedianWindow);
  std::vector<double> w(steps.end() - static_cast<long>(n), steps.end());
  std::nth_element(w.begin(), w.begin() + static_cast<long>(n / 2), w.end());
  return w[n / 2];
}

// Indices of points that have a partner within the separation tolerance.
std::vector<size_t> colliding(const std::vector<Complex>& pts, double sep_tol) {
  std::vector<size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pts[a].real() < pts[b].real(); });
  double window = 0.0;
  for (const auto& z : pts) window = std::max(window, sep_tol * (1.0 + std::abs(z)));
  std::vector<char> hit(pts.size(), 0);
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = i + 1; j < order.size(); ++j) {
      const Complex a = pts[order[i]];
      const Complex b = pts[order[j]];
      if (b.real() - a.real() > window) break;
      if (std::abs(a - b) <= sep_tol * (1.0 + std::max(std::abs(a), std::abs(b)))) {
        hit[order[i]] = hit[order[j]] = 1;
      }
    }
  }
  std::vector<size_t> out;
  for (size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

struct NodeGeometry {
  Complex f;
  Complex tangent;
  double psi;
  double psi_scale;
};

NodeGeometry node_geometry(const HarmonicMapping& f, const RationalFunction& omega, Complex z, double t) {
  const auto d = f.evaluate(z);
  const auto w = omega.eval_jet(z);
  const Complex gp = Complex(0.0, 1.0) * std::polar(1.0, t) / w.d1;
  const double psi = 2.0 * (std::polar(1.0, 0.5 * t) * d.h1 * gp).real();
  return {d.f, std::polar(1.0, -0.5 * t) * psi, psi, 2.0 * std::abs(d.h1) * std::abs(gp)};
}

}  // namespace

namespace {

bool resolve_and_match(const Polynomial& num, const Polynomial& den, const PhaseTracker& tracker,
                       double t, const std::vector<Complex>& from, std::vector<Complex>& to) {
  std::vector<Complex> roots;
  try {
    roots = poly_roots(num - std::polar(1.0, t) * den);
  } catch (const Error&) {
    return false;
  }
  if (roots.size() != from.size()) return false;
  for (auto& z : roots) {
    if (!tracker.correct(z, t)) return false;
  }
  if (!colliding(roots, 1e-8).empty()) return false;
  struct Pair {
    double d;
    size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(from.size() * roots.size());
  for (size_t i = 0; i < from.size(); ++i) {
    for (size_t j = 0; j < roots.size(); ++j) pairs.push_back({std::abs(from[i] - roots[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  std::vector<char> used_from(from.size(), 0);
  std::vector<char> used_to(roots.size(), 0);
  size_t matched = 0;
  for (const auto& p : pairs) {
    if (used_from[p.i] || used_to[p.j]) continue;
    used_from[p.i] = used_to[p.j] = 1;
    to[p.i] = roots[p.j];
    ++matched;
  }
  return matched == from.size();
}

}  // namespace

bool PhaseTracker::correct(Complex& z, double t) const {
  const Complex target = std::polar(1.0, t);
  double prev = INFINITY;
  RationalFunction::Jet jet;
  for (int it = 0; it < 30; ++it) {
    if (!omega_->try_eval_jet(z, jet) || jet.d1 == Complex{}) return false;
    const Complex r = jet.value - target;
    const Complex step = r / jet.d1;
    const double len = std::abs(step);
    if (!std::isfinite(len)) return false;
    z -= step;
    if (len <= 4.0 * kEps * (1.0 + std::abs(z))) break;
    if (std::abs(r) <= kNodeTol && len >= 0.5 * prev) break;
    prev = len;
  }
  if (!omega_->try_eval_jet(z, jet)) return false;
  return std::abs(jet.value - target) <= kNodeTol;
}

Complex PhaseTracker::velocity(Complex z, double t) const {
  return Complex(0.0, 1.0) * std::polar(1.0, t) / omega_->eval_jet(z).d1;
}

bool PhaseTracker::advance(Complex z0, double t0, double t1, Complex& z1, int max_depth,
                           int min_depth) const {
  if (t0 == t1) {
    z1 = z0;
    return true;
  }
  return advance_rec(z0, t0, t1, z1, 0, max_depth, min_depth);
}

bool PhaseTracker::advance_rec(Complex z0, double t0, double t1, Complex& z1, int depth,
                               int max_depth, int min_depth) const {
  if (depth >= min_depth) {
    RationalFunction::Jet jet;
    if (omega_->try_eval_jet(z0, jet) && jet.d1 != Complex{}) {
      const double h = t1 - t0;
      const Complex e = std::polar(1.0, t0);
      const Complex w1 = jet.d1;
      const Complex v = Complex(0.0, 1.0) * e / w1;
      const Complex a = -e / w1 + e * e * jet.d2 / (w1 * w1 * w1);
      const Complex pred = z0 + h * v + 0.5 * h * h * a;
      Complex z = pred;
      if (correct(z, t1)) {
        const double move = std::abs(pred - z0);
        if (std::abs(z - pred) <= 0.05 * move + 1e-10 * (1.0 + std::abs(z))) {
          z1 = z;
          return true;
        }
      }
    }
    if (depth >= max_depth) return false;
  }
  const double tm = 0.5 * (t0 + t1);
  Complex zm;
  return advance_rec(z0, t0, tm, zm, depth + 1, max_depth, min_depth) &&
         advance_rec(zm, tm, t1, z1, depth + 1, max_depth, min_depth);
}

std::vector<CriticalCurve> trace_critical_curves(const HarmonicMapping& f, const TraceOptions& opts) {
  if (opts.k_nodes < 4) throw Error(ErrorKind::InvalidInput, "k_nodes must be at least 4");
  const RationalFunction& omega = f.dilatation();
  if (omega.is_zero()) return {};
  const Polynomial& num = omega.numerator();
  const Polynomial& den = omega.denominator();
  if (num.degree() <= 0 && den.degree() <= 0) {
    if (std::abs(std::abs(num[0]) - 1.0) <= 1e-12) {
      throw Error(ErrorKind::DegenerateMapping, "the dilatation is a unimodular constant");
    }
    return {};
  }
  if (num.degree() == den.degree() && std::abs(std::abs(num.leading()) - 1.0) <= 1e-10) {
    throw Error(ErrorKind::DegenerateMapping, "|omega(infinity)| = 1: unbounded critical set");
  }

  const PhaseTracker tracker(omega);
  auto starts = poly_roots(num - den);
  for (auto& z : starts) {
    if (!tracker.correct(z, 0.0)) throw Error(ErrorKind::TraceFailure, "cannot solve omega(z) = 1");
  }
  if (!colliding(starts, 1e-8).empty()) {
    throw Error(ErrorKind::TraceFailure, "omega(z) = 1 has a multiple solution");
  }

  const size_t m = starts.size();
  const int k = opts.k_nodes;
  const double dt = 2.0 * kPi / k;
  std::vector<std::vector<Complex>> arcs(m);
  std::vector<std::vector<double>> steps(m);
  std::vector<Complex> current = starts;
  for (size_t i = 0; i < m; ++i) {
    arcs[i].reserve(static_cast<size_t>(k));
    arcs[i].push_back(starts[i]);
  }

  // Grid nodes are uniform unless a node lands on a phase where two arcs
  // meet (a double root of omega(z) = e^{it}); such a node is nudged.
  std::vector<double> grid(static_cast<size_t>(k) + 1);
  for (int j = 0; j < k; ++j) grid[static_cast<size_t>(j)] = j * dt;
  grid[static_cast<size_t>(k)] = 2.0 * kPi;
  constexpr double kNudges[] = {0.0, 1e-3, -1e-3, 7e-3, -7e-3, 3e-2};

  std::vector<Complex> next(m);
  for (int j = 1; j <= k; ++j) {
    const double t0 = grid[static_cast<size_t>(j) - 1];
    bool done = false;
    for (const double nudge : kNudges) {
      if (j == k && nudge != 0.0) break;  // the closing node must stay at 2 pi
      const double t1 = grid[static_cast<size_t>(j)] + nudge * dt;
      auto step_one = [&](size_t i, int min_depth) {
        return tracker.advance(current[i], t0, t1, next[i], opts.max_depth, min_depth);
      };
      bool ok = true;
      for (size_t i = 0; i < m && ok; ++i) {
        ok = step_one(i, 0);
        if (ok && steps[i].size() >= kMedianWarmup &&
            std::abs(next[i] - current[i]) > 10.0 * window_median(steps[i])) {
          ok = step_one(i, 3);
        }
      }
      for (int extra = 1; ok; ++extra) {
        const auto hit = colliding(next, 1e-8);
        if (hit.empty()) break;
        if (2 * extra > opts.max_depth) {
          ok = false;
          break;
        }
        for (size_t i : hit) ok = ok && step_one(i, 2 * extra);
      }
      if (ok) {
        grid[static_cast<size_t>(j)] = t1;
        done = true;
        break;
      }
    }
    if (!done) {
      // Two arcs meet at a corner: a phase where omega(z) = e^{it} has a
      // double root. Re-solve past it and continue each arc from the
      // nearest new root; either pairing yields the same oriented curves.
      const double t1 = j < k ? grid[static_cast<size_t>(j)] + 1e-3 * dt : 2.0 * kPi;
      if (!resolve_and_match(num, den, tracker, t1, current, next)) {
        throw Error(ErrorKind::TraceFailure, "continuation of the critical arcs failed");
      }
      grid[static_cast<size_t>(j)] = t1;
    }
    for (size_t i = 0; i < m; ++i) {
      steps[i].push_back(std::abs(next[i] - current[i]));
      current[i] = next[i];
      if (j < k) arcs[i].push_back(current[i]);
    }
  }

  // Arc i ends where arc sigma[i] starts.
  std::vector<size_t> sigma(m);
  std::vector<char> taken(m, 0);
  for (size_t i = 0; i < m; ++i) {
    size_t best = m;
    double best_d = INFINITY;
    for (size_t s = 0; s < m; ++s) {
      const double d = std::abs(current[i] - starts[s]);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    if (best == m || best_d > kGlueTol * (1.0 + std::abs(starts[best])) || taken[best]) {
      throw Error(ErrorKind::TraceFailure, "critical arcs do not glue into closed curves");
    }
    taken[best] = 1;
    sigma[i] = best;
  }

  std::vector<CriticalCurve> curves;
  std::vector<char> visited(m, 0);
  for (size_t i = 0; i < m; ++i) {
    if (visited[i]) continue;
    CriticalCurve c;
    c.winding = 0;
    for (size_t a = i; !visited[a]; a = sigma[a]) {
      visited[a] = 1;
      const double offset = 2.0 * kPi * c.winding;
      for (int j = 0; j < k; ++j) {
        c.params.push_back(offset + grid[static_cast<size_t>(j)]);
        c.points.push_back(arcs[a][static_cast<size_t>(j)]);
      }
      ++c.winding;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

Complex curve_point(const HarmonicMapping& f, const CriticalCurve& curve, double t) {
  const double period = curve.period();
  t = std::fmod(t, period);
  if (t < 0.0) t += period;
  const auto it = std::upper_bound(curve.params.begin(), curve.params.end(), t);
  const size_t k = it == curve.params.begin() ? 0 : static_cast<size_t>(it - curve.params.begin()) - 1;
  const size_t next = (k + 1) % curve.points.size();
  const double t_next = k + 1 < curve.params.size() ? curve.params[k + 1] : period;
  const PhaseTracker tracker(f.dilatation());
  Complex z;
  if (!tracker.advance(curve.points[k], curve.params[k], t, z) &&
      !tracker.advance(curve.points[next], t_next, t, z)) {
    throw Error(ErrorKind::TraceFailure, "cannot reach the requested curve parameter");
  }
  return z;
}

std::vector<CausticCurve> caustics(const HarmonicMapping& f, const std::vector<CriticalCurve>& curves) {
  std::vector<CausticCurve> out;
  if (curves.empty()) return out;
  const RationalFunction& omega = f.dilatation();
  for (const auto& c : curves) {
    CausticCurve cc;
    const size_t n = c.points.size();
    cc.points.reserve(n);
    cc.tangents.reserve(n);
    cc.psi.reserve(n);
    cc.psi_scale.reserve(n);
    double max_psi = 0.0;
    double max_scale = 0.0;
    for (size_t k = 0; k < n; ++k) {
      const auto g = node_geometry(f, omega, c.points[k], c.params[k]);
      cc.points.push_back(g.f);
      cc.tangents.push_back(g.tangent);
      cc.psi.push_back(g.psi);
      cc.psi_scale.push_back(g.psi_scale);
      max_psi = std::max(max_psi, std::abs(g.psi));
      max_scale = std::max(max_scale, g.psi_scale);
    }
    // psi(t + period) = (-1)^winding psi(t)
    const double wrap_sign = (c.winding % 2 == 0) ? 1.0 : -1.0;
    for (size_t k = 0; k < n; ++k) {
      const double next = (k + 1 < n) ? cc.psi[k + 1] : wrap_sign * cc.psi[0];
      if (cc.psi[k] * next < 0.0) cc.cusp_indices.push_back(k);
    }
    cc.not_light = max_psi <= 1e-8 * max_scale;
    out.push_back(std::move(cc));
  }
  return out;
}

int winding_number(const CausticCurve& caustic, Complex eta, double guard) {
  const auto& p = caustic.points;
  if (p.empty()) return 0;
  double total = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    const Complex a = p[k];
    const Complex b = p[(k + 1) % p.size()];
    if (point_segment_distance(eta, a, b) <= guard) {
      throw Error(ErrorKind::GuardViolation, "point lies on the caustic");
    }
    total += std::arg((b - eta) / (a - eta));
  }
  const double w = total / (2.0 * kPi);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.3) throw Error(ErrorKind::GuardViolation, "winding sum is not an integer");
  return static_cast<int>(r);
}

namespace {

double refined_angle(const HarmonicMapping& f, const PhaseTracker& tracker, Complex eta, double guard,
                     Complex za, double ta, Complex fa, Complex zb, double tb, Complex fb, int depth) {
  const double dist = point_segment_distance(eta, fa, fb);
  if (dist <= guard) throw Error(ErrorKind::GuardViolation, "point lies on the caustic");
  if (dist > 2.0 * std::abs(fb - fa) || depth >= 40) return std::arg((fb - eta) / (fa - eta));
  const double tm = 0.5 * (ta + tb);
  Complex zm;
  // Near a point where two arcs meet the parametrization has a branch
  // point, and only one of the two endpoints continues past the midpoint.
  if (!tracker.advance(za, ta, tm, zm) && !tracker.advance(zb, tb, tm, zm)) {
    throw Error(ErrorKind::TraceFailure, "cannot resample the critical curve");
  }
  const Complex fm = f.eval(zm);
  return refined_angle(f, tracker, eta, guard, za, ta, fa, zm, tm, fm, depth + 1) +
         refined_angle(f, tracker, eta, guard, zm, tm, fm, zb, tb, fb, depth + 1);
}

}  // namespace

int winding_number(const HarmonicMapping& f, const CriticalCurve& curve, const CausticCurve& caustic,
                   Complex eta, double guard) {
  const auto& p = caustic.points;
  if (p.empty()) return 0;
  const PhaseTracker tracker(f.dilatation());
  const size_t n = p.size();
  double total = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double tb = (k + 1 < n) ? curve.params[k + 1] : curve.period();
    total += refined_angle(f, tracker, eta, guard, curve.points[k], curve.params[k], p[k],
                           curve.points[(k + 1) % n], tb, p[(k + 1) % n], 0);
  }
  const double w = total / (2.0 * kPi);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.3) throw Error(ErrorKind::GuardViolation, "winding sum is not an integer");
  return static_cast<int>(r);
}

int total_winding(const HarmonicMapping& f, const std::vector<CriticalCurve>& curves,
                  const std::vector<CausticCurve>& caustics, Complex eta, double guard) {
  int sum = 0;
  for (size_t i = 0; i < curves.size(); ++i) {
    if (caustics[i].not_light) continue;
    sum += winding_number(f, curves[i], caustics[i], eta, guard);
  }
  return sum;
}

std::vector<PolylineCrossing> polyline_ray_crossings(const std::vector<std::vector<Complex>>& curves,
                                                     double theta, Complex origin, double max_length) {
  const Complex rot = std::polar(1.0, -theta);
  std::vector<PolylineCrossing> out;
  for (size_t c = 0; c < curves.size(); ++c) {
    const auto& p = curves[c];
    const size_t n = p.size();
    if (n < 2) continue;
    for (size_t k = 0; k < n; ++k) {
      const Complex qa = (p[k] - origin) * rot;
      const Complex qb = (p[(k + 1) % n] - origin) * rot;
      if ((qa.imag() >= 0.0) == (qb.imag() >= 0.0)) continue;
      const double s = qa.imag() / (qa.imag() - qb.imag());
      const Complex x = qa + s * (qb - qa);
      if (x.real() <= 0.0 || x.real() >= max_length) continue;
      out.push_back({c, k, origin + std::polar(x.real(), theta)});
    }
  }
  std::sort(out.begin(), out.end(), [&](const PolylineCrossing& a, const PolylineCrossing& b) {
    return std::abs(a.point - origin) > std::abs(b.point - origin);
  });
  return out;
}

std::vector<RayCrossing> ray_intersections(const HarmonicMapping& f,
                                           const std::vector<CriticalCurve>& curves,
                                           const std::vector<CausticCurve>& caustics, double theta,
                                           const RayOptions& opts, Complex origin, double max_length) {
  std::vector<RayCrossing> out;
  if (curves.empty()) return out;
  const RationalFunction& omega = f.dilatation();
  const PhaseTracker tracker(omega);
  const Complex rot = std::polar(1.0, -theta);
  const Complex dir = -std::polar(1.0, theta);

  std::vector<std::vector<Complex>> light;
  std::vector<size_t> light_index;
  for (size_t i = 0; i < caustics.size(); ++i) {
    if (caustics[i].not_light) continue;
    light.push_back(caustics[i].points);
    light_index.push_back(i);
  }

  for (const auto& pc : polyline_ray_crossings(light, theta, origin, max_length)) {
    const size_t ci = light_index[pc.curve_index];
    const auto& curve = curves[ci];
    const auto& cau = caustics[ci];
    const size_t n = curve.points.size();
    const size_t k = pc.node;
    double lo = curve.params[k];
    double hi = (k + 1 < n) ? curve.params[k + 1] : curve.period();
    Complex z_lo = curve.points[k];
    const bool lo_positive = ((cau.points[k] - origin) * rot).imag() >= 0.0;
    Complex z = z_lo;
    Complex xi = cau.points[k];
    double t = lo;
    bool ok = true;
    for (int it = 0; it < 200; ++it) {
      const double tm = 0.5 * (lo + hi);
      Complex zm;
      if (!tracker.advance(z_lo, lo, tm, zm)) {
        ok = false;
        break;
      }
      const Complex fm = f.eval(zm);
      const double q = ((fm - origin) * rot).imag();
      z = zm;
      xi = fm;
      t = tm;
      if (std::abs(q) <= 1e-12 * (1.0 + std::abs(fm)) || hi - lo <= 4.0 * kEps * (1.0 + hi)) break;
      if ((q >= 0.0) == lo_positive) {
        lo = tm;
        z_lo = zm;
      } else {
        hi = tm;
      }
    }
    RayCrossing rc;
    rc.curve_index = ci;
    rc.node_param = t;
    rc.preimage = z;
    if (!ok) {
      rc.xi = pc.point;
      rc.distance = std::abs(pc.point - origin);
      rc.kind = CrossingKind::Suspect;
      out.push_back(rc);
      continue;
    }
    const double along = ((xi - origin) * rot).real();
    if (along <= 0.0 || along >= max_length) continue;
    rc.xi = xi;
    rc.distance = along;
    const auto g = node_geometry(f, omega, z, t);
    rc.tangent = g.tangent;
    rc.psi = g.psi;
    const double cross = (std::conj(g.tangent) * dir).imag();
    rc.delta = cross > 0.0 ? 2 : -2;
    const bool near_cusp = std::abs(g.psi) < opts.cusp_guard * g.psi_scale;
    const bool tangential = std::abs(cross) <= opts.tangential_tol * std::abs(g.tangent);
    rc.kind = (near_cusp || tangential) ? CrossingKind::Suspect : CrossingKind::SimpleFold;
    out.push_back(rc);
  }

  std::sort(out.begin(), out.end(),
            [](const RayCrossing& a, const RayCrossing& b) { return a.distance > b.distance; });
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    const double tol = opts.coincidence_tol * (1.0 + std::abs(out[i].xi));
    if (std::abs(out[i].xi - out[i + 1].xi) <= tol) {
      out[i].kind = CrossingKind::Suspect;
      out[i + 1].kind = CrossingKind::Suspect;
    }
  }
  return out;
}

std::vector<RayCrossing> segment_intersections(const HarmonicMapping& f,
                                               const std::vector<CriticalCurve>& curves,
                                               const std::vector<CausticCurve>& caustics, Complex a,
                                               Complex b, const RayOptions& opts) {
  const double len = std::abs(b - a);
  if (len == 0.0) return {};
  // A ray from b back towards a: its inward direction is a -> b.
  auto out = ray_intersections(f, curves, caustics, std::arg(a - b), opts, b, len);
  for (auto& c : out) c.distance = len - c.distance;
  return out;
}

double max_caustic_modulus(const std::vector<CausticCurve>& caustics) {
  double m = 0.0;
  for (const auto& c : caustics) {
    for (const auto& p : c.points) m = std::max(m, std::abs(p));
  }
  return m;
}

double caustic_distance(const std::vector<CausticCurve>& caustics, Complex eta) {
  double d = INFINITY;
  for (const auto& c : caustics) {
    const size_t n = c.points.size();
    if (c.not_light) {
      for (const auto& p : c.points) d = std::min(d, std::abs(p - eta));
      continue;
    }
    for (size_t k = 0; k < n; ++k) {
      d = std::min(d, point_segment_distance(eta, c.points[k], c.points[(k + 1) % n]));
    }
  }
  return d;
}

void write_curves_csv(std::ostream& out, const std::vector<CriticalCurve>& curves,
                      const std::vector<CausticCurve>& caustics) {
  const auto old_precision = out.precision(17);
  out << "curve_id,t,re_z,im_z,re_fz,im_fz,psi\n";
  for (size_t c = 0; c < curves.size(); ++c) {
    const auto& cv = curves[c];
    for (size_t k = 0; k < cv.points.size(); ++k) {
      const Complex fz = c < caustics.size() ? caustics[c].points[k] : Complex{};
      const double psi = c < caustics.size() ? caustics[c].psi[k] : 0.0;
      out << c << ',' << cv.params[k] << ',' << cv.points[k].real() << ',' << cv.points[k].imag() << ','
          << fz.real() << ',' << fz.imag() << ',' << psi << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace harmzero
