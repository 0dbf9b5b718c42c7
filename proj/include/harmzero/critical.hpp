#pragma once

#include <iosfwd>
#include <vector>

#include "harmzero/harmonic.hpp"

namespace harmzero {

/// A closed critical curve sampled at omega(gamma(t)) = e^{it}.
///
/// The curve is glued from `winding` arcs of the phase equation, so its
/// parameter runs over [0, 2 pi winding). Nodes are not repeated: the node
/// after the last one is the first node again at t = 2 pi winding.
struct CriticalCurve {
  std::vector<double> params;
  std::vector<Complex> points;
  bool closed = true;
  int winding = 1;

  double period() const { return 2.0 * kPi * winding; }
};

/// Image f(gamma(t)) of a critical curve with tangent data at each node.
struct CausticCurve {
  std::vector<Complex> points;
  std::vector<Complex> tangents;  // tau = e^{-it/2} psi
  std::vector<double> psi;
  /// 2 |h'(gamma)| |gamma'|, the natural size of psi at each node.
  std::vector<double> psi_scale;
  /// Node k is listed when psi changes sign between node k and its successor.
  std::vector<size_t> cusp_indices;
  /// f is (numerically) constant along the curve: the caustic is a point.
  bool not_light = false;
};

struct TraceOptions {
  int k_nodes = 1024;
  int max_depth = 12;
};

/// Newton continuation for the phase equation omega(z) = e^{it}.
class PhaseTracker {
 public:
  explicit PhaseTracker(const RationalFunction& omega) : omega_(&omega) {}

  /// Polishes z onto omega(z) = e^{it}; false when Newton fails.
  bool correct(Complex& z, double t) const;
  /// gamma'(t) = i e^{it} / omega'(gamma(t)).
  Complex velocity(Complex z, double t) const;
  /// Moves a solution from t0 to t1 with recursive step halving. The
  /// step is split `min_depth` times before any attempt is made.
  bool advance(Complex z0, double t0, double t1, Complex& z1, int max_depth = 12,
               int min_depth = 0) const;

 private:
  bool advance_rec(Complex z0, double t0, double t1, Complex& z1, int depth, int max_depth,
                   int min_depth) const;
  const RationalFunction* omega_;
};

/// Solves omega(z) = 1, continues every root over a uniform grid in t, and
/// glues the arcs into closed curves. Throws DegenerateMapping when omega is
/// a unimodular constant or when the critical set is unbounded; an analytic
/// mapping or a constant omega off the unit circle gives an empty list.
std::vector<CriticalCurve> trace_critical_curves(const HarmonicMapping& f,
                                                 const TraceOptions& opts = {});

/// The point of the curve at parameter t, found by continuation from the
/// nearest preceding node.
Complex curve_point(const HarmonicMapping& f, const CriticalCurve& curve, double t);

std::vector<CausticCurve> caustics(const HarmonicMapping& f, const std::vector<CriticalCurve>& curves);

/// Winding number of the closed caustic polyline around eta. Throws
/// GuardViolation when eta is within `guard` of the polyline or the angle
/// sum is not close to an integer.
int winding_number(const CausticCurve& caustic, Complex eta, double guard = 1e-9);

/// As above, but segments passing close to eta are resampled from the
/// critical curve so the answer follows the true caustic rather than its
/// chords.
int winding_number(const HarmonicMapping& f, const CriticalCurve& curve, const CausticCurve& caustic,
                   Complex eta, double guard = 1e-9);

/// Sum over all light caustics of the refined winding number.
int total_winding(const HarmonicMapping& f, const std::vector<CriticalCurve>& curves,
                  const std::vector<CausticCurve>& caustics, Complex eta, double guard);

enum class CrossingKind { SimpleFold, Suspect };

struct RayCrossing {
  Complex xi;
  /// Distance from the ray origin to xi.
  double distance = 0.0;
  size_t curve_index = 0;
  double node_param = 0.0;
  Complex preimage;
  CrossingKind kind = CrossingKind::SimpleFold;
  Complex tangent;
  double psi = 0.0;
  /// Change in the number of preimages when the ray is traversed towards
  /// its origin: 2 sign(Im(conj(tau) d)) with d = -e^{i theta}.
  int delta = 0;
};

struct RayOptions {
  /// |psi| below cusp_guard * 2|h'||gamma'| marks a crossing near a cusp.
  double cusp_guard = 1e-6;
  /// Crossings closer than this (relative) coincide.
  double coincidence_tol = 1e-10;
  /// |sin| of the crossing angle below this is treated as tangential.
  double tangential_tol = 1e-6;
};

/// Intersections of the light caustics with the ray
/// {origin + s e^{i theta}: 0 < s < max_length}, refined on the critical
/// curves and sorted by decreasing distance from the origin. With the
/// default origin this is decreasing modulus.
std::vector<RayCrossing> ray_intersections(const HarmonicMapping& f,
                                           const std::vector<CriticalCurve>& curves,
                                           const std::vector<CausticCurve>& caustics, double theta,
                                           const RayOptions& opts = {}, Complex origin = 0.0,
                                           double max_length = INFINITY);

/// Crossings of the directed segment a -> b; `delta` refers to travel from a
/// to b. Sorted by distance from a, nearest first.
std::vector<RayCrossing> segment_intersections(const HarmonicMapping& f,
                                               const std::vector<CriticalCurve>& curves,
                                               const std::vector<CausticCurve>& caustics, Complex a,
                                               Complex b, const RayOptions& opts = {});

/// Intersections of closed polylines with a ray, by linear interpolation
/// only. Returns (curve index, segment start node, crossing point).
struct PolylineCrossing {
  size_t curve_index;
  size_t node;
  Complex point;
};
std::vector<PolylineCrossing> polyline_ray_crossings(const std::vector<std::vector<Complex>>& curves,
                                                     double theta, Complex origin = 0.0,
                                                     double max_length = INFINITY);

double max_caustic_modulus(const std::vector<CausticCurve>& caustics);

/// Minimal distance from eta to any caustic polyline; point caustics count by
/// their nodes. Infinity when there are no caustics.
double caustic_distance(const std::vector<CausticCurve>& caustics, Complex eta);

/// CSV with columns curve_id,t,re_z,im_z,re_fz,im_fz,psi.
void write_curves_csv(std::ostream& out, const std::vector<CriticalCurve>& curves,
                      const std::vector<CausticCurve>& caustics);

}  // namespace harmzero
