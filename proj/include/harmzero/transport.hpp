#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "harmzero/critical.hpp"
#include "harmzero/newton.hpp"

namespace harmzero {

enum class Provenance { Carried, SpawnPlus, SpawnMinus };

struct PredictionSet {
  std::vector<Complex> points;
  std::vector<Provenance> provenance;

  size_t size() const { return points.size(); }
};

struct PathSegment {
  std::optional<RayCrossing> crossing;
  int expected_delta = 0;
  /// Number of refinements that produced this segment from an original one.
  int depth = 0;
};

/// Nodes eta_1, ..., eta_m = target; segments[i] joins nodes[i] and nodes[i+1].
struct TransportPath {
  std::vector<double> thetas_tried;
  double theta = 0.0;
  std::vector<Complex> nodes;
  std::vector<PathSegment> segments;
  int refinements = 0;
};

struct SolveOptions {
  /// Angle of the first ray; later restarts draw angles from the seeded RNG.
  std::optional<double> theta;
  TraceOptions trace;
  RayOptions ray;
  NewtonOptions newton;
  double sep_tol = 1e-8;
  /// Caustic guard distance relative to 1 + modulus scale.
  double guard = 1e-9;
  int max_restarts = 25;
  int max_refine_depth = 10;
  int max_doublings = 40;
};

struct SolveReport {
  Complex target;
  std::vector<Complex> zeros;
  std::vector<double> residuals;
  std::vector<double> jacobians;
  long newton_iterations = 0;
  int steps = 0;
  int refinements = 0;
  int restarts = 0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  int pole_order = 0;
  int winding_sum = 0;
  int expected_count = 0;

  double max_residual() const;
};

/// Critical curves and caustics, computed once per mapping.
struct CriticalData {
  std::vector<CriticalCurve> curves;
  std::vector<CausticCurve> caustics;
  double max_modulus = 0.0;
};

CriticalData compute_critical_data(const HarmonicMapping& f, const TraceOptions& opts = {});

/// 2 e^{i theta} max |caustic|, or 2 e^{i theta} (1 + pole scale) when f has
/// no caustic of positive size.
Complex initial_eta(const HarmonicMapping& f, const std::vector<CausticCurve>& caustics, double theta);

/// Starting points from the pole expansions: n points per pole of order n.
PredictionSet initial_points(const HarmonicMapping& f, Complex eta);

struct InitialPhase {
  Complex eta;
  PredictionSet prediction;
  std::vector<Complex> solutions;
  long iterations = 0;
};

/// Newton from every initial point; throws InitialPhaseFailure unless all
/// P(f) limits converge and are distinct.
InitialPhase initial_solutions(const HarmonicMapping& f, Complex eta, const SolveOptions& opts = {});

/// Candidate path along the ray from `target` in direction theta, starting
/// at eta_1 = target + e^{i theta} start_distance. Throws RayRejected for a
/// suspect crossing, a node on a caustic, or counts that disagree with the
/// winding numbers.
TransportPath build_candidate_path(const HarmonicMapping& f, const CriticalData& crit, double theta,
                                   Complex target, double start_distance, const SolveOptions& opts = {});

/// Prediction set for the step eta_k -> eta_k1 across `crossing`.
/// delta = +2 adds z_+ and z_-; delta = -2 removes the two carried solutions
/// attracted from z_+ and z_- at eta_k. Throws SpawnFailure.
PredictionSet crossing_prediction_set(const HarmonicMapping& f, const std::vector<Complex>& solutions,
                                      const RayCrossing& crossing, Complex eta_k, Complex eta_k1,
                                      int delta, const SolveOptions& opts = {});

enum class StepFailureMode { None, NonConvergence, Collision, CountMismatch };

const char* to_string(StepFailureMode mode);

struct StepOutcome {
  bool ok = false;
  StepFailureMode failure = StepFailureMode::None;
  /// Newton limits, aligned with the prediction points.
  std::vector<Complex> solutions;
  long iterations = 0;
};

StepOutcome step_transport(const HarmonicMapping& f, const PredictionSet& prediction, Complex eta_next,
                           size_t expected_count, const SolveOptions& opts = {});

/// Splits a failed segment: midpoint for a regular segment, quarter points
/// around a crossing. Throws RayRejected beyond the depth cap.
TransportPath refine(const TransportPath& path, size_t segment_index, int max_depth = 10);

SolveReport solve_all_zeros(const HarmonicMapping& f, std::uint64_t seed, const SolveOptions& opts = {});
SolveReport solve_preimages(const HarmonicMapping& f, Complex eta, std::uint64_t seed,
                            const SolveOptions& opts = {});
/// Variants reusing precomputed critical data.
SolveReport solve_preimages(const HarmonicMapping& f, const CriticalData& crit, Complex eta,
                            std::uint64_t seed, const SolveOptions& opts = {});

/// One solution trajectory of a homotopy trace.
struct HomotopyBranch {
  std::vector<Complex> etas;
  std::vector<Complex> points;
  /// The branch starts (ends) at a fold turning point instead of at the
  /// first (last) path node.
  bool starts_at_turning_point = false;
  bool ends_at_turning_point = false;
};

/// Carries all solutions densely along the polyline path_nodes with
/// samples_per_segment steps per edge, splitting branches at fold crossings.
std::vector<HomotopyBranch> trace_homotopy(const HarmonicMapping& f, const std::vector<Complex>& path_nodes,
                                           int samples_per_segment, const SolveOptions& opts = {});

}  // namespace harmzero
