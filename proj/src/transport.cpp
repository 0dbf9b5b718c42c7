#include "harmzero/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace harmzero {

namespace {

// A point caustic reports a modulus at rounding level; treat it as size zero.
bool has_extent(const HarmonicMapping& f, double max_modulus) {
  return max_modulus > 1e-12 * (1.0 + f.pole_scale());
}

void reject_bare_anchors(const HarmonicMapping& f) {
  if (!f.bare_log_anchors().empty()) {
    throw Error(ErrorKind::InvalidInput, "log anchors away from the poles of r and s are not supported");
  }
}

constexpr double kTwoPi = 2.0 * kPi;

// Portable uniform draw on [0, 2 pi): the standard distributions are not
// specified bit-for-bit across library implementations.
double draw_theta(std::mt19937_64& rng) {
  return kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double u = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + u * ab));
}

struct CrossingPrediction {
  PredictionSet set;
  // Indices of the carried solutions that stay in the set.
  std::vector<size_t> kept;
  Complex z0;
};

CrossingPrediction predict_crossing(const HarmonicMapping& f, const std::vector<Complex>& solutions,
                                    const RayCrossing& crossing, Complex eta_k, Complex eta_k1, int delta,
                                    const SolveOptions& opts) {
  if (delta != 2 && delta != -2) throw Error(ErrorKind::InvalidInput, "crossing delta must be +2 or -2");
  if (crossing.kind != CrossingKind::SimpleFold) {
    throw Error(ErrorKind::SpawnFailure, "crossing is not a simple fold");
  }
  const Complex z0 = crossing.preimage;
  const LocalJet jet = f.local_jet(z0);
  if (jet.a1 == Complex{} || jet.b1 == Complex{}) {
    throw Error(ErrorKind::SpawnFailure, "vanishing first derivative at the fold");
  }
  const Complex c = -(jet.a2 * std::conj(jet.b1) / jet.a1 + std::conj(jet.b2) * jet.a1 / std::conj(jet.b1));
  if (!(std::abs(c) > 0.0) || !is_finite(c)) throw Error(ErrorKind::SpawnFailure, "cusp-like fold data");

  // Spawned solutions live on the side of the fold where the count is larger.
  const Complex near_side = delta > 0 ? eta_k1 : eta_k;
  const double t = std::abs(near_side - crossing.xi) / std::abs(c);
  const Complex offset = Complex{0.0, 1.0} * std::sqrt(t * std::conj(jet.b1) / jet.a1);
  const Complex zp = z0 + offset;
  const Complex zm = z0 - offset;

  CrossingPrediction out;
  out.z0 = z0;
  if (delta > 0) {
    out.set.points = solutions;
    out.set.provenance.assign(solutions.size(), Provenance::Carried);
    out.set.points.push_back(zp);
    out.set.provenance.push_back(Provenance::SpawnPlus);
    out.set.points.push_back(zm);
    out.set.provenance.push_back(Provenance::SpawnMinus);
    for (size_t i = 0; i < solutions.size(); ++i) out.kept.push_back(i);
    return out;
  }

  const NewtonOutcome rp = newton_solve(f, eta_k, zp, opts.newton);
  const NewtonOutcome rm = newton_solve(f, eta_k, zm, opts.newton);
  if (!rp.converged() || !rm.converged()) {
    throw Error(ErrorKind::SpawnFailure, "removal seeds did not converge");
  }
  if (!pairwise_distinct({rp.limit, rm.limit}, opts.sep_tol)) {
    throw Error(ErrorKind::SpawnFailure, "removal seeds share a limit");
  }
  auto match = [&](Complex z) {
    size_t best = solutions.size();
    double best_d = INFINITY;
    for (size_t i = 0; i < solutions.size(); ++i) {
      const double d = std::abs(solutions[i] - z);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == solutions.size() || best_d > 1e-7 * (1.0 + std::abs(z))) {
      throw Error(ErrorKind::SpawnFailure, "removal limit is not a carried solution");
    }
    return best;
  };
  const size_t ip = match(rp.limit);
  const size_t im = match(rm.limit);
  if (ip == im) throw Error(ErrorKind::SpawnFailure, "removal limits match one solution");
  for (size_t i = 0; i < solutions.size(); ++i) {
    if (i == ip || i == im) continue;
    out.kept.push_back(i);
    out.set.points.push_back(solutions[i]);
    out.set.provenance.push_back(Provenance::Carried);
  }
  return out;
}

struct TransportStats {
  long newton_iterations = 0;
  int steps = 0;
  int refinements = 0;
};

// Hooks used by the homotopy tracer to follow individual solutions.
struct TransportObserver {
  std::function<void(Complex eta, const std::vector<Complex>& z, const std::vector<long>& ids)> node;
  std::function<void(Complex xi, Complex z0, long id_plus, long id_minus)> spawn;
  std::function<void(Complex xi, Complex z0, long id_a, long id_b)> removal;
};

// Carries `z` along path, refining failed segments in place.
std::vector<Complex> run_transport(const HarmonicMapping& f, TransportPath& path, std::vector<Complex> z,
                                   const SolveOptions& opts, TransportStats& stats,
                                   const TransportObserver* obs = nullptr) {
  std::vector<long> ids(z.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<long>(i);
  long next_id = static_cast<long>(z.size());
  if (obs && obs->node) obs->node(path.nodes.front(), z, ids);

  size_t i = 0;
  while (i < path.segments.size()) {
    const PathSegment seg = path.segments[i];
    const Complex a = path.nodes[i];
    const Complex b = path.nodes[i + 1];
    bool ok = false;
    try {
      if (!seg.crossing || seg.expected_delta == 0) {
        PredictionSet pred{z, std::vector<Provenance>(z.size(), Provenance::Carried)};
        StepOutcome st = step_transport(f, pred, b, z.size(), opts);
        stats.newton_iterations += st.iterations;
        if (st.ok) {
          z = std::move(st.solutions);
          ok = true;
        }
      } else {
        const int delta = seg.expected_delta;
        CrossingPrediction cp = predict_crossing(f, z, *seg.crossing, a, b, delta, opts);
        const size_t expected = delta > 0 ? z.size() + 2 : z.size() - 2;
        StepOutcome st = step_transport(f, cp.set, b, expected, opts);
        stats.newton_iterations += st.iterations;
        if (st.ok) {
          std::vector<long> new_ids;
          for (size_t k : cp.kept) new_ids.push_back(ids[k]);
          if (delta > 0) {
            const long ip = next_id++;
            const long im = next_id++;
            new_ids.push_back(ip);
            new_ids.push_back(im);
            if (obs && obs->spawn) obs->spawn(seg.crossing->xi, cp.z0, ip, im);
          } else if (obs && obs->removal) {
            std::vector<long> gone;
            size_t kk = 0;
            for (size_t k = 0; k < ids.size(); ++k) {
              if (kk < cp.kept.size() && cp.kept[kk] == k) {
                ++kk;
              } else {
                gone.push_back(ids[k]);
              }
            }
            obs->removal(seg.crossing->xi, cp.z0, gone.at(0), gone.at(1));
          }
          ids = std::move(new_ids);
          z = std::move(st.solutions);
          ok = true;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SpawnFailure && e.kind() != ErrorKind::PoleProximity) throw;
    }
    if (ok) {
      ++stats.steps;
      if (obs && obs->node) obs->node(b, z, ids);
      ++i;
    } else {
      path = refine(path, i, opts.max_refine_depth);
      ++stats.refinements;
    }
  }
  return z;
}

struct Attempt {
  Complex eta1;
  double distance;
  std::vector<Complex> solutions;
};

// Initial phase on the ray from target with direction theta, doubling the
// distance while the bijection check fails.
Attempt initial_phase(const HarmonicMapping& f, Complex target, double theta, double distance,
                      const SolveOptions& opts, TransportStats& stats) {
  const Complex dir = std::polar(1.0, theta);
  for (int j = 0; j <= opts.max_doublings; ++j) {
    const Complex eta1 = target + distance * dir;
    try {
      InitialPhase ip = initial_solutions(f, eta1, opts);
      stats.newton_iterations += ip.iterations;
      return {eta1, distance, std::move(ip.solutions)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InitialPhaseFailure) throw;
    }
    distance *= 2.0;
  }
  throw Error(ErrorKind::InitialPhaseFailure, "doubling cap reached");
}

bool is_restartable(ErrorKind k) {
  return k == ErrorKind::RayRejected || k == ErrorKind::InitialPhaseFailure ||
         k == ErrorKind::SpawnFailure || k == ErrorKind::StepFailure;
}

}  // namespace

double SolveReport::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

CriticalData compute_critical_data(const HarmonicMapping& f, const TraceOptions& opts) {
  CriticalData d;
  d.curves = trace_critical_curves(f, opts);
  d.caustics = caustics(f, d.curves);
  d.max_modulus = max_caustic_modulus(d.caustics);
  return d;
}

Complex initial_eta(const HarmonicMapping& f, const std::vector<CausticCurve>& caustics, double theta) {
  const double m = max_caustic_modulus(caustics);
  const double scale = has_extent(f, m) ? m : 1.0 + f.pole_scale();
  return 2.0 * scale * std::polar(1.0, theta);
}

PredictionSet initial_points(const HarmonicMapping& f, Complex eta) {
  PredictionSet out;
  for (const auto& pole : f.poles()) {
    const int n = pole.order;
    const Complex a = pole.a_lead();
    const Complex b = pole.b_lead();
    Complex base = pole.a_head.constant + std::conj(pole.b_head.constant);
    const Complex z0 = pole.location.z;
    if (!pole.location.infinite) {
      for (const auto& t : f.logs()) {
        const double d = std::abs(t.anchor - z0);
        if (d > 1e-8 * (1.0 + std::abs(z0))) base += 2.0 * t.coeff * std::log(d);
      }
    }
    const Complex c = eta - base;
    const Complex rhs = (std::norm(a) - std::norm(b)) / (std::conj(a) * c - std::conj(b) * std::conj(c));
    if (!is_finite(rhs) || rhs == Complex{}) {
      throw Error(ErrorKind::InitialPhaseFailure, "eta is too close to the pole constant");
    }
    const double mag = std::pow(std::abs(rhs), 1.0 / n);
    const double arg0 = std::arg(rhs) / n;
    for (int k = 0; k < n; ++k) {
      const Complex root = std::polar(mag, arg0 + kTwoPi * k / n);
      out.points.push_back(pole.location.infinite ? 1.0 / root : z0 + root);
      out.provenance.push_back(Provenance::Carried);
    }
  }
  return out;
}

InitialPhase initial_solutions(const HarmonicMapping& f, Complex eta, const SolveOptions& opts) {
  InitialPhase out;
  out.eta = eta;
  out.prediction = initial_points(f, eta);
  for (const Complex z : out.prediction.points) {
    const NewtonOutcome r = newton_solve(f, eta, z, opts.newton);
    out.iterations += r.iterations;
    if (!r.converged()) throw Error(ErrorKind::InitialPhaseFailure, "initial point did not converge");
    out.solutions.push_back(r.limit);
  }
  if (!pairwise_distinct(out.solutions, opts.sep_tol)) {
    throw Error(ErrorKind::InitialPhaseFailure, "initial limits coincide");
  }
  if (static_cast<int>(out.solutions.size()) != f.total_pole_order()) {
    throw Error(ErrorKind::InitialPhaseFailure, "initial count differs from the pole order");
  }
  return out;
}

TransportPath build_candidate_path(const HarmonicMapping& f, const CriticalData& crit, double theta,
                                   Complex target, double start_distance, const SolveOptions& opts) {
  const Complex dir = std::polar(1.0, theta);
  const auto crossings =
      crit.curves.empty()
          ? std::vector<RayCrossing>{}
          : ray_intersections(f, crit.curves, crit.caustics, theta, opts.ray, target, start_distance);
  for (const auto& c : crossings) {
    if (c.kind == CrossingKind::Suspect) throw Error(ErrorKind::RayRejected, "suspect caustic crossing");
    if (c.delta != 2 && c.delta != -2) throw Error(ErrorKind::RayRejected, "crossing without a direction");
  }

  TransportPath path;
  path.thetas_tried.push_back(theta);
  path.theta = theta;
  path.nodes.push_back(target + start_distance * dir);
  const size_t n = crossings.size();
  for (size_t k = 0; k < n; ++k) {
    const double s = crossings[k].distance;
    const double before = (k == 0 ? start_distance : crossings[k - 1].distance) - s;
    const double after = k + 1 < n ? s - crossings[k + 1].distance : s;
    const double off = std::min({before, after, s}) / 4.0;
    if (!(off > 0.0)) throw Error(ErrorKind::RayRejected, "crossings too close together");
    path.segments.push_back({});
    path.nodes.push_back(target + (s + off) * dir);
    path.segments.push_back({crossings[k], crossings[k].delta, 0});
    path.nodes.push_back(target + (s - off) * dir);
  }
  path.segments.push_back({});
  path.nodes.push_back(target);

  const double guard = opts.guard * (1.0 + std::max(crit.max_modulus, std::abs(target)));
  for (size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    if (caustic_distance(crit.caustics, path.nodes[k]) <= guard) {
      throw Error(ErrorKind::RayRejected, "path node on a caustic");
    }
  }

  // Crossing bookkeeping must agree with the winding numbers at the target.
  int sum_delta = 0;
  for (const auto& c : crossings) sum_delta += c.delta;
  if (!crit.curves.empty()) {
    int w = 0;
    try {
      w = total_winding(f, crit.curves, crit.caustics, target, guard);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GuardViolation) throw;
      throw Error(ErrorKind::SingularZeroSuspected, "target lies on a caustic");
    }
    if (sum_delta != 2 * w) throw Error(ErrorKind::RayRejected, "crossing count disagrees with winding");
  }
  return path;
}

PredictionSet crossing_prediction_set(const HarmonicMapping& f, const std::vector<Complex>& solutions,
                                      const RayCrossing& crossing, Complex eta_k, Complex eta_k1, int delta,
                                      const SolveOptions& opts) {
  return predict_crossing(f, solutions, crossing, eta_k, eta_k1, delta, opts).set;
}

const char* to_string(StepFailureMode mode) {
  switch (mode) {
    case StepFailureMode::None: return "None";
    case StepFailureMode::NonConvergence: return "NonConvergence";
    case StepFailureMode::Collision: return "Collision";
    case StepFailureMode::CountMismatch: return "CountMismatch";
  }
  return "Unknown";
}

StepOutcome step_transport(const HarmonicMapping& f, const PredictionSet& prediction, Complex eta_next,
                           size_t expected_count, const SolveOptions& opts) {
  StepOutcome out;
  if (prediction.size() != expected_count) {
    out.failure = StepFailureMode::CountMismatch;
    return out;
  }
  out.solutions.reserve(prediction.size());
  for (const Complex z : prediction.points) {
    const NewtonOutcome r = newton_solve(f, eta_next, z, opts.newton);
    out.iterations += r.iterations;
    if (!r.converged()) {
      out.failure = StepFailureMode::NonConvergence;
      out.solutions.clear();
      return out;
    }
    out.solutions.push_back(r.limit);
  }
  if (!pairwise_distinct(out.solutions, opts.sep_tol)) {
    out.failure = StepFailureMode::Collision;
    out.solutions.clear();
    return out;
  }
  out.ok = true;
  return out;
}

TransportPath refine(const TransportPath& path, size_t segment_index, int max_depth) {
  if (segment_index >= path.segments.size()) throw Error(ErrorKind::InvalidInput, "segment index out of range");
  const PathSegment seg = path.segments[segment_index];
  if (seg.depth + 1 > max_depth) throw Error(ErrorKind::RayRejected, "refinement depth cap reached");
  TransportPath out = path;
  const Complex a = path.nodes[segment_index];
  const Complex b = path.nodes[segment_index + 1];
  const auto node_at = out.nodes.begin() + static_cast<long>(segment_index) + 1;
  const auto seg_at = out.segments.begin() + static_cast<long>(segment_index);
  const PathSegment plain{std::nullopt, 0, seg.depth + 1};
  if (!seg.crossing) {
    out.nodes.insert(node_at, 0.5 * (a + b));
    *seg_at = plain;
    out.segments.insert(seg_at + 1, plain);
  } else {
    out.nodes.insert(node_at, {(3.0 * a + b) / 4.0, (a + 3.0 * b) / 4.0});
    PathSegment middle = seg;
    middle.depth = seg.depth + 1;
    *seg_at = plain;
    out.segments.insert(seg_at + 1, {middle, plain});
  }
  ++out.refinements;
  return out;
}

SolveReport solve_preimages(const HarmonicMapping& f, const CriticalData& crit, Complex eta, std::uint64_t seed,
                            const SolveOptions& opts) {
  if (!is_finite(eta)) throw Error(ErrorKind::InvalidInput, "non-finite target");
  reject_bare_anchors(f);
  SolveReport report;
  report.target = eta;
  report.seed = seed;
  report.pole_order = f.total_pole_order();

  const double guard = opts.guard * (1.0 + std::max(crit.max_modulus, std::abs(eta)));
  if (caustic_distance(crit.caustics, eta) <= guard) {
    throw Error(ErrorKind::SingularZeroSuspected, "target lies on a caustic");
  }
  if (!crit.curves.empty()) {
    try {
      report.winding_sum = total_winding(f, crit.curves, crit.caustics, eta, guard);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GuardViolation) throw;
      throw Error(ErrorKind::SingularZeroSuspected, "target lies on a caustic");
    }
  }
  report.expected_count = report.pole_order + 2 * report.winding_sum;

  const double start = has_extent(f, crit.max_modulus) ? 2.0 * (crit.max_modulus + std::abs(eta))
                                              : 2.0 * (1.0 + f.pole_scale() + std::abs(eta));
  std::mt19937_64 rng(seed);
  TransportStats stats;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    double theta;
    if (attempt == 0 && opts.theta) {
      theta = *opts.theta;
    } else if (attempt == 0 && eta != Complex{}) {
      theta = std::arg(eta);
    } else {
      theta = draw_theta(rng);
    }
    try {
      const Attempt init = initial_phase(f, eta, theta, start, opts, stats);
      TransportPath path = build_candidate_path(f, crit, theta, eta, init.distance, opts);
      std::vector<Complex> z = run_transport(f, path, init.solutions, opts, stats);
      if (static_cast<int>(z.size()) != report.expected_count) {
        throw Error(ErrorKind::RayRejected, "final count differs from the expected count");
      }
      sort_points(z);
      report.theta = theta;
      report.restarts = attempt;
      report.steps = stats.steps;
      report.refinements = stats.refinements;
      report.newton_iterations = stats.newton_iterations;
      for (const Complex w : z) {
        const PointData d = f.evaluate(w);
        report.residuals.push_back(std::abs(d.f - eta));
        report.jacobians.push_back(d.jacobian());
      }
      report.zeros = std::move(z);
      return report;
    } catch (const Error& e) {
      if (!is_restartable(e.kind())) throw;
    }
  }
  throw Error(ErrorKind::Exhausted, "restart cap reached");
}

SolveReport solve_preimages(const HarmonicMapping& f, Complex eta, std::uint64_t seed, const SolveOptions& opts) {
  reject_bare_anchors(f);
  return solve_preimages(f, compute_critical_data(f, opts.trace), eta, seed, opts);
}

SolveReport solve_all_zeros(const HarmonicMapping& f, std::uint64_t seed, const SolveOptions& opts) {
  return solve_preimages(f, Complex{}, seed, opts);
}

std::vector<HomotopyBranch> trace_homotopy(const HarmonicMapping& f, const std::vector<Complex>& path_nodes,
                                           int samples_per_segment, const SolveOptions& opts) {
  if (path_nodes.empty()) throw Error(ErrorKind::InvalidInput, "empty homotopy path");
  if (samples_per_segment < 1) throw Error(ErrorKind::InvalidInput, "samples_per_segment must be positive");
  for (const Complex p : path_nodes) {
    if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, "non-finite path node");
  }
  const CriticalData crit = compute_critical_data(f, opts.trace);
  double scale = crit.max_modulus;
  for (const Complex p : path_nodes) scale = std::max(scale, std::abs(p));
  const double guard = opts.guard * (1.0 + scale);

  // Point caustics cannot be crossed transversally.
  for (const auto& c : crit.caustics) {
    if (!c.not_light) continue;
    for (size_t k = 0; k + 1 < std::max<size_t>(path_nodes.size(), 2); ++k) {
      const Complex a = path_nodes[k];
      const Complex b = path_nodes[std::min(k + 1, path_nodes.size() - 1)];
      for (const Complex p : c.points) {
        if (point_segment_distance(p, a, b) <= guard) {
          throw Error(ErrorKind::SingularZeroSuspected, "path meets a caustic that is a single point");
        }
      }
    }
  }

  TransportPath path;
  path.nodes.push_back(path_nodes.front());
  for (size_t e = 0; e + 1 < path_nodes.size(); ++e) {
    const Complex a = path_nodes[e];
    const Complex b = path_nodes[e + 1];
    const double len = std::abs(b - a);
    if (len == 0.0) {
      for (int j = 0; j < samples_per_segment; ++j) {
        path.segments.push_back({});
        path.nodes.push_back(a);
      }
      continue;
    }
    const Complex u = (b - a) / len;
    const double spacing = len / samples_per_segment;
    const auto crossings =
        crit.curves.empty() ? std::vector<RayCrossing>{}
                            : segment_intersections(f, crit.curves, crit.caustics, a, b, opts.ray);
    for (const auto& c : crossings) {
      if (c.kind == CrossingKind::Suspect) {
        throw Error(ErrorKind::RayRejected, "path crosses the caustic near a cusp or tangentially");
      }
    }
    std::vector<double> offs;
    for (size_t k = 0; k < crossings.size(); ++k) {
      const double s = crossings[k].distance;
      const double before = s - (k == 0 ? 0.0 : crossings[k - 1].distance);
      const double after = (k + 1 < crossings.size() ? crossings[k + 1].distance : len) - s;
      offs.push_back(std::min({before, after, spacing}) / 4.0);
    }
    size_t k = 0;
    auto emit_pair = [&](size_t idx) {
      const double s = crossings[idx].distance;
      path.segments.push_back({});
      path.nodes.push_back(a + (s - offs[idx]) * u);
      path.segments.push_back({crossings[idx], crossings[idx].delta, 0});
      path.nodes.push_back(a + (s + offs[idx]) * u);
    };
    for (int j = 1; j <= samples_per_segment; ++j) {
      const double s = j == samples_per_segment ? len : j * spacing;
      while (k < crossings.size() && crossings[k].distance + offs[k] < s) emit_pair(k++);
      if (k < crossings.size() && std::abs(s - crossings[k].distance) <= offs[k]) continue;
      path.segments.push_back({});
      path.nodes.push_back(j == samples_per_segment ? b : a + s * u);
    }
    while (k < crossings.size()) emit_pair(k++);
  }
  for (size_t k = 0; k < path.nodes.size(); ++k) {
    if (caustic_distance(crit.caustics, path.nodes[k]) <= guard) {
      throw Error(ErrorKind::SingularZeroSuspected, "path node lies on a caustic");
    }
  }

  const SolveReport start = solve_preimages(f, crit, path_nodes.front(), 0, opts);

  std::vector<HomotopyBranch> branches;
  std::vector<long> branch_of;  // solution id -> branch index
  auto branch_for = [&](long id) -> HomotopyBranch& {
    const auto idx = static_cast<size_t>(id);
    if (idx >= branch_of.size()) branch_of.resize(idx + 1, -1);
    if (branch_of[idx] < 0) {
      branch_of[idx] = static_cast<long>(branches.size());
      branches.emplace_back();
    }
    return branches[static_cast<size_t>(branch_of[idx])];
  };
  TransportObserver obs;
  obs.node = [&](Complex eta, const std::vector<Complex>& z, const std::vector<long>& ids) {
    for (size_t i = 0; i < z.size(); ++i) {
      HomotopyBranch& br = branch_for(ids[i]);
      br.etas.push_back(eta);
      br.points.push_back(z[i]);
    }
  };
  obs.spawn = [&](Complex xi, Complex z0, long ip, long im) {
    for (long id : {ip, im}) {
      HomotopyBranch& br = branch_for(id);
      br.starts_at_turning_point = true;
      br.etas.push_back(xi);
      br.points.push_back(z0);
    }
  };
  obs.removal = [&](Complex xi, Complex z0, long ia, long ib) {
    for (long id : {ia, ib}) {
      HomotopyBranch& br = branch_for(id);
      br.ends_at_turning_point = true;
      br.etas.push_back(xi);
      br.points.push_back(z0);
    }
  };
  TransportStats stats;
  run_transport(f, path, start.zeros, opts, stats, &obs);
  return branches;
}

}  // namespace harmzero
