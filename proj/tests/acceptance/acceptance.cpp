// Acceptance run: one PASS/FAIL line per criterion. The exit status is
// nonzero when a criterion fails for a reason other than a documented block.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "harmzero/transport.hpp"
#include "support/oracles.hpp"

using namespace harmzero;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  bool blocked = false;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int g_unexpected_failures = 0;

void report(const char* id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double dt = seconds_since(t0);
  const char* tag = v.pass ? "PASS" : "FAIL";
  std::printf("%s %s %s (%.2f s)%s%s%s\n", tag, id, title, dt, v.detail.empty() ? "" : ": ",
              v.detail.c_str(), v.blocked ? " [blocked, see analysis]" : "");
  std::fflush(stdout);
  if (!v.pass && !v.blocked) ++g_unexpected_failures;
}

SolveOptions fixed_theta() {
  SolveOptions o;
  o.theta = kPi / 50;
  return o;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Count, residual and runtime check for one solve.
void check_zeros(Verdict& v, const char* name, const HarmonicMapping& f, size_t expected, std::uint64_t seed,
                 const SolveOptions& opts, double cap_seconds) {
  const auto t0 = Clock::now();
  const auto r = solve_all_zeros(f, seed, opts);
  const double dt = seconds_since(t0);
  if (r.zeros.size() != expected) {
    v.fail(std::string(name) + fmt(": %g zeros, expected %g", double(r.zeros.size()), double(expected)));
  } else if (r.max_residual() > 1e-12) {
    v.fail(std::string(name) + fmt(": residual %.3g", r.max_residual()));
  } else if (dt > cap_seconds) {
    v.fail(std::string(name) + fmt(": %.1f s over the %.0f s cap", dt, cap_seconds));
  }
}

Verdict zero_counts() {
  Verdict v;
  const auto opts = fixed_theta();
  for (std::uint64_t seed : {1u, 77u}) {
    check_zeros(v, "log_example", log_example(), 4, seed, opts, 10);
    check_zeros(v, "wilmshurst(3)", wilmshurst(3), 9, seed, opts, 10);
    check_zeros(v, "mpw(7, 0.7)", mpw(7, 0.7), 22, seed, opts, 10);
    check_zeros(v, "rhie(7, 0.7, 0.1)", rhie(7, 0.7, 0.1), 35, seed, opts, 10);
  }
  return v;
}

Verdict parameter_sweeps() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int solves = 0;
  for (int n = 3; n <= 12; ++n) {
    const double rc = rho_critical(n);
    for (int k = 0; k < 5; ++k) {
      const double rho = 0.7 + (rc - 0.7) * unit(rng);
      check_zeros(v, ("mpw(" + std::to_string(n) + fmt(", %.6f)", rho)).c_str(), mpw(n, rho),
                  static_cast<size_t>(3 * n + 1), rng(), {}, 300);
      ++solves;
    }
  }
  // With eps fixed at 0.1, small n falls outside the 5n regime. A miss is
  // only accepted as blocked when the grid oracle confirms the solver's count.
  std::vector<std::string> blocked;
  for (int n = 3; n <= 8; ++n) {
    const double rc = rho_critical(n);
    for (int k = 0; k < 5; ++k) {
      const double rho = 0.7 + (rc - 0.7) * unit(rng);
      const std::string name = "rhie(" + std::to_string(n) + fmt(", %.6f, 0.1)", rho);
      const auto f = rhie(n, rho, 0.1);
      const auto r = solve_all_zeros(f, rng());
      ++solves;
      if (r.zeros.size() == static_cast<size_t>(5 * n)) {
        if (r.max_residual() > 1e-12) v.fail(name + fmt(": residual %.3g", r.max_residual()));
        continue;
      }
      const auto grid = oracle::grid_scan(f, oracle::rhie(n, rho, 0.1), 0.0, -1.6, 1.6, -1.6, 1.6, 1200);
      if (multiset_distance(grid, r.zeros) <= 1e-8) {
        blocked.push_back(name + fmt(" has %g zeros", double(r.zeros.size())));
      } else {
        v.fail(name + fmt(": %g zeros, oracle %g", double(r.zeros.size()), double(grid.size())));
      }
    }
  }
  const double dt = seconds_since(t0);
  if (dt > 300) v.fail(fmt("suite took %.0f s", dt));
  if (v.pass && !blocked.empty()) {
    v.pass = false;
    v.blocked = true;
    v.detail = std::to_string(blocked.size()) + " of " + std::to_string(solves) +
               " instances miss the count, confirmed by the grid oracle (first: " + blocked.front() + ")";
  } else if (v.pass) {
    v.detail = std::to_string(solves) + " instances";
  }
  return v;
}

Verdict regime_change() {
  Verdict v;
  if (!(0.8 > rho_critical(4))) v.fail("rho = 0.8 is not above rho_c(4)");
  check_zeros(v, "mpw(4, 0.8)", mpw(4, 0.8), 5, 1, fixed_theta(), 10);
  return v;
}

Verdict large_mpw() {
  Verdict v;
  check_zeros(v, "mpw(100, 0.94)", mpw(100, 0.94), 301, 5, {}, 120);
  return v;
}

Verdict large_rhie() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto r = solve_all_zeros(rhie(25, 0.9, 0.4), 5);
  const double dt = seconds_since(t0);
  if (dt > 60) v.fail(fmt("%.1f s over the 60 s cap", dt));
  if (r.max_residual() > 1e-12) v.fail(fmt("residual %.3g", r.max_residual()));
  if (r.zeros.size() != 125) {
    v.fail(fmt("%g zeros, expected 125", double(r.zeros.size())));
    // Three independent counts give 75 for these parameters (rho = 0.9 is
    // above rho_c(25)); only the count itself is treated as blocked.
    v.blocked = v.detail.find("zeros") != std::string::npos && r.zeros.size() == 75 &&
                static_cast<int>(r.zeros.size()) == r.expected_count && dt <= 60 && r.max_residual() <= 1e-12;
  }
  return v;
}

struct Family {
  const char* name;
  HarmonicMapping f;
  oracle::Field F;
};

std::vector<Family> families() {
  return {{"log_example", log_example(), oracle::log_example()},
          {"wilmshurst(3)", wilmshurst(3), oracle::wilmshurst(3)},
          {"mpw(7, 0.7)", mpw(7, 0.7), oracle::mpw(7, 0.7)},
          {"rhie(7, 0.7, 0.1)", rhie(7, 0.7, 0.1), oracle::rhie(7, 0.7, 0.1)},
          {"mpw(3, 0.6)", mpw(3, 0.6), oracle::mpw(3, 0.6)}};
}

Verdict counting_law() {
  Verdict v;
  std::mt19937_64 rng(99);
  for (const auto& fam : families()) {
    const auto crit = compute_critical_data(fam.f);
    const double radius = 1.1 * crit.max_modulus;
    std::uniform_real_distribution<double> u(-radius, radius);
    int done = 0;
    int tiles_seen = 0;
    std::vector<int> seen;
    while (done < 20) {
      const Complex eta{u(rng), u(rng)};
      const double guard = 1e-6 * (1.0 + radius);
      if (caustic_distance(crit.caustics, eta) <= guard) continue;
      int sum = 0;
      for (size_t i = 0; i < crit.curves.size(); ++i) {
        if (!crit.caustics[i].not_light) sum += winding_number(crit.caustics[i], eta, 1e-12);
      }
      const int expected = fam.f.total_pole_order() + 2 * sum;
      const auto r = solve_preimages(fam.f, crit, eta, rng());
      if (static_cast<int>(r.zeros.size()) != expected) {
        v.fail(std::string(fam.name) + fmt(": %g preimages at (%.6f, %.6f)", double(r.zeros.size()), eta.real(),
                                           eta.imag()) +
               " vs " + std::to_string(expected));
      }
      // The count only means something when the points really are distinct solutions.
      for (const Complex z : r.zeros) {
        if (std::abs(fam.F(z) - eta) > 1e-11 * (1.0 + std::abs(eta))) {
          v.fail(std::string(fam.name) + fmt(": closed-form residual %.3g", std::abs(fam.F(z) - eta)));
        }
      }
      if (!pairwise_distinct(r.zeros, 1e-8)) v.fail(std::string(fam.name) + ": repeated preimage");
      if (std::find(seen.begin(), seen.end(), expected) == seen.end()) {
        seen.push_back(expected);
        ++tiles_seen;
      }
      ++done;
    }
    if (tiles_seen < 2) v.fail(std::string(fam.name) + ": samples hit a single tile count");
  }
  return v;
}

Verdict tile_counts() {
  Verdict v;
  const auto f = log_example();
  const auto crit = compute_critical_data(f);
  const std::pair<Complex, size_t> tiles[] = {{{3.0, 0.0}, 4}, {{0.75, 1.0}, 2}, {{-0.63, -1.44}, 6}};
  for (const auto& [eta, n] : tiles) {
    const int w = total_winding(f, crit.curves, crit.caustics, eta, 1e-9);
    const auto r = solve_preimages(f, crit, eta, 3);
    if (r.zeros.size() != n || w != (static_cast<int>(n) - 4) / 2) {
      v.fail(fmt("eta (%.2f, %.2f): %g preimages", eta.real(), eta.imag(), double(r.zeros.size())) +
             ", winding " + std::to_string(w));
    }
  }
  return v;
}

Verdict closed_form() {
  Verdict v;
  const auto f = chang_refsdal();
  const auto crit = compute_critical_data(f);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r(0.05, 5.0);
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Complex eta = std::polar(r(rng), a(rng));
    const auto got = solve_preimages(f, crit, eta, rng()).zeros;
    worst = std::max(worst, multiset_distance(got, oracle::chang_refsdal_preimages(eta)));
  }
  if (worst > 1e-10) v.fail(fmt("max distance %.3g", worst));
  return v;
}

Verdict brute_force() {
  Verdict v;
  struct Case {
    const char* name;
    HarmonicMapping f;
    oracle::Field F;
    double x0, x1, y0, y1;
  };
  const Case cases[] = {
      {"wilmshurst(2)", wilmshurst(2), oracle::wilmshurst(2), -1.0, 2.0, -2.5, 2.0},
      {"wilmshurst(3)", wilmshurst(3), oracle::wilmshurst(3), -1.0, 2.0, -2.5, 2.0},
      {"mpw(3, 0.6)", mpw(3, 0.6), oracle::mpw(3, 0.6), -1.6, 1.6, -1.6, 1.6},
  };
  for (const auto& c : cases) {
    const auto grid = oracle::grid_scan(c.f, c.F, 0.0, c.x0, c.x1, c.y0, c.y1);
    const auto solved = solve_all_zeros(c.f, 1, fixed_theta()).zeros;
    const double d = multiset_distance(grid, solved);
    if (!(d <= 1e-8)) {
      v.fail(std::string(c.name) + fmt(": grid %g vs solver %g zeros, distance %.3g", double(grid.size()),
                                       double(solved.size()), d));
    }
  }
  return v;
}

Verdict properties() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.5, 1.5);

  for (const auto& fam : families()) {
    const auto zeros = solve_all_zeros(fam.f, 1, fixed_theta()).zeros;

    // Newton fixed point and quadratic convergence.
    NewtonOptions rec;
    rec.record_steps = true;
    for (const Complex z : zeros) {
      if (std::abs(newton_step(fam.f, 0.0, z) - z) > 1e-12 * (1.0 + std::abs(z))) {
        v.fail(std::string(fam.name) + ": zero is not a Newton fixed point");
      }
      const auto r = newton_solve(fam.f, 0.0, z * Complex{1.0 + 1e-4, 1e-4}, rec);
      if (!r.converged() || std::abs(r.limit - z) > 1e-10 * (1.0 + std::abs(z))) {
        v.fail(std::string(fam.name) + ": perturbed start left the basin");
        continue;
      }
      for (size_t k = 1; k < r.steps.size(); ++k) {
        if (r.steps[k - 1] < 1e-7) break;
        if (r.steps[k] > 1e3 * r.steps[k - 1] * r.steps[k - 1]) {
          v.fail(std::string(fam.name) + ": convergence is not quadratic");
        }
      }
    }

    // Jacobian against finite differences of the closed form.
    for (int k = 0; k < 100; ++k) {
      const Complex z{u(rng), u(rng)};
      if (fam.f.distance_to_singularity(z) < 0.05) continue;
      const double j = fam.f.jacobian(z);
      const double fd = oracle::fd_jacobian(fam.F, z);
      if (std::abs(j - fd) > 1e-5 * std::max(1.0, std::abs(j))) {
        v.fail(std::string(fam.name) + fmt(": Jacobian %.10g vs finite difference %.10g", j, fd));
      }
    }

    // Critical nodes and the curvature law at folds.
    const auto crit = compute_critical_data(fam.f);
    const RationalFunction& omega = fam.f.dilatation();
    for (size_t i = 0; i < crit.curves.size(); ++i) {
      const auto& cv = crit.curves[i];
      const auto& cc = crit.caustics[i];
      for (const Complex z : cv.points) {
        if (std::abs(std::abs(omega(z)) - 1.0) > 1e-10) v.fail(std::string(fam.name) + ": node off |omega| = 1");
      }
      for (size_t k = 0; k + 1 < cc.points.size(); ++k) {
        if (std::abs(cc.psi[k]) < 1e-2 * cc.psi_scale[k] || std::abs(cc.psi[k + 1]) < 1e-2 * cc.psi_scale[k + 1]) {
          continue;
        }
        if ((cc.psi[k] > 0) != (cc.psi[k + 1] > 0)) continue;
        const double turn = std::remainder(std::arg(cc.tangents[k + 1]) - std::arg(cc.tangents[k]), 2.0 * kPi);
        const double rate = turn / (cv.params[k + 1] - cv.params[k]);
        if (std::abs(rate + 0.5) > 5e-2) v.fail(std::string(fam.name) + fmt(": tangent turns at rate %.4f", rate));
      }
    }

    // The zero set does not depend on the seed.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto other = solve_all_zeros(fam.f, seed).zeros;
      if (multiset_distance(other, zeros) > 1e-10) {
        v.fail(std::string(fam.name) + ": seed " + std::to_string(seed) + " changes the zero set");
      }
    }
  }
  return v;
}

}  // namespace

int main() {
  report("1", "zero counts of the test families", zero_counts);
  report("2", "mpw and rhie parameter sweeps", parameter_sweeps);
  report("3", "mpw(4, 0.8) beyond rho_c has 5 zeros", regime_change);
  report("4a", "mpw(100, 0.94) has 301 zeros", large_mpw);
  report("4b", "rhie(25, 0.9, 0.4) has 125 zeros", large_rhie);
  report("5", "preimage count equals P + 2 * winding sum", counting_law);
  report("6", "log_example tile counts 4, 2, 6", tile_counts);
  report("7", "chang_refsdal closed-form preimages", closed_form);
  report("8", "grid-scan oracle agrees with the solver", brute_force);
  report("9", "Newton, Jacobian, critical set and seed properties", properties);
  return g_unexpected_failures == 0 ? 0 : 1;
}
