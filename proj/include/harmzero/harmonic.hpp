#pragma once

#include <optional>
#include <vector>

#include "harmzero/rational.hpp"

namespace harmzero {

/// The summand 2 A log|z - anchor|.
struct LogTerm {
  Complex anchor;
  Complex coeff;
};

/// Second-order Taylor data at a regular point z0:
/// a1 = h'(z0), b1 = g'(z0), a2 = h''(z0)/2, b2 = g''(z0)/2.
struct LocalJet {
  Complex a1, b1, a2, b2;
};

/// A pole of f: finite point or infinity, with Laurent heads of both parts.
struct PoleInfo {
  ExtendedPoint location;
  int order = 0;
  LaurentHead a_head;  // of r
  LaurentHead b_head;  // of s
  Complex log_coeff{};

  /// Coefficient of (z - z0)^(-order) in r, or of z^order at infinity.
  Complex a_lead() const;
  Complex b_lead() const;
};

/// Wirtinger derivatives as rational functions: h' = d/dz f, g' = conj(d/dzbar f).
struct Wirtinger {
  RationalFunction dz;
  RationalFunction dzbar_conj;
};

/// Everything Newton and the curve tracers need at one point.
struct PointData {
  Complex f;   // f(z)
  Complex h1;  // h'(z)
  Complex g1;  // g'(z)
  Complex h2;  // h''(z)
  Complex g2;  // g''(z)

  double jacobian() const { return std::norm(h1) - std::norm(g1); }
};

/// f(z) = r(z) + conj(s(z)) + sum 2 A_j log|z - z_j|.
///
/// Immutable after construction. The constructor computes the pole inventory
/// and rejects degenerate poles with DegeneratePole.
class HarmonicMapping {
 public:
  HarmonicMapping(RationalFunction r, RationalFunction s, std::vector<LogTerm> logs = {});

  const RationalFunction& r() const { return r_; }
  const RationalFunction& s() const { return s_; }
  const std::vector<LogTerm>& logs() const { return logs_; }

  /// Throws PoleProximity at poles and log anchors.
  Complex eval(Complex z) const;
  PointData evaluate(Complex z) const;
  /// Non-throwing variant for hot loops; false at a pole or on overflow.
  bool try_evaluate(Complex z, PointData& out) const;

  const Wirtinger& wirtinger() const { return wirtinger_; }
  double jacobian(Complex z) const { return evaluate(z).jacobian(); }

  /// omega = g'/h' in lowest terms. Throws DegenerateMapping when h' == 0.
  const RationalFunction& dilatation() const;
  bool has_dilatation() const { return dilatation_.has_value(); }

  LocalJet local_jet(Complex z0) const;

  const std::vector<PoleInfo>& poles() const { return poles_; }
  /// P(f), the total pole order.
  int total_pole_order() const;
  /// Log anchors that are not poles of r or s; they are singular points of f
  /// that do not contribute to P(f).
  const std::vector<Complex>& bare_log_anchors() const { return bare_anchors_; }
  /// Zeros shared by h' and g': critical points off the critical curves.
  const std::vector<Complex>& isolated_critical_points() const { return isolated_critical_; }

  /// Largest modulus among finite poles and log anchors (0 if none).
  double pole_scale() const { return pole_scale_; }
  /// Smallest distance from z to a finite pole or log anchor.
  double distance_to_singularity(Complex z) const;

 private:
  RationalFunction r_;
  RationalFunction s_;
  std::vector<LogTerm> logs_;
  Wirtinger wirtinger_;
  std::optional<RationalFunction> dilatation_;
  std::vector<PoleInfo> poles_;
  std::vector<Complex> bare_anchors_;
  std::vector<Complex> isolated_critical_;
  std::vector<Complex> singular_points_;
  double pole_scale_ = 0.0;
};

/// (z-1)^n + z^n + conj(i (z-1)^n - i z^n); n^2 zeros.
HarmonicMapping wilmshurst(int n);
/// z - conj(z^(n-1) / (z^n - rho^n)).
HarmonicMapping mpw(int n, double rho);
/// z - conj((1-eps) z^(n-1) / (z^n - rho^n) + eps / z).
HarmonicMapping rhie(int n, double rho, double eps);
/// z^2 + conj(1/z + 1/(z+1)) + 2 log|z|.
HarmonicMapping log_example();
/// z - conj(1/z).
HarmonicMapping chang_refsdal();

/// ((n-2)/n)^(1/2) (2/(n-2))^(1/n); mpw(n, rho) has 3n+1 zeros below it.
double rho_critical(int n);

}  // namespace harmzero
