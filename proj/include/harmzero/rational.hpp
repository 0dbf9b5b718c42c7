#pragma once

#include <vector>

#include "harmzero/polynomial.hpp"

namespace harmzero {

/// numerator / denominator with a monic denominator and no common roots
/// (to the cancellation tolerance).
class RationalFunction {
 public:
  /// The zero function 0/1.
  RationalFunction();
  /// Normalizes on construction; throws InvalidInput for a zero denominator.
  RationalFunction(Polynomial numerator, Polynomial denominator, double cancel_tol = 1e-10);
  static RationalFunction polynomial(Polynomial p);
  /// Takes the pieces as given. The caller guarantees they are coprime and the
  /// denominator is monic.
  static RationalFunction from_normalized(Polynomial numerator, Polynomial denominator);
  /// As above with the pole structure of the denominator already known.
  static RationalFunction from_normalized(Polynomial numerator, Polynomial denominator,
                                          std::vector<RootCluster> poles);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// max(deg num, deg den); the number of preimages of a generic point.
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  /// Throws PoleProximity when the denominator vanishes numerically at z.
  Complex operator()(Complex z) const;
  /// Value, first and second derivative without forming derivative objects.
  /// Returns false instead of throwing when z sits on a pole.
  struct Jet {
    Complex value, d1, d2;
  };
  bool try_eval_jet(Complex z, Jet& out) const;
  Jet eval_jet(Complex z) const;

  /// Distinct poles with multiplicity, cached after the first call.
  const std::vector<RootCluster>& poles() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(Complex s, const RationalFunction& r);

 private:
  Polynomial num_;
  Polynomial den_;
  Polynomial num_rev_;
  Polynomial den_rev_;
  mutable std::vector<RootCluster> poles_;
  mutable bool poles_ready_ = false;
};

/// Cancels numerically common roots and makes the denominator monic.
RationalFunction normalize(const Polynomial& numerator, const Polynomial& denominator,
                           double cancel_tol = 1e-10);

Complex rat_eval(const RationalFunction& r, Complex z);
/// Quotient-rule derivative built from the pole structure, so the result is
/// already in lowest terms.
RationalFunction rat_derivative(const RationalFunction& r);

/// Principal part and constant term of a Laurent expansion.
///
/// For a finite pole z0: principal = {a_{-n}, ..., a_{-1}} of
/// sum a_k (z - z0)^k. For infinity: principal = {a_n, ..., a_1} of the
/// polynomial part sum a_k z^k. `constant` is a_0 in both cases.
struct LaurentHead {
  ExtendedPoint pole;
  int order = 0;
  std::vector<Complex> principal;
  Complex constant{};

  Complex leading() const { return principal.empty() ? Complex{} : principal.front(); }
};

/// Throws NotAPole when `pole` is not a pole of r.
LaurentHead laurent_head(const RationalFunction& r, const ExtendedPoint& pole);

/// Expansion data of r at a point that may or may not be a pole of r: order 0
/// with empty principal part and constant r(z0) when r is regular there.
LaurentHead laurent_head_or_regular(const RationalFunction& r, const ExtendedPoint& point);

}  // namespace harmzero
