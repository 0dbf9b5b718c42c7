#pragma once

#include <span>
#include <vector>

#include "harmzero/types.hpp"

namespace harmzero {

/// Dense complex polynomial, coefficient k multiplies z^k.
///
/// The zero polynomial has no coefficients; otherwise the leading coefficient
/// is nonzero. All operations return new values.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::initializer_list<Complex> coeffs);

  static Polynomial constant(Complex c);
  static Polynomial monomial(int degree, Complex c = 1.0);
  /// (z - root)
  static Polynomial linear_factor(Complex root);
  /// lead * prod (z - roots[k])
  static Polynomial from_roots(std::span<const Complex> roots, Complex lead = 1.0);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Complex leading() const { return coeffs_.empty() ? Complex{} : coeffs_.back(); }
  Complex operator[](int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Complex{};
  }
  double max_abs_coeff() const;

  Complex operator()(Complex z) const { return eval(z); }
  Complex eval(Complex z) const;
  /// Value and first two derivatives in one Horner pass.
  struct Jet {
    Complex value, d1, d2;
  };
  Jet eval_jet(Complex z) const;
  /// sum |c_k| |z|^k, the natural scale for rounding errors of eval(z).
  double eval_scale(Complex z) const;

  Polynomial derivative() const;
  /// Coefficients of p(z0 + w) in powers of w.
  Polynomial taylor_shift(Complex z0) const;
  /// Quotient of division by (z - root); the remainder is dropped.
  Polynomial deflate(Complex root) const;
  /// Euclidean division; throws InvalidInput on a zero divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;
  /// Coefficients in reverse order, z^deg p(1/z).
  Polynomial reversed() const;
  /// Drops leading coefficients with |c| <= rel_tol * max|c|.
  Polynomial trimmed(double rel_tol) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

Complex poly_eval(const Polynomial& p, Complex z);
Polynomial poly_derivative(const Polynomial& p);

struct RootOptions {
  double tol = 1e-10;
  int max_sweeps = 200;
  /// Phase perturbation of the starting circle; deterministic for a fixed seed.
  double perturbation = 1e-3;
  unsigned seed = 20210515u;
};

/// All deg(p) roots (with multiplicity) via Aberth-Ehrlich simultaneous
/// iteration started on the Cauchy-bound circle.
///
/// Each root satisfies |p(root)| <= tol * max|c| * max(1, |root|)^deg or the
/// call throws NonConvergence.
std::vector<Complex> poly_roots(const Polynomial& p, const RootOptions& opts = {});

/// A root together with its detected multiplicity.
struct RootCluster {
  Complex root;
  int multiplicity = 1;
};

/// Roots of p grouped into clusters of numerically coincident roots. The
/// cluster center is the mean of its members, which is far more accurate than
/// any member for a multiple root.
std::vector<RootCluster> root_clusters(const Polynomial& p, double cluster_tol = 1e-4,
                                       const RootOptions& opts = {});

/// Unique positive root of |c_n| x^n - sum_{k<n} |c_k| x^k; every root of p
/// lies in the closed disk of this radius.
double cauchy_radius(const Polynomial& p);

}  // namespace harmzero
