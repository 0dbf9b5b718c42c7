#include "harmzero/rational.hpp"

#include <algorithm>
#include <cmath>

namespace harmzero {

namespace {

constexpr double kPoleTol = 1e-14;

// Derivatives of P at z, each divided by z^(deg P - j), computed from the
// reversed polynomial at w = 1/z. Keeps high-degree evaluation finite for |z| > 1.
struct ScaledJet {
  Complex p0, p1, p2;
  double scale0;  // rounding scale of p0
};

ScaledJet scaled_jet(const Polynomial& rev, int d, Complex w) {
  const auto q = rev.eval_jet(w);
  const double dd = static_cast<double>(d);
  return {q.value, dd * q.value - w * q.d1,
          dd * (dd - 1.0) * q.value - 2.0 * (dd - 1.0) * w * q.d1 + w * w * q.d2,
          rev.eval_scale(w)};
}

}  // namespace

RationalFunction::RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator, double cancel_tol) {
  *this = normalize(numerator, denominator, cancel_tol);
}

RationalFunction RationalFunction::polynomial(Polynomial p) {
  return from_normalized(std::move(p), Polynomial::constant(1.0));
}

RationalFunction RationalFunction::from_normalized(Polynomial numerator, Polynomial denominator) {
  RationalFunction r;
  r.num_ = std::move(numerator);
  r.den_ = std::move(denominator);
  if (r.den_.is_zero()) throw Error(ErrorKind::InvalidInput, "zero denominator");
  if (r.num_.is_zero()) r.den_ = Polynomial::constant(1.0);
  r.num_rev_ = r.num_.reversed();
  r.den_rev_ = r.den_.reversed();
  return r;
}

RationalFunction RationalFunction::from_normalized(Polynomial numerator, Polynomial denominator,
                                                   std::vector<RootCluster> poles) {
  auto r = from_normalized(std::move(numerator), std::move(denominator));
  if (!r.num_.is_zero()) {
    r.poles_ = std::move(poles);
    r.poles_ready_ = true;
  }
  return r;
}

const std::vector<RootCluster>& RationalFunction::poles() const {
  if (!poles_ready_) {
    poles_ = den_.degree() >= 1 ? root_clusters(den_) : std::vector<RootCluster>{};
    poles_ready_ = true;
  }
  return poles_;
}

bool RationalFunction::try_eval_jet(Complex z, Jet& out) const {
  if (num_.is_zero()) {
    out = {};
    return true;
  }
  const int dn = num_.degree();
  const int dd = den_.degree();
  if (std::abs(z) <= 1.0) {
    const auto n = num_.eval_jet(z);
    const auto d = den_.eval_jet(z);
    if (std::abs(d.value) <= kPoleTol * den_.eval_scale(1.0)) return false;
    const Complex u = 1.0 / d.value;
    out.value = n.value * u;
    out.d1 = (n.d1 - out.value * d.d1) * u;
    out.d2 = (n.d2 - 2.0 * out.d1 * d.d1 - out.value * d.d2) * u;
  } else {
    const Complex w = 1.0 / z;
    const auto n = scaled_jet(num_rev_, dn, w);
    const auto d = scaled_jet(den_rev_, dd, w);
    if (std::abs(d.p0) <= kPoleTol * d.scale0) return false;
    const Complex u = 1.0 / d.p0;
    const Complex ze = std::pow(z, dn - dd);
    out.value = ze * n.p0 * u;
    out.d1 = (ze * w * n.p1 - out.value * w * d.p1) * u;
    out.d2 = (ze * w * w * n.p2 - 2.0 * out.d1 * w * d.p1 - out.value * w * w * d.p2) * u;
  }
  return is_finite(out.value) && is_finite(out.d1) && is_finite(out.d2);
}

RationalFunction::Jet RationalFunction::eval_jet(Complex z) const {
  Jet j;
  if (!try_eval_jet(z, j)) throw Error(ErrorKind::PoleProximity, "evaluation at a pole");
  return j;
}

Complex RationalFunction::operator()(Complex z) const {
  if (num_.is_zero()) return {};
  if (std::abs(z) <= 1.0) {
    const Complex d = den_.eval(z);
    if (std::abs(d) <= kPoleTol * den_.eval_scale(1.0)) {
      throw Error(ErrorKind::PoleProximity, "evaluation at a pole");
    }
    return num_.eval(z) / d;
  }
  return eval_jet(z).value;
}

RationalFunction normalize(const Polynomial& numerator, const Polynomial& denominator,
                           double cancel_tol) {
  if (denominator.is_zero()) throw Error(ErrorKind::InvalidInput, "zero denominator");
  if (numerator.is_zero()) return RationalFunction();
  const Complex lead = denominator.leading();
  // Scaling by exactly 1 would still flip signed zeros.
  Polynomial num = lead == Complex{1.0} ? numerator : (1.0 / lead) * numerator;
  Polynomial den = lead == Complex{1.0} ? denominator : (1.0 / lead) * denominator;
  if (den.degree() == 0) return RationalFunction::polynomial(std::move(num));

  auto clusters = root_clusters(den);
  std::vector<RootCluster> kept;
  for (const auto& cl : clusters) {
    int k = 0;
    while (k < cl.multiplicity && num.degree() >= 1 &&
           std::abs(num.eval(cl.root)) <= cancel_tol * num.eval_scale(cl.root)) {
      num = num.deflate(cl.root);
      den = den.deflate(cl.root);
      ++k;
    }
    if (k < cl.multiplicity) kept.push_back({cl.root, cl.multiplicity - k});
  }
  if (den.degree() == 0) return RationalFunction::polynomial((1.0 / den[0]) * num);
  return RationalFunction::from_normalized(std::move(num), std::move(den), std::move(kept));
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_polynomial() && b.is_polynomial()) {
    return RationalFunction::polynomial(a.numerator() + b.numerator());
  }
  if (b.is_polynomial()) {
    return RationalFunction::from_normalized(a.numerator() + b.numerator() * a.denominator(),
                                             a.denominator());
  }
  if (a.is_polynomial()) return b + a;
  if (a.denominator() == b.denominator()) {
    return normalize(a.numerator() + b.numerator(), a.denominator());
  }
  return normalize(a.numerator() * b.denominator() + b.numerator() * a.denominator(),
                   a.denominator() * b.denominator());
}

RationalFunction operator*(Complex s, const RationalFunction& r) {
  if (s == Complex{}) return RationalFunction();
  return RationalFunction::from_normalized(s * r.numerator(), r.denominator());
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return a + (-1.0) * b;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  if (a.is_polynomial() && a.numerator().degree() == 0) return a.numerator()[0] * b;
  if (b.is_polynomial() && b.numerator().degree() == 0) return b.numerator()[0] * a;
  return normalize(a.numerator() * b.numerator(), a.denominator() * b.denominator());
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "division by the zero function");
  if (a.is_zero()) return RationalFunction();
  if (b.is_polynomial() && b.numerator().degree() == 0) return (1.0 / b.numerator()[0]) * a;
  return normalize(a.numerator() * b.denominator(), a.denominator() * b.numerator());
}

Complex rat_eval(const RationalFunction& r, Complex z) { return r(z); }

RationalFunction rat_derivative(const RationalFunction& r) {
  if (r.is_zero()) return r;
  if (r.is_polynomial()) return RationalFunction::polynomial(r.numerator().derivative());
  const Polynomial& n = r.numerator();
  const Polynomial& d = r.denominator();
  const auto& poles = r.poles();
  const bool simple = std::all_of(poles.begin(), poles.end(),
                                  [](const RootCluster& c) { return c.multiplicity == 1; });
  // With D = prod (z - p_k)^{m_k} and its square-free part S,
  // (N/D)' = (N' S - N Q) / (D S), Q = sum m_k S / (z - p_k).
  Polynomial square_free;
  Polynomial q;
  if (simple) {
    square_free = d;
    q = d.derivative();
  } else {
    std::vector<Complex> roots;
    for (const auto& c : poles) roots.push_back(c.root);
    square_free = Polynomial::from_roots(roots);
    for (const auto& c : poles) {
      q = q + static_cast<double>(c.multiplicity) * square_free.deflate(c.root);
    }
  }
  std::vector<RootCluster> new_poles = poles;
  for (auto& c : new_poles) ++c.multiplicity;
  return RationalFunction::from_normalized(n.derivative() * square_free - n * q, d * square_free,
                                           std::move(new_poles));
}

LaurentHead laurent_head(const RationalFunction& r, const ExtendedPoint& pole) {
  LaurentHead head;
  head.pole = pole;
  if (pole.infinite) {
    if (r.numerator().degree() <= r.denominator().degree()) {
      throw Error(ErrorKind::NotAPole, "r is bounded at infinity");
    }
    const auto [quo, rem] = r.numerator().divmod(r.denominator());
    head.order = quo.degree();
    for (int k = head.order; k >= 1; --k) head.principal.push_back(quo[k]);
    head.constant = quo[0];
    return head;
  }

  const RootCluster* match = nullptr;
  for (const auto& c : r.poles()) {
    if (std::abs(c.root - pole.z) <= 1e-8 * (1.0 + std::abs(pole.z))) match = &c;
  }
  if (match == nullptr) throw Error(ErrorKind::NotAPole, "point is not a root of the denominator");
  const Complex z0 = match->root;
  const int m = match->multiplicity;
  Polynomial rest = r.denominator();
  for (int k = 0; k < m; ++k) rest = rest.deflate(z0);
  // Taylor coefficients of N / rest at z0 through order m.
  const Polynomial ns = r.numerator().taylor_shift(z0);
  const Polynomial es = rest.taylor_shift(z0);
  std::vector<Complex> phi(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    Complex acc = ns[j];
    for (int i = 1; i <= j; ++i) acc -= es[i] * phi[static_cast<size_t>(j - i)];
    phi[static_cast<size_t>(j)] = acc / es[0];
  }
  head.pole = ExtendedPoint::finite(z0);
  head.order = m;
  head.principal.assign(phi.begin(), phi.begin() + m);
  head.constant = phi[static_cast<size_t>(m)];
  return head;
}

LaurentHead laurent_head_or_regular(const RationalFunction& r, const ExtendedPoint& point) {
  if (point.infinite) {
    if (r.numerator().degree() > r.denominator().degree()) return laurent_head(r, point);
    LaurentHead head;
    head.pole = point;
    if (!r.is_zero() && r.numerator().degree() == r.denominator().degree()) {
      head.constant = r.numerator().leading() / r.denominator().leading();
    }
    return head;
  }
  for (const auto& c : r.poles()) {
    if (std::abs(c.root - point.z) <= 1e-8 * (1.0 + std::abs(point.z))) {
      return laurent_head(r, point);
    }
  }
  LaurentHead head;
  head.pole = point;
  head.constant = r(point.z);
  return head;
}

}  // namespace harmzero
