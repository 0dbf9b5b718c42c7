#include "harmzero/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace harmzero {

namespace {

constexpr double kLocationTol = 1e-8;
constexpr double kDegeneracyGap = 1e-8;

bool same_location(Complex a, Complex b) {
  return std::abs(a - b) <= kLocationTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Merges log terms sharing an anchor and drops zero coefficients.
std::vector<LogTerm> merge_logs(const std::vector<LogTerm>& logs) {
  std::vector<LogTerm> out;
  for (const auto& t : logs) {
    if (!is_finite(t.anchor) || !is_finite(t.coeff)) {
      throw Error(ErrorKind::InvalidInput, "non-finite log term");
    }
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const LogTerm& o) { return o.anchor == t.anchor; });
    if (it == out.end()) {
      out.push_back(t);
    } else {
      it->coeff += t.coeff;
    }
  }
  std::erase_if(out, [](const LogTerm& t) { return t.coeff == Complex{}; });
  return out;
}

// sum coeff_j / (z - anchor_j), optionally with conjugated coefficients.
RationalFunction log_derivative_sum(const std::vector<LogTerm>& logs, bool conjugate) {
  if (logs.empty()) return {};
  std::vector<Complex> anchors;
  for (const auto& t : logs) anchors.push_back(t.anchor);
  const Polynomial den = Polynomial::from_roots(anchors);
  Polynomial num;
  std::vector<RootCluster> poles;
  for (const auto& t : logs) {
    num = num + (conjugate ? std::conj(t.coeff) : t.coeff) * den.deflate(t.anchor);
    poles.push_back({t.anchor, 1});
  }
  return RationalFunction::from_normalized(num, den, poles);
}

void check_finite(const RationalFunction& f) {
  for (const auto& c : f.numerator().coeffs()) {
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  }
  for (const auto& c : f.denominator().coeffs()) {
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  }
}

Complex lead_at_order(const LaurentHead& h, int n) { return h.order == n ? h.leading() : Complex{}; }

}  // namespace

Complex PoleInfo::a_lead() const { return lead_at_order(a_head, order); }
Complex PoleInfo::b_lead() const { return lead_at_order(b_head, order); }

HarmonicMapping::HarmonicMapping(RationalFunction r, RationalFunction s, std::vector<LogTerm> logs)
    : r_(std::move(r)), s_(std::move(s)), logs_(merge_logs(logs)) {
  check_finite(r_);
  check_finite(s_);

  wirtinger_.dz = rat_derivative(r_) + log_derivative_sum(logs_, false);
  wirtinger_.dzbar_conj = rat_derivative(s_) + log_derivative_sum(logs_, true);
  if (!wirtinger_.dz.is_zero()) dilatation_ = wirtinger_.dzbar_conj / wirtinger_.dz;

  // Warm every pole cache now so that later const access never mutates.
  for (const RationalFunction* q : {&r_, &s_, &wirtinger_.dz, &wirtinger_.dzbar_conj}) q->poles();
  if (dilatation_) dilatation_->poles();

  std::vector<Complex> locations;
  auto add_location = [&](Complex z) {
    for (const auto& l : locations) {
      if (same_location(l, z)) return;
    }
    locations.push_back(z);
  };
  for (const auto& c : r_.poles()) add_location(c.root);
  for (const auto& c : s_.poles()) add_location(c.root);
  for (const auto& t : logs_) add_location(t.anchor);

  auto check_pole = [](const PoleInfo& p) {
    const double a = std::abs(p.a_lead());
    const double b = std::abs(p.b_lead());
    if (std::abs(a - b) <= kDegeneracyGap * std::max(a, b)) {
      throw Error(ErrorKind::DegeneratePole, "|a_-n| = |b_-n| at a pole");
    }
  };

  for (const Complex z0 : locations) {
    PoleInfo info;
    info.location = ExtendedPoint::finite(z0);
    info.a_head = laurent_head_or_regular(r_, info.location);
    info.b_head = laurent_head_or_regular(s_, info.location);
    info.order = std::max(info.a_head.order, info.b_head.order);
    for (const auto& t : logs_) {
      if (same_location(t.anchor, z0)) info.log_coeff += t.coeff;
    }
    singular_points_.push_back(z0);
    pole_scale_ = std::max(pole_scale_, std::abs(z0));
    if (info.order == 0) {
      bare_anchors_.push_back(z0);
      continue;
    }
    check_pole(info);
    poles_.push_back(std::move(info));
  }

  PoleInfo inf;
  inf.location = ExtendedPoint::infinity();
  inf.a_head = laurent_head_or_regular(r_, inf.location);
  inf.b_head = laurent_head_or_regular(s_, inf.location);
  inf.order = std::max(inf.a_head.order, inf.b_head.order);
  for (const auto& t : logs_) inf.log_coeff -= t.coeff;
  if (inf.order > 0) {
    check_pole(inf);
    poles_.push_back(std::move(inf));
  }

  const Polynomial& hn = wirtinger_.dz.numerator();
  const Polynomial& gn = wirtinger_.dzbar_conj.numerator();
  if (hn.degree() >= 1) {
    try {
      for (const auto& c : root_clusters(hn)) {
        if (gn.is_zero() || std::abs(gn(c.root)) <= 1e-8 * gn.eval_scale(c.root)) {
          isolated_critical_.push_back(c.root);
        }
      }
    } catch (const Error&) {
      // Purely diagnostic; an unresolvable numerator leaves the list empty.
    }
  }
}

bool HarmonicMapping::try_evaluate(Complex z, PointData& out) const {
  RationalFunction::Jet rj;
  RationalFunction::Jet sj;
  if (!r_.try_eval_jet(z, rj) || !s_.try_eval_jet(z, sj)) return false;
  out.f = rj.value + std::conj(sj.value);
  out.h1 = rj.d1;
  out.h2 = rj.d2;
  out.g1 = sj.d1;
  out.g2 = sj.d2;
  for (const auto& t : logs_) {
    const Complex d = z - t.anchor;
    const double ad = std::abs(d);
    if (ad <= 1e-14 * (1.0 + std::abs(t.anchor))) return false;
    const Complex inv = 1.0 / d;
    out.f += 2.0 * t.coeff * std::log(ad);
    out.h1 += t.coeff * inv;
    out.h2 -= t.coeff * inv * inv;
    out.g1 += std::conj(t.coeff) * inv;
    out.g2 -= std::conj(t.coeff) * inv * inv;
  }
  return is_finite(out.f) && is_finite(out.h1) && is_finite(out.g1);
}

PointData HarmonicMapping::evaluate(Complex z) const {
  PointData d;
  if (!try_evaluate(z, d)) throw Error(ErrorKind::PoleProximity, "evaluation at a singular point");
  return d;
}

Complex HarmonicMapping::eval(Complex z) const { return evaluate(z).f; }

const RationalFunction& HarmonicMapping::dilatation() const {
  if (!dilatation_) throw Error(ErrorKind::DegenerateMapping, "d/dz f vanishes identically");
  return *dilatation_;
}

LocalJet HarmonicMapping::local_jet(Complex z0) const {
  const auto d = evaluate(z0);
  return {d.h1, d.g1, 0.5 * d.h2, 0.5 * d.g2};
}

int HarmonicMapping::total_pole_order() const {
  int p = 0;
  for (const auto& pole : poles_) p += pole.order;
  return p;
}

double HarmonicMapping::distance_to_singularity(Complex z) const {
  double d = INFINITY;
  for (const auto& p : singular_points_) d = std::min(d, std::abs(z - p));
  return d;
}

HarmonicMapping wilmshurst(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "wilmshurst requires n >= 1");
  Polynomial zm1 = Polynomial::constant(1.0);
  for (int k = 0; k < n; ++k) zm1 = zm1 * Polynomial{-1.0, 1.0};
  const Polynomial zn = Polynomial::monomial(n);
  const Complex i{0.0, 1.0};
  return HarmonicMapping(RationalFunction::polynomial(zm1 + zn),
                         RationalFunction::polynomial(i * zm1 - i * zn));
}

HarmonicMapping mpw(int n, double rho) {
  if (n < 3 || !(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorKind::InvalidInput, "mpw requires n >= 3 and rho > 0");
  }
  const Polynomial den = Polynomial::monomial(n) - Polynomial::constant(std::pow(rho, n));
  return HarmonicMapping(RationalFunction::polynomial(Polynomial::monomial(1)),
                         RationalFunction::from_normalized(Polynomial::monomial(n - 1, -1.0), den));
}

HarmonicMapping rhie(int n, double rho, double eps) {
  if (n < 3 || !(rho > 0.0) || !std::isfinite(rho) || !(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "rhie requires n >= 3, rho > 0, 0 < eps < 1");
  }
  const double rn = std::pow(rho, n);
  const Polynomial num = Polynomial::constant(eps * rn) - Polynomial::monomial(n);
  const Polynomial den = Polynomial::monomial(n + 1) - Polynomial::monomial(1, rn);
  return HarmonicMapping(RationalFunction::polynomial(Polynomial::monomial(1)),
                         RationalFunction::from_normalized(num, den));
}

HarmonicMapping log_example() {
  return HarmonicMapping(RationalFunction::polynomial(Polynomial::monomial(2)),
                         RationalFunction::from_normalized(Polynomial{1.0, 2.0}, Polynomial{0.0, 1.0, 1.0}),
                         {LogTerm{0.0, 1.0}});
}

HarmonicMapping chang_refsdal() {
  return HarmonicMapping(RationalFunction::polynomial(Polynomial::monomial(1)),
                         RationalFunction::from_normalized(Polynomial::constant(-1.0), Polynomial::monomial(1)));
}

double rho_critical(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidInput, "rho_critical requires n >= 3");
  const double dn = static_cast<double>(n);
  return std::sqrt((dn - 2.0) / dn) * std::pow(2.0 / (dn - 2.0), 1.0 / dn);
}

}  // namespace harmzero
