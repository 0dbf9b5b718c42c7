#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "harmzero/critical.hpp"
#include "harmzero/transport.hpp"

using namespace harmzero;

namespace {

RationalFunction poly(std::initializer_list<Complex> c) { return RationalFunction::polynomial(Polynomial(c)); }

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

void expect_valid_nodes(const HarmonicMapping& f, const std::vector<CriticalCurve>& curves, const char* name) {
  const auto& omega = f.dilatation();
  for (const auto& c : curves) {
    ASSERT_EQ(c.params.size(), c.points.size());
    for (size_t k = 0; k < c.points.size(); ++k) {
      const Complex w = rat_eval(omega, c.points[k]);
      EXPECT_LE(std::abs(std::abs(w) - 1.0), 1e-10) << name;
      EXPECT_LE(std::abs(w - std::polar(1.0, c.params[k])), 1e-10) << name;
      const PointData d = f.evaluate(c.points[k]);
      const double scale = std::pow(std::abs(d.h1) + std::abs(d.g1), 2);
      EXPECT_LE(std::abs(d.jacobian()), 1e-8 * scale) << name;
    }
  }
}

}  // namespace

TEST(TraceCriticalCurves, ChangRefsdalUnitCircle) {
  const auto f = chang_refsdal();
  const auto curves = trace_critical_curves(f);
  ASSERT_EQ(curves.size(), 1u);
  for (const Complex z : curves[0].points) EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
  expect_valid_nodes(f, curves, "chang");
  const auto cau = caustics(f, curves);
  EXPECT_TRUE(cau[0].not_light);
  EXPECT_NEAR(max_caustic_modulus(cau), 0.0, 1e-12);
}

TEST(TraceCriticalCurves, NodesSatisfyPhaseEquation) {
  const std::pair<const char*, HarmonicMapping> cases[] = {
      {"wilmshurst3", wilmshurst(3)}, {"mpw5", mpw(5, 0.6)}, {"mpw7", mpw(7, 0.7)},
      {"rhie7", rhie(7, 0.7, 0.1)},   {"log", log_example()},
  };
  for (const auto& [name, f] : cases) {
    const auto curves = trace_critical_curves(f);
    EXPECT_FALSE(curves.empty()) << name;
    expect_valid_nodes(f, curves, name);
  }
}

TEST(TraceCriticalCurves, CurvesClose) {
  for (const auto& f : {wilmshurst(3), mpw(7, 0.7), log_example()}) {
    const auto curves = trace_critical_curves(f);
    int total_arcs = 0;
    for (const auto& c : curves) {
      ASSERT_GE(c.winding, 1);
      total_arcs += c.winding;
      EXPECT_LT(c.params.back(), c.period());
      const Complex end = curve_point(f, c, c.period());
      EXPECT_LE(std::abs(end - c.points.front()), 1e-8 * (1.0 + std::abs(end)));
    }
    // Each arc is one root of num(omega) - e^{it} den(omega).
    EXPECT_EQ(total_arcs, f.dilatation().degree());
  }
}

TEST(TraceCriticalCurves, DegenerateAndEmptyCases) {
  const HarmonicMapping analytic(poly({-1.0, 0.0, 1.0}), RationalFunction());
  EXPECT_TRUE(trace_critical_curves(analytic).empty());

  const HarmonicMapping linear(poly({0.0, 1.0}), poly({0.0, 0.5}));
  EXPECT_TRUE(trace_critical_curves(linear).empty());

  // Real log coefficients only: omega == 1 everywhere.
  const HarmonicMapping logs(RationalFunction(), RationalFunction(), {LogTerm{0.0, 1.0}, LogTerm{1.0, 2.0}});
  try {
    (void)trace_critical_curves(logs);
    FAIL() << "expected DegenerateMapping";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateMapping);
  }
}

TEST(TraceCriticalCurves, StableUnderGridResolution) {
  const auto f = wilmshurst(3);
  for (int k : {512, 1024, 2048}) {
    TraceOptions opts;
    opts.k_nodes = k;
    const auto curves = trace_critical_curves(f, opts);
    const auto cau = caustics(f, curves);
    EXPECT_EQ(f.total_pole_order() + 2 * total_winding(f, curves, cau, 0.0, 1e-9), 9) << k;
  }
}

TEST(Caustics, TangentMatchesFiniteDifference) {
  for (const auto& f : {log_example(), wilmshurst(3), mpw(5, 0.6)}) {
    const auto curves = trace_critical_curves(f);
    const auto cau = caustics(f, curves);
    for (size_t i = 0; i < cau.size(); ++i) {
      const auto& c = cau[i];
      for (size_t k = 0; k < c.points.size(); k += 7) {
        if (std::abs(c.psi[k]) < 1e-6 * c.psi_scale[k]) continue;
        const double t = curves[i].params[k];
        const double h = 1e-5;
        const Complex chord = f.eval(curve_point(f, curves[i], t + h)) - f.eval(curve_point(f, curves[i], t - h));
        const double sin_angle = std::abs((chord * std::conj(c.tangents[k])).imag()) /
                                 (std::abs(chord) * std::abs(c.tangents[k]));
        EXPECT_LE(sin_angle, 1e-3) << "node " << k << " psi " << c.psi[k];
      }
    }
  }
}

TEST(Caustics, CurvatureLawAtFolds) {
  // The tangent direction arg(tau) turns at rate -1/2 in t.
  for (const auto& f : {log_example(), wilmshurst(3), mpw(7, 0.7)}) {
    const auto curves = trace_critical_curves(f);
    const auto cau = caustics(f, curves);
    for (size_t i = 0; i < cau.size(); ++i) {
      const auto& c = cau[i];
      const auto& cv = curves[i];
      const size_t n = c.points.size();
      for (size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(c.psi[k]) < 1e-2 * c.psi_scale[k] || std::abs(c.psi[k + 1]) < 1e-2 * c.psi_scale[k + 1]) {
          continue;
        }
        if ((c.psi[k] > 0) != (c.psi[k + 1] > 0)) continue;
        const double dt = cv.params[k + 1] - cv.params[k];
        const double rate = wrap(std::arg(c.tangents[k + 1]) - std::arg(c.tangents[k])) / dt;
        EXPECT_NEAR(rate, -0.5, 5e-2);
      }
    }
  }
}

TEST(Caustics, CuspsAndLightness) {
  const auto w3 = wilmshurst(3);
  const auto cw = caustics(w3, trace_critical_curves(w3));
  size_t cusps = 0;
  for (const auto& c : cw) {
    cusps += c.cusp_indices.size();
    EXPECT_FALSE(c.not_light);
  }
  EXPECT_GT(cusps, 0u);

  const auto lg = log_example();
  const auto cl = caustics(lg, trace_critical_curves(lg));
  ASSERT_EQ(cl.size(), 1u);
  EXPECT_GT(max_caustic_modulus(cl), 0.0);
}

TEST(WindingNumber, ExteriorAndGuard) {
  const auto f = mpw(7, 0.7);
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  const double m = max_caustic_modulus(cau);
  for (const auto& c : cau) EXPECT_EQ(winding_number(c, Complex{m + 1.0, 0.3}), 0);
  EXPECT_EQ(total_winding(f, curves, cau, 2.0 * m * std::polar(1.0, 0.4), 1e-9), 0);
  EXPECT_EQ(total_winding(f, curves, cau, 0.0, 1e-9), 7);
  try {
    (void)winding_number(cau[0], cau[0].points[10]);
    FAIL() << "expected GuardViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GuardViolation);
  }
}

TEST(WindingNumber, LogExampleTiles) {
  const auto f = log_example();
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  EXPECT_EQ(total_winding(f, curves, cau, Complex{3.0, 0.0}, 1e-9), 0);
  EXPECT_EQ(total_winding(f, curves, cau, Complex{0.75, 1.0}, 1e-9), -1);
  EXPECT_EQ(total_winding(f, curves, cau, Complex(-0.63, -1.44), 1e-9), 1);
}

TEST(RayIntersections, MpwCrossingsAreConsistent) {
  const auto f = mpw(7, 0.7);
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  const double theta = kPi / 50;
  const auto xs = ray_intersections(f, curves, cau, theta);
  EXPECT_GE(xs.size(), 7u);
  int sum_delta = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    const auto& x = xs[k];
    EXPECT_EQ(x.kind, CrossingKind::SimpleFold);
    EXPECT_LE(std::abs(wrap(std::arg(x.xi) - theta)), 1e-10);
    EXPECT_LE(std::abs(f.eval(x.preimage) - x.xi), 1e-8 * (1.0 + std::abs(x.xi)));
    EXPECT_NEAR(x.distance, std::abs(x.xi), 1e-12);
    if (k > 0) EXPECT_GT(xs[k - 1].distance, x.distance);
    sum_delta += x.delta;
  }
  EXPECT_EQ(f.total_pole_order() + sum_delta, 22);
}

TEST(RayIntersections, LogExampleCountsAgree) {
  const auto f = log_example();
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  int sum_delta = 0;
  for (const auto& x : ray_intersections(f, curves, cau, kPi / 50)) sum_delta += x.delta;
  EXPECT_EQ(sum_delta, 2 * total_winding(f, curves, cau, 0.0, 1e-9));
}

TEST(RayIntersections, SegmentVariantMeasuresFromStart) {
  const auto f = mpw(5, 0.6);
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  const Complex a{0.6699, 0.1795};
  const auto xs = segment_intersections(f, curves, cau, a, 0.0);
  ASSERT_FALSE(xs.empty());
  int sum_delta = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    EXPECT_NEAR(std::abs(xs[k].xi - a), xs[k].distance, 1e-10);
    if (k > 0) EXPECT_GT(xs[k].distance, xs[k - 1].distance);
    sum_delta += xs[k].delta;
  }
  const int w0 = total_winding(f, curves, cau, 0.0, 1e-9);
  const int wa = total_winding(f, curves, cau, a, 1e-9);
  EXPECT_EQ(sum_delta, 2 * (w0 - wa));
}

TEST(PolylineCrossings, SyntheticUnitCircle) {
  std::vector<Complex> circle;
  for (int k = 0; k < 360; ++k) circle.push_back(std::polar(1.0, 2.0 * kPi * (k + 0.5) / 360));
  const auto xs = polyline_ray_crossings({circle}, 0.0);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0].point.real(), 1.0, 1e-4);
  EXPECT_NEAR(xs[0].point.imag(), 0.0, 1e-12);

  CausticCurve c;
  c.points = circle;
  EXPECT_NEAR(max_caustic_modulus({c}), 1.0, 1e-15);
  EXPECT_NEAR(caustic_distance({c}, 0.0), 1.0, 1e-4);
}

TEST(CurvesCsv, HeaderAndRows) {
  const auto f = mpw(3, 0.6);
  const auto curves = trace_critical_curves(f);
  const auto cau = caustics(f, curves);
  std::ostringstream os;
  write_curves_csv(os, curves, cau);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "curve_id,t,re_z,im_z,re_fz,im_fz,psi");
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  size_t nodes = 0;
  for (const auto& c : curves) nodes += c.points.size();
  EXPECT_EQ(rows, nodes);
}
