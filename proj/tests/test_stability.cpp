#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "almlab/builders.hpp"
#include "almlab/energy.hpp"
#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/stability.hpp"

using namespace almlab;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// |ellipse Δ (disc of radius a centred at z)| by counting cells of side 1/512.
double ellipse_disc_oracle(double A, double B, double a, double zx, double zy) {
  const double h = 1.0 / 512;
  const int N = static_cast<int>(std::ceil(1.6 / h));
  long count = 0;
  for (int i = -N; i < N; ++i)
    for (int j = -N; j < N; ++j) {
      const double x = (i + 0.5) * h, y = (j + 0.5) * h;
      const bool in_e = x * x / (A * A) + y * y / (B * B) < 1;
      const bool in_b = (x - zx) * (x - zx) + (y - zy) * (y - zy) < a * a;
      count += in_e != in_b;
    }
  return count * h * h;
}

const Certificate& find(const StabilityReport& r, const std::string& name) {
  for (const auto& c : r.certificates)
    if (c.name == name) return c;
  throw std::runtime_error("missing certificate " + name);
}

}  // namespace

TEST(Asymmetry, TranslatedBallIsZero) {
  const Vec2 z0(0.23, -0.11);
  const ShapeSet s = disk(1.0, 512, z0);
  const auto res = asymmetry(s, mass(s));
  EXPECT_LT(res.value, 1e-4);
  EXPECT_NEAR(res.translation[0], z0.x(), 1e-4);
  EXPECT_NEAR(res.translation[1], z0.y(), 1e-4);

  const ShapeSet iv = interval(0.3, 1.3);
  const auto r1 = asymmetry(iv, 1.0);
  EXPECT_LT(r1.value, 1e-4);
  EXPECT_NEAR(r1.translation[0], 0.8, 1e-5);
}

TEST(Asymmetry, EllipseMatchesGridOracle) {
  const double A = 1.2, B = 1.0 / 1.2;
  const ShapeSet e = ellipse(A, B, 1024);
  const double m = mass(e);
  EXPECT_NEAR(m, kPi, 1e-10);
  const auto res = asymmetry(e, m);
  EXPECT_LT(res.translation.norm(), 1e-3);
  double oracle = 1e300;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) oracle = std::min(oracle, ellipse_disc_oracle(A, B, 1.0, 0.025 * i, 0.025 * j));
  EXPECT_NEAR(res.value, oracle / kPi, 1e-3);
}

TEST(Asymmetry, SeparatedHalfDisksNearOne) {
  const double r = std::sqrt(0.5);
  PolygonLoops p;
  p.loops.push_back(regular_polygon(512, r, Vec2(-3, 0)).polygon()->loops.front());
  p.loops.push_back(regular_polygon(512, r, Vec2(3, 0)).polygon()->loops.front());
  const ShapeSet s(p);
  const auto res = asymmetry(s, mass(s));
  // A unit ball swallows one component whole; the other stays outside.
  EXPECT_NEAR(res.value, 1.0, 1e-3);
  EXPECT_LE(res.value, 2.0);
}

TEST(Asymmetry, TranslationInvariant) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const ShapeSet shapes[] = {l_shape(), rectangle(1.0, 2.5), ellipse(1.3, 0.7)};
  for (const auto& s : shapes) {
    const double m = mass(s);
    const double base = asymmetry(s, m).value;
    for (int k = 0; k < 3; ++k) {
      const Vec z = v2(u(rng), u(rng));
      EXPECT_NEAR(asymmetry(translate(s, z), m).value, base, 1e-4);
    }
  }
}

TEST(Asymmetry, RejectsWrongMass) { EXPECT_THROW(asymmetry(unit_square(), 1.1), Error); }

TEST(Certificate, BallHasZeroSlack) {
  const ShapeSet b = disk(1.0, 512);
  const auto r = stability_certificate(b, SurfaceTension::isotropic(), RadialPotential::quadratic());
  EXPECT_NEAR(r.deficit, 0.0, 1e-9);
  EXPECT_NEAR(r.potential_gap, 0.0, 1e-12);
  EXPECT_NEAR(r.distance_to_minimizer, 0.0, 1e-9);
  EXPECT_LT(r.asymmetry, 1e-4);
  EXPECT_TRUE(r.all_pass());
  for (const auto& c : r.certificates) EXPECT_NEAR(c.slack, 0.0, 1e-8) << c.name;
}

TEST(Certificate, ShiftedIntervalClosedForms) {
  // deficit = x^2 for x = 0.1; potential gap = int_{0.5}^{0.6} q^2 - 1/4 dq.
  const ShapeSet e = interval(-0.4, 0.6);
  const auto r = stability_certificate(e, SurfaceTension::isotropic(), RadialPotential::quadratic());
  EXPECT_NEAR(r.deficit, 0.01, 1e-12);
  const double gap = (0.6 * 0.6 * 0.6 - 0.5 * 0.5 * 0.5) / 3.0 - 0.25 * 0.1;
  EXPECT_NEAR(r.potential_gap, gap, 1e-12);
  EXPECT_NEAR(r.potential_gap, 0.0053333, 5e-8);
  const auto& c1 = find(r, "potential_gap");
  EXPECT_TRUE(c1.pass);
  EXPECT_NEAR(c1.slack, 0.0046667, 5e-8);
  // h'(1/2) = 1 and int_{0.5}^{0.6} (q - 1/2) dq = 0.005.
  EXPECT_NEAR(r.first_moment_term, 0.005, 1e-12);
  // n = 1: t_1 = 1, |S^0| = 2, so A_* = 1/4 and r_a = 4.
  EXPECT_NEAR(r.A_star, 0.25, 1e-15);
  EXPECT_NEAR(r.r_a, 4.0, 1e-14);
  EXPECT_NEAR(find(r, "bounded_potential").rhs, 0.25 * 0.1 * 0.1, 1e-14);
  EXPECT_NEAR(find(r, "symmetric_difference").lhs, 0.4, 1e-10);
  EXPECT_NEAR(r.asymmetry, 0.0, 1e-4);
  EXPECT_TRUE(r.all_pass());
}

TEST(Certificate, AStarPlanarFormula) {
  // n = 2: t_2 = 4 r_*, so A_* = [2 pi * 2 * 16 r_*^2 / (4 a)]^{-1} = a / (16 pi r_*^2).
  for (double a : {0.5, 1.0, 2.0})
    for (double rs : {1.0, 1.5, 3.0}) EXPECT_NEAR(a_star_constant(2, a, rs), a / (16 * kPi * rs * rs), 1e-15);
  // n = 3: t_3 = 3 (2 r_*)^2 = 12 r_*^2, |S^2| = 4 pi.
  EXPECT_NEAR(a_star_constant(3, 1.0, 1.0), 1.0 / (4 * kPi * 2 * 144.0 / 9.0), 1e-15);
}

TEST(Certificate, EllipseFamilyDeficitDominatesGap) {
  double prev = -1;
  for (double s : {1.02, 1.05, 1.1, 1.2, 1.4, 1.8}) {
    const ShapeSet e = ellipse(s, 1.0 / s, 1024);
    StabilityOptions opt;
    opt.compute_asymmetry = false;
    for (const auto& g : {RadialPotential::quadratic(), RadialPotential::linear(), RadialPotential::power(3.0)}) {
      const auto r = stability_certificate(e, SurfaceTension::isotropic(), g, opt);
      EXPECT_GE(r.deficit, 0.0);
      EXPECT_GE(r.potential_gap, 0.0);
      EXPECT_GE(r.first_moment_term, 0.0);
      EXPECT_TRUE(r.all_pass()) << s << " " << g.name();
    }
    const auto r = stability_certificate(e, SurfaceTension::isotropic(), RadialPotential::quadratic(), opt);
    EXPECT_GT(r.deficit, prev);
    prev = r.deficit;
  }
}

TEST(Certificate, GridShapePasses) {
  const ShapeSet g = grid_of(rectangle(1.0, 2.0), 1.0 / 128, 0.1);
  StabilityOptions opt;
  opt.compute_asymmetry = false;
  const auto r = stability_certificate(g, SurfaceTension::isotropic(), RadialPotential::quadratic(), opt);
  EXPECT_GT(r.deficit, 0.0);
  EXPECT_TRUE(r.all_pass());
}

TEST(Certificate, NonconvexPotentialSkipsConvexCertificates) {
  const auto g = RadialPotential::power(0.5);
  const auto r = stability_certificate(ellipse(1.3, 1 / 1.3), SurfaceTension::isotropic(), g);
  EXPECT_FALSE(find(r, "first_moment").applicable);
  EXPECT_FALSE(find(r, "bounded_potential").applicable);
  EXPECT_TRUE(find(r, "potential_gap").pass);
  ASSERT_TRUE(r.constant_estimate.has_value());
  EXPECT_GT(*r.constant_estimate, 0.0);
}

TEST(Certificate, RejectsUnmetHypotheses) {
  const ShapeSet d = disk(1.0);
  try {
    stability_certificate(d, SurfaceTension::p_norm(1.0), RadialPotential::quadratic());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("isotropic"), std::string::npos);
  }
  try {
    stability_certificate(d, SurfaceTension::isotropic(), RadialPotential::quadratic().centered_at(v2(0.2, 0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("radial"), std::string::npos);
  }
  const auto dec = RadialPotential::custom("decreasing", [](double t) { return -t; }, false, true);
  try {
    stability_certificate(d, SurfaceTension::isotropic(), dec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("nondecreasing"), std::string::npos);
  }
}

TEST(Assignment, MatchesBruteForce) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 7;
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    for (auto& row : c)
      for (auto& x : row) x = u(rng);
    const auto match = solve_assignment(c);
    double got = 0;
    for (int i = 0; i < n; ++i) got += c[i][match[i]];
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double s = 0;
      for (int i = 0; i < n; ++i) s += c[i][perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
}

TEST(Transport, BallIsTrivial) {
  const auto c = transport_bound(interval(-0.5, 0.5), RadialPotential::quadratic(), 50);
  EXPECT_TRUE(c.trivial);
  EXPECT_TRUE(c.pairs.empty());
}

TEST(Transport, ShiftedIntervalIsMonotone) {
  const auto c = transport_bound(interval(-0.4, 0.6), RadialPotential::quadratic(), 200);
  ASSERT_EQ(c.pairs.size(), 200u);
  EXPECT_NEAR(c.region_mass, 0.1, 1e-12);
  EXPECT_LE(c.max_target_radius, 0.5 + 1e-3);
  EXPECT_TRUE(c.targets_inside);
  EXPECT_TRUE(c.bound_holds);
  // Optimal 1D matching pairs sorted sources with sorted targets.
  auto pairs = c.pairs;
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.source[0] < y.source[0]; });
  for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_LT(pairs[i - 1].target[0], pairs[i].target[0]);
  std::vector<double> xs, ys;
  for (const auto& p : c.pairs) {
    xs.push_back(p.source[0]);
    ys.push_back(p.target[0]);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double sorted_cost = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sorted_cost += (xs[i] - ys[i]) * (xs[i] - ys[i]);
  EXPECT_NEAR(c.cost, sorted_cost / xs.size(), 1e-12);
  EXPECT_LT(c.pushforward_error, 0.02);
}

TEST(Transport, EllipsePushforward) {
  const auto c = transport_bound(ellipse(1.2, 1 / 1.2, 1024), RadialPotential::quadratic(), 500);
  ASSERT_EQ(c.pairs.size(), 500u);
  EXPECT_LT(c.pushforward_error, 0.05);
  EXPECT_TRUE(c.targets_inside);
  EXPECT_LE(c.max_target_radius, 1.0);
  EXPECT_TRUE(c.bound_holds);
  EXPECT_GE(c.sample_gap, c.sample_bound);
  for (const auto& p : c.pairs) {
    EXPECT_GE(p.source.norm(), 1.0);
    EXPECT_LT(p.target.norm(), 1.0);
  }
}

TEST(Transport, PushforwardErrorShrinksWithSamples) {
  const ShapeSet e = ellipse(1.3, 1 / 1.3, 1024);
  const auto coarse = transport_bound(e, RadialPotential::quadratic(), 40);
  const auto fine = transport_bound(e, RadialPotential::quadratic(), 400);
  EXPECT_LT(fine.pushforward_error, 0.05);
  EXPECT_LE(fine.pushforward_error, coarse.pushforward_error + 0.01);
}

TEST(Transport, RefusesLargeSampleCounts) {
  EXPECT_THROW(transport_bound(ellipse(1.2, 1 / 1.2), RadialPotential::quadratic(), 601), Error);
  EXPECT_THROW(transport_bound(ellipse(1.2, 1 / 1.2), RadialPotential::quadratic(), 5), Error);
}

TEST(Translation, IntervalRateTwo) {
  const auto tb = translation_lower_bound(interval(-0.5, 0.5), 1, 20);
  EXPECT_NEAR(tb.rate, 2.0, 1e-9);
  EXPECT_NEAR(tb.range, 1.0, 1e-12);
}

TEST(Translation, SquareAxisRateAndRange) {
  const ShapeSet sq = unit_square();
  const auto axes = translation_lower_bound(sq, 2, 200);
  EXPECT_NEAR(axes.rate, 2.0, 1e-6);
  // |(S + y e1) Δ S| = 2 min(y, 1), so the bound holds up to y = 1.
  EXPECT_NEAR(axes.range, 1.0, 2 * std::sqrt(2.0) / 200);
  // Diagonal: |Δ| = 2 (sqrt2 y - y^2 / 2) falls below 2y at y = 2 sqrt2 - 2.
  const auto four = translation_lower_bound(sq, 4, 400);
  EXPECT_NEAR(four.rate, 2.0, 1e-6);
  EXPECT_NEAR(four.range, 2 * std::sqrt(2.0) - 2 + 0.002, 2 * std::sqrt(2.0) / 400);
}

TEST(Translation, DiskRateFour) {
  const auto tb = translation_lower_bound(disk(1.0, 1024), 6, 40);
  EXPECT_NEAR(tb.rate, 4.0, 1e-3);
  for (double s : tb.slopes) EXPECT_NEAR(s, 4.0, 1e-3);
  EXPECT_GT(tb.range, 0.0);
}

TEST(Derivative, SquareExact) {
  const auto d = derivative_identity_check(unit_square(), v2(1, 0), 0.5, 50);
  EXPECT_LT(d.max_relative_error, 1e-6);
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    EXPECT_NEAR(d.g[i], 1.0, 1e-12);
    EXPECT_NEAR(d.fprime[i], 2.0, 1e-6);
  }
}

TEST(Derivative, PolygonDisk) {
  const ShapeSet p = regular_polygon(256, 1.0);
  for (const Vec& w : {v2(1, 0), v2(0.6, 0.8)}) {
    const auto d = derivative_identity_check(p, w, 0.4, 400);
    EXPECT_LT(d.max_relative_error, 1e-3);
  }
  // Lens area derivative for the unit disc: f'(t) = 2 sqrt(4 - t^2).
  const auto d = derivative_identity_check(p, v2(1, 0), 0.4, 400);
  for (std::size_t i = 0; i < d.t.size(); i += 50) EXPECT_NEAR(d.g[i], std::sqrt(4 - d.t[i] * d.t[i]), 2e-3);
}

TEST(Derivative, RefinementAndSmallT) {
  // Vertex crossings in (0, 0.4) make the difference quotients first order;
  // where the crossings fall on the grid adds noise, so compare a 32x refinement.
  const ShapeSet p = regular_polygon(64, 1.0);
  const Vec w = v2(0.8, 0.6);
  const double coarse = derivative_identity_check(p, w, 0.4, 10).max_relative_error;
  const double fine = derivative_identity_check(p, w, 0.4, 320).max_relative_error;
  EXPECT_LT(fine, 0.1 * coarse);
  // f(t)/t -> 2 g(0+).
  const double t = 1e-6;
  const double f = symmetric_difference_mass(translate(p, t * w), p);
  EXPECT_NEAR(f / t, 2 * boundary_flux(p, w, t), 1e-5);
}

TEST(Derivative, RejectsNonconvex) { EXPECT_THROW(derivative_identity_check(l_shape(), v2(1, 0), 0.2, 10), Error); }

TEST(Modulus, IntervalExact) {
  const auto fit = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 1, {1.0},
                                 {0.02, 0.05, 0.1, 0.2}, Family::translated_ball);
  EXPECT_NEAR(fit.p_eps, 2.0, 1e-9);
  EXPECT_FALSE(fit.p_m.has_value());
  for (const auto& p : fit.points) {
    const double x = p.eps / 2;  // |(B + x) Δ B| = 2x with m = 1
    EXPECT_NEAR(p.deficit, x * x, 1e-14);
  }
}

TEST(Modulus, PlanarTranslatedBalls) {
  const std::vector<double> eps = {0.02, 0.04, 0.08, 0.16};
  const auto quad = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0, 2.0}, eps,
                                  Family::translated_ball);
  EXPECT_NEAR(quad.p_eps, 2.0, 0.05);
  ASSERT_TRUE(quad.p_m.has_value());
  EXPECT_GT(quad.r_squared, 0.999);
  // G(B + z) - G(B) = m |z|^2 for h = t^2.
  for (const auto& p : quad.points) {
    const ShapeSet e = family_member(Family::translated_ball, 2, p.mass, p.eps);
    EXPECT_NEAR(p.measured_eps, p.eps, 1e-6);
    (void)e;
  }
  const auto lin = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::linear(), 2, {1.0}, eps,
                                 Family::translated_ball);
  EXPECT_NEAR(lin.p_eps, 2.0, 0.05);
}

TEST(Modulus, QuadraticDeficitClosedForm) {
  // Independent check: solve the lens equation for the shift and compare m d^2.
  const double m = 1.5, eps = 0.1;
  const double a = std::sqrt(m / kPi);
  auto lens_gap = [&](double d) {
    const double lens = 2 * a * a * std::acos(d / (2 * a)) - 0.5 * d * std::sqrt(4 * a * a - d * d);
    return 2 * (kPi * a * a - lens) / m - eps;
  };
  double lo = 0, hi = a;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lens_gap(mid) > 0 ? hi : lo) = mid;
  }
  const double d = 0.5 * (lo + hi);
  const auto fit = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {m}, {eps, 2 * eps},
                                 Family::translated_ball);
  EXPECT_NEAR(fit.points.front().deficit, m * d * d, 1e-9);
}

TEST(Modulus, OtherFamilies) {
  const std::vector<double> eps = {0.02, 0.04, 0.08};
  for (Family fam : {Family::dilated_ellipse, Family::perturbed_disk}) {
    const auto fit =
        modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0}, eps, fam);
    EXPECT_NEAR(fit.p_eps, 2.0, 0.1) << to_string(fam);
    for (const auto& p : fit.points) EXPECT_NEAR(p.measured_eps, p.eps, 1e-6);
  }
  EXPECT_EQ(family_from_string("dilated_ellipse"), Family::dilated_ellipse);
  EXPECT_THROW(family_from_string("blob"), Error);
}

TEST(Modulus, DeficitMonotoneAlongFamilies) {
  for (Family fam : {Family::translated_ball, Family::dilated_ellipse}) {
    const auto fit = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0},
                                   {0.01, 0.03, 0.1, 0.3}, fam);
    for (std::size_t i = 1; i < fit.points.size(); ++i) EXPECT_GT(fit.points[i].deficit, fit.points[i - 1].deficit);
  }
}

TEST(Modulus, DegenerateGridRejected) {
  EXPECT_THROW(modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0}, {0.1},
                             Family::translated_ball),
               Error);
  EXPECT_THROW(modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0}, {0.1, 0.1},
                             Family::translated_ball),
               Error);
}

TEST(Modulus, ParallelMatchesSerial) {
  SweepOptions serial, par;
  par.threads = 4;
  const auto a = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0, 2.0},
                               {0.05, 0.1}, Family::translated_ball, serial);
  const auto b = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, {1.0, 2.0},
                               {0.05, 0.1}, Family::translated_ball, par);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].deficit, b.points[i].deficit);
  EXPECT_EQ(a.p_eps, b.p_eps);
}
