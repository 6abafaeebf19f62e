#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "almlab/builders.hpp"
#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/shapes.hpp"

using namespace almlab;

namespace {

// Lens area of two radius-a discs at distance d.
double lens_sym_diff(double a, double d) {
  const double lens = 2 * a * a * std::acos(d / (2 * a)) - 0.5 * d * std::sqrt(4 * a * a - d * d);
  return 2 * (kPi * a * a - lens);
}

// Independent oracle: count lattice cell centres in exactly one of the two sets.
double grid_oracle(const ShapeSet& s, const ShapeSet& t, double cell, double half_width) {
  const int n = static_cast<int>(std::ceil(half_width / cell));
  long diff = 0;
  Vec x(2);
  for (int j = -n; j < n; ++j)
    for (int i = -n; i < n; ++i) {
      x << (i + 0.5) * cell, (j + 0.5) * cell;
      diff += contains(s, x) != contains(t, x);
    }
  return diff * cell * cell;
}

}  // namespace

TEST(Mass, UnitSquareIsExact) { EXPECT_DOUBLE_EQ(mass(unit_square()), 1.0); }

TEST(Mass, RadialDiskMatchesPi) { EXPECT_NEAR(mass(disk(1.0, 512)), kPi, 1e-6); }

TEST(Mass, GridSquareCountsCells) {
  GridFrame f;
  f.dim = 2;
  f.cell = 1.0 / 64;
  f.size = {64, 64, 1};
  Grid g{f, std::vector<std::uint8_t>(f.cell_count(), 1)};
  EXPECT_DOUBLE_EQ(mass(ShapeSet(g)), 1.0);
}

TEST(Mass, DegeneratePolygonIsEmpty) {
  PolygonLoops p{{{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)}}};
  try {
    ShapeSet s(p);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "empty set");
  }
}

TEST(Mass, SphereRadial) { EXPECT_NEAR(mass(sphere(1.0)), 4.0 * kPi / 3.0, 1e-10); }

TEST(Mass, TranslationInvariance) {
  const ShapeSet s = l_shape();
  Vec z(2);
  z << 0.37, -1.2;
  EXPECT_DOUBLE_EQ(mass(translate(s, z)), mass(s));
  const ShapeSet g = grid_ball(2, 1.0, 1.0 / 128);
  EXPECT_DOUBLE_EQ(mass(translate(g, z)), mass(g));
}

TEST(Validation, RejectsSelfIntersectingPolygon) {
  PolygonLoops bowtie{{{Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)}}};
  EXPECT_THROW(ShapeSet{bowtie}, Error);
}

TEST(Validation, RejectsNegativeRadius) {
  std::vector<double> r(16, 1.0);
  r[3] = -0.1;
  EXPECT_THROW(RadialProfile(Vec::Zero(2), r), Error);
}

TEST(Validation, BoundingRadiusContainsSet) {
  for (const ShapeSet& s : {l_shape(), ellipse(1.5, 0.5), grid_ball(2, 0.7, 0.05)}) {
    const double r = s.bounding_radius();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 2000; ++k) {
      Vec x(2);
      x << u(rng), u(rng);
      if (contains(s, x)) EXPECT_LE(x.norm(), r);
    }
  }
}

TEST(SymmetricDifference, IdenticalDisks) {
  EXPECT_NEAR(symmetric_difference_mass(disk(1.0), disk(1.0)), 0.0, 1e-12);
}

TEST(SymmetricDifference, ShiftedDisksMatchLens) {
  const ShapeSet a = disk(1.0, 512);
  const ShapeSet b = disk(1.0, 512, Vec2(0.1, 0.0));
  const double value = symmetric_difference_mass(a, b);
  EXPECT_NEAR(value, 0.39983, 1e-3);
  EXPECT_NEAR(value, lens_sym_diff(1.0, 0.1), 1e-4);
  EXPECT_NEAR(grid_oracle(a, b, 1.0 / 512, 1.2), lens_sym_diff(1.0, 0.1), 1e-3);
}

TEST(SymmetricDifference, ShiftedIntervals) {
  EXPECT_NEAR(symmetric_difference_mass(interval(-0.5, 0.5), interval(-0.4, 0.6)), 0.2, 1e-15);
}

TEST(SymmetricDifference, DimensionMismatch) {
  EXPECT_THROW(symmetric_difference_mass(interval(0, 1), unit_square()), Error);
}

TEST(SymmetricDifference, BallOverloadMatchesLens) {
  Vec c(2);
  c << 0.1, 0.0;
  EXPECT_NEAR(symmetric_difference_mass(disk(1.0), Ball{c, 1.0}), lens_sym_diff(1.0, 0.1), 1e-6);
  EXPECT_NEAR(symmetric_difference_mass(regular_polygon(4096, 1.0), Ball{c, 1.0}), lens_sym_diff(1.0, 0.1), 1e-5);
}

TEST(SymmetricDifference, InclusionExclusionAcrossEncodings) {
  // |S Δ T| = |S| + |T| - 2|S ∩ T| with the intersection computed independently.
  const ShapeSet s = unit_square();
  const ShapeSet t = disk(0.6, 512);
  const PolygonLoops ps = polygonize(s), pt = polygonize(t);
  // Intersection oracle: area of s ∩ t by cell counting.
  const double cell = 1.0 / 1024;
  long both = 0;
  Vec x(2);
  for (int j = -1024; j < 1024; ++j)
    for (int i = -1024; i < 1024; ++i) {
      x << (i + 0.5) * cell, (j + 0.5) * cell;
      both += contains(s, x) && contains(t, x);
    }
  const double inter = both * cell * cell;
  EXPECT_NEAR(symmetric_difference_mass(s, t), mass(s) + mass(t) - 2 * inter, 2e-3);
  const ShapeSet gs = grid_of(s, 1.0 / 256);
  EXPECT_NEAR(symmetric_difference_mass(gs, t), mass(s) + mass(t) - 2 * inter, 1e-2);
}

TEST(SymmetricDifference, MetricOnRandomGrids) {
  std::mt19937 rng(2024);
  std::bernoulli_distribution coin(0.5);
  GridFrame f;
  f.dim = 2;
  f.cell = 0.1;
  f.size = {12, 12, 1};
  auto random_grid = [&] {
    Grid g{f, std::vector<std::uint8_t>(f.cell_count())};
    for (auto& c : g.cells) c = coin(rng);
    g.cells[0] = 1;
    return ShapeSet(g);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const ShapeSet a = random_grid(), b = random_grid(), c = random_grid();
    const double ab = symmetric_difference_mass(a, b);
    EXPECT_DOUBLE_EQ(ab, symmetric_difference_mass(b, a));
    EXPECT_LE(symmetric_difference_mass(a, c), ab + symmetric_difference_mass(b, c) + 1e-12);
  }
}

TEST(SymmetricDifference, MetricOnPolygons) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    const ShapeSet a = rectangle(1.0, 0.7, Vec2(u(rng), u(rng)));
    const ShapeSet b = regular_polygon(7, 0.6, Vec2(u(rng), u(rng)));
    const ShapeSet c = unit_square(Vec2(u(rng), u(rng)));
    const double ab = symmetric_difference_mass(a, b);
    EXPECT_NEAR(ab, symmetric_difference_mass(b, a), 1e-9);
    EXPECT_LE(symmetric_difference_mass(a, c), ab + symmetric_difference_mass(b, c) + 1e-9);
  }
}

TEST(Boundary, UnitSquareEdges) {
  const auto samples = boundary_samples(unit_square());
  ASSERT_EQ(samples.size(), 4u);
  double total = 0;
  for (const auto& s : samples) {
    total += s.weight;
    EXPECT_NEAR(s.normal.norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.normal[0]) + std::abs(s.normal[1]), 1.0, 1e-15);
    // outward: the normal points away from the centre
    EXPECT_GT(s.normal.dot(s.point), 0.0);
  }
  EXPECT_DOUBLE_EQ(total, 4.0);
}

TEST(Boundary, RadialDiskCircumference) { EXPECT_NEAR(perimeter(disk(1.0, 512)), 2 * kPi, 1e-4); }

TEST(Boundary, LShapeExactPerimeter) { EXPECT_DOUBLE_EQ(perimeter(l_shape()), 4.0); }

TEST(Boundary, ConvexPolygonPerimeter) {
  const double exact = 7 * 2 * std::sin(kPi / 7);
  EXPECT_NEAR(perimeter(regular_polygon(7, 1.0)), exact, 1e-14);
}

TEST(Boundary, EllipseRadialMatchesRamanujan) {
  const double a = 1.5, b = 0.5;
  const double h = std::pow((a - b) / (a + b), 2);
  const double ramanujan = kPi * (a + b) * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h)));
  EXPECT_NEAR(perimeter(ellipse(a, b, 1024)), ramanujan, 1e-5);
}

TEST(Boundary, SphereRadialArea) { EXPECT_NEAR(perimeter(sphere(1.0)), 4 * kPi, 1e-10); }

TEST(Boundary, OffsetSphereArea) {
  Vec z(3);
  z << 0.2, 0.1, -0.15;
  EXPECT_NEAR(perimeter(offset_ball3(1.0, z)), 4 * kPi, 1e-3);
}

TEST(Boundary, GridDiskContour) {
  const double p = perimeter(grid_ball(2, 1.0, 1.0 / 256));
  EXPECT_NEAR(p, 2 * kPi, 2e-2 * 2 * kPi);
}

TEST(Boundary, GridSphereContour) {
  const double p = perimeter(grid_ball(3, 1.0, 1.0 / 64));
  EXPECT_NEAR(p, 4 * kPi, 0.02 * 4 * kPi);
}

TEST(Boundary, GridNormalsAreUnitAndOutward) {
  for (const auto& s : boundary_samples(grid_ball(2, 1.0, 1.0 / 64))) {
    EXPECT_NEAR(s.normal.norm(), 1.0, 1e-12);
    EXPECT_GT(s.normal.dot(s.point), 0.0);
  }
}

TEST(Boundary, Intervals) {
  const auto samples = boundary_samples(interval(-0.5, 0.5));
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[0].weight + samples[1].weight, 2.0);
}

TEST(IntegrateRadial, DiskSecondMoment) {
  auto h = [](double t) { return t * t; };
  EXPECT_NEAR(integrate_radial(disk(1.0), h), kPi / 2, 1e-10);
  EXPECT_NEAR(integrate_radial(regular_polygon(4, std::sqrt(0.5)), h), 1.0 / 6.0, 1e-10);
  EXPECT_NEAR(integrate_radial(interval(-0.5, 0.5), h), 1.0 / 12.0, 1e-14);
}

TEST(IntegrateRadial, OffCentreDiskMatchesParallelAxis) {
  // ∫_{B(c,1)} |x|^2 = π/2 + π|c|^2
  auto h = [](double t) { return t * t; };
  EXPECT_NEAR(integrate_radial(disk(1.0, 512, Vec2(0.3, -0.2)), h), kPi / 2 + kPi * 0.13, 1e-8);
  EXPECT_NEAR(integrate_radial(offset_disk(1.0, Vec2(0.3, -0.2)), h), kPi / 2 + kPi * 0.13, 1e-8);
}

TEST(IntegrateRadial, RingMassOfPolygon) {
  // Annulus 0.2 < |x| < 0.4 lies inside the unit square centred at 0.
  const double ring = integrate_radial(unit_square(), [](double) { return 1.0; }, 0.2, 0.4);
  EXPECT_NEAR(ring, kPi * (0.16 - 0.04), 1e-9);
  // Square ∩ {|x| > 0.5}: 1 - quarter-disc pieces.
  const double outer = integrate_radial(unit_square(), [](double) { return 1.0; }, 0.5);
  EXPECT_NEAR(outer, 1.0 - kPi * 0.25, 1e-9);
}

TEST(IntegrateRadial, RadialProfileCrossingShell) {
  const ShapeSet e = ellipse(1.2, 1 / 1.2, 1024);
  const double outside = integrate_radial(e, [](double) { return 1.0; }, 1.0);
  EXPECT_NEAR(outside, mass(e) - intersection_mass(e, Ball{Vec::Zero(2), 1.0}), 1e-6);
}

TEST(IntersectionMass, GridDiskWithBall) {
  const ShapeSet g = grid_ball(2, 1.0, 1.0 / 256);
  Vec c(2);
  c << 0.1, 0;
  EXPECT_NEAR(symmetric_difference_mass(g, Ball{c, 1.0}), lens_sym_diff(1.0, 0.1), 5e-3);
}

TEST(Rasterize, PolygonScanlineMatchesContains) {
  const ShapeSet s = l_shape();
  const GridFrame f = GridFrame::centered(2, 1.0 / 64, 1.5);
  const Grid g = rasterize(s, f);
  for (std::size_t idx = 0; idx < g.cells.size(); idx += 7)
    EXPECT_EQ(g.cells[idx] != 0, contains(s, f.center(idx)));
  EXPECT_NEAR(ShapeSet(g).grid()->occupied() * f.cell_volume(), 0.75, 1e-12);
}
