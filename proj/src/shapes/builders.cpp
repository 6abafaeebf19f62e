#include "almlab/builders.hpp"

#include <cmath>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

namespace almlab {

ShapeSet interval(double lo, double hi) { return ShapeSet(IntervalSet{{{lo, hi}}}); }

ShapeSet rectangle(double width, double height, Vec2 c) {
  const double w = 0.5 * width, h = 0.5 * height;
  return ShapeSet(PolygonLoops{{{c + Vec2(-w, -h), c + Vec2(w, -h), c + Vec2(w, h), c + Vec2(-w, h)}}});
}

ShapeSet unit_square(Vec2 center) { return rectangle(1.0, 1.0, center); }

ShapeSet l_shape() {
  return ShapeSet(PolygonLoops{{{Vec2(0, 0), Vec2(1, 0), Vec2(1, 0.5), Vec2(0.5, 0.5), Vec2(0.5, 1), Vec2(0, 1)}}});
}

ShapeSet regular_polygon(int sides, double circumradius, Vec2 center) {
  if (sides < 3) throw Error("polygon needs at least three sides");
  std::vector<Vec2> loop;
  for (int k = 0; k < sides; ++k) {
    const double th = 2.0 * kPi * k / sides;
    loop.push_back(center + circumradius * Vec2(std::cos(th), std::sin(th)));
  }
  return ShapeSet(PolygonLoops{{std::move(loop)}});
}

ShapeSet disk(double radius, int samples, Vec2 center) {
  if (!(radius > 0)) throw Error("radius must be positive");
  return ShapeSet(RadialProfile(Vec(center), std::vector<double>(samples, radius)));
}

ShapeSet ellipse(double a, double b, int samples) {
  std::vector<double> r(samples);
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * kPi * j / samples;
    r[j] = 1.0 / std::sqrt(std::pow(std::cos(th) / a, 2) + std::pow(std::sin(th) / b, 2));
  }
  return ShapeSet(RadialProfile(Vec::Zero(2), std::move(r)));
}

ShapeSet offset_disk(double radius, const Vec2& z, int samples) {
  if (z.norm() >= radius) throw Error("offset ball must contain the origin");
  std::vector<double> r(samples);
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * kPi * j / samples;
    const double zs = z.x() * std::cos(th) + z.y() * std::sin(th);
    r[j] = zs + std::sqrt(radius * radius - z.squaredNorm() + zs * zs);
  }
  return ShapeSet(RadialProfile(Vec::Zero(2), std::move(r)));
}

ShapeSet sphere(double radius, int n_theta, int n_phi, Vec center) {
  if (center.size() == 0) center = Vec::Zero(3);
  return ShapeSet(RadialProfile(std::move(center), n_theta, n_phi,
                                std::vector<double>(static_cast<std::size_t>(n_theta) * n_phi, radius)));
}

ShapeSet offset_ball3(double radius, const Vec& z, int n_theta, int n_phi) {
  if (z.norm() >= radius) throw Error("offset ball must contain the origin");
  // Build the node directions through a throwaway profile.
  RadialProfile probe(Vec::Zero(3), n_theta, n_phi, std::vector<double>(static_cast<std::size_t>(n_theta) * n_phi, 1.0));
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double th = probe.theta_node(i);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = probe.phi_node(j);
      const Vec3 sigma(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const double zs = sigma.dot(Vec3(z[0], z[1], z[2]));
      r.push_back(zs + std::sqrt(radius * radius - z.squaredNorm() + zs * zs));
    }
  }
  return ShapeSet(RadialProfile(Vec::Zero(3), n_theta, n_phi, std::move(r)));
}

ShapeSet perturbed_disk(double base, const std::vector<double>& amp, const std::vector<double>& phase,
                        int samples) {
  std::vector<double> r(samples);
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * kPi * j / samples;
    double s = 1.0;
    for (std::size_t k = 0; k < amp.size(); ++k)
      s += amp[k] * std::cos((k + 1) * th + (k < phase.size() ? phase[k] : 0.0));
    r[j] = base * s;
  }
  return ShapeSet(RadialProfile(Vec::Zero(2), std::move(r)));
}

ShapeSet grid_ball(int dim, double radius, double cell) {
  const GridFrame f = GridFrame::centered(dim, cell, radius + 2.0 * cell);
  Grid g{f, std::vector<std::uint8_t>(f.cell_count(), 0)};
  for (std::size_t idx = 0; idx < g.cells.size(); ++idx) g.cells[idx] = f.center(idx).norm() < radius ? 1 : 0;
  return ShapeSet(std::move(g));
}

ShapeSet grid_of(const ShapeSet& s, double cell, double margin) {
  const GridFrame f = GridFrame::centered(s.dimension(), cell, s.bounding_radius() + margin + 2.0 * cell);
  return ShapeSet(rasterize(s, f));
}

}  // namespace almlab
