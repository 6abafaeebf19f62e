#include "polygon_ops.hpp"

#include <cmath>

#include "almlab/error.hpp"

namespace almlab::detail {

double signed_area(const std::vector<Vec2>& loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = loop[i];
    const Vec2& q = loop[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

namespace {

bool point_in_loop(const std::vector<Vec2>& loop, const Vec2& x) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

BPolygon::ring_type to_ring(const std::vector<Vec2>& loop) {
  BPolygon::ring_type ring;
  for (const Vec2& v : loop) ring.push_back(BPoint(v.x(), v.y()));
  return ring;
}

// Signed area of triangle (0, p, q) intersected with the disc of radius r at 0.
double triangle_disc_area(Vec2 p, Vec2 q, double r) {
  const double cross = p.x() * q.y() - p.y() * q.x();
  if (std::abs(cross) < 1e-300 && p.dot(q) >= 0) return 0.0;
  auto sector = [r](const Vec2& a, const Vec2& b) {
    double ang = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    return 0.5 * r * r * ang;
  };
  auto tri = [](const Vec2& a, const Vec2& b) { return 0.5 * (a.x() * b.y() - a.y() * b.x()); };
  const double r2 = r * r;
  const bool pin = p.squaredNorm() <= r2;
  const bool qin = q.squaredNorm() <= r2;
  if (pin && qin) return tri(p, q);
  // Intersections of segment p + t (q - p) with the circle.
  const Vec2 d = q - p;
  const double A = d.squaredNorm();
  const double B = 2.0 * p.dot(d);
  const double C = p.squaredNorm() - r2;
  const double disc = B * B - 4 * A * C;
  if (disc <= 0 || A == 0) return sector(p, q);
  const double s = std::sqrt(disc);
  double t1 = (-B - s) / (2 * A);
  double t2 = (-B + s) / (2 * A);
  if (pin) {
    Vec2 x = p + t2 * d;
    return tri(p, x) + sector(x, q);
  }
  if (qin) {
    Vec2 x = p + t1 * d;
    return sector(p, x) + tri(x, q);
  }
  if (t1 >= 1 || t2 <= 0) return sector(p, q);
  Vec2 x1 = p + t1 * d;
  Vec2 x2 = p + t2 * d;
  return sector(p, x1) + tri(x1, x2) + sector(x2, q);
}

}  // namespace

bool point_in_loops(const PolygonLoops& p, const Vec2& x) {
  bool inside = false;
  for (const auto& loop : p.loops)
    if (point_in_loop(loop, x)) inside = !inside;
  return inside;
}

BMulti to_boost(const PolygonLoops& p) {
  BMulti out;
  std::vector<const std::vector<Vec2>*> holes;
  for (const auto& loop : p.loops) {
    if (signed_area(loop) > 0) {
      BPolygon poly;
      poly.outer() = to_ring(loop);
      out.push_back(std::move(poly));
    } else {
      holes.push_back(&loop);
    }
  }
  for (const auto* hole : holes) {
    bool placed = false;
    for (std::size_t i = 0; i < out.size() && !placed; ++i) {
      std::vector<Vec2> outer;
      for (const auto& pt : out[i].outer()) outer.emplace_back(pt.x(), pt.y());
      if (point_in_loop(outer, (*hole)[0])) {
        out[i].inners().push_back(to_ring(*hole));
        placed = true;
      }
    }
    if (!placed) throw Error("polygon hole is not contained in any outer loop");
  }
  return out;
}

PolygonLoops from_boost(const BMulti& m) {
  PolygonLoops out;
  auto add = [&out](const BPolygon::ring_type& ring) {
    std::vector<Vec2> loop;
    for (const auto& pt : ring) loop.emplace_back(pt.x(), pt.y());
    if (loop.size() >= 3) out.loops.push_back(std::move(loop));
  };
  for (const auto& poly : m) {
    add(poly.outer());
    for (const auto& inner : poly.inners()) add(inner);
  }
  return out;
}

double disc_intersection_area(const PolygonLoops& p, const Vec2& center, double radius) {
  double total = 0.0;
  for (const auto& loop : p.loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i)
      total += triangle_disc_area(loop[i] - center, loop[(i + 1) % n] - center, radius);
  }
  return total;
}

}  // namespace almlab::detail
