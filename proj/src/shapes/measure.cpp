#include <algorithm>
#include <cmath>
#include <limits>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/shapes.hpp"
#include "polygon_ops.hpp"

namespace almlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Vec2 as2(const Vec& v) { return Vec2(v[0], v[1]); }

bool centered_at_origin(const RadialProfile& r) { return r.center().norm() < 1e-14; }

double interval_overlap(const IntervalSet& a, const IntervalSet& b) {
  double total = 0.0;
  for (const auto& [lo1, hi1] : a.intervals)
    for (const auto& [lo2, hi2] : b.intervals) total += std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
  return total;
}

// Directions and quadrature weights (including the sphere measure) of a
// spatial radial profile.
template <typename Fn>
void for_each_spatial_node(const RadialProfile& r, Fn&& fn) {
  const double dphi = 2.0 * kPi / r.n_phi();
  for (int i = 0; i < r.n_theta(); ++i) {
    const double th = r.theta_node(i);
    for (int j = 0; j < r.n_phi(); ++j) {
      const double ph = r.phi_node(j);
      Vec sigma(3);
      sigma << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
      fn(sigma, r.radii()[i * r.n_phi() + j], r.theta_weight(i) * dphi);
    }
  }
}

// Subinterval of [0, rmax] along x = c + rho sigma where |x| lies in [inner, outer].
// Calls piece(lo, hi) for each maximal piece; also splits at the closest approach.
template <typename Fn>
void ray_pieces(const Vec& c, const Vec& sigma, double rmax, double inner, double outer, Fn&& piece) {
  const double b = c.dot(sigma);
  const double cc = c.squaredNorm();
  std::vector<double> cuts{0.0, rmax};
  auto add_roots = [&](double radius) {
    const double disc = b * b - cc + radius * radius;
    if (disc <= 0) return;
    const double s = std::sqrt(disc);
    for (double root : {-b - s, -b + s})
      if (root > 0 && root < rmax) cuts.push_back(root);
  };
  if (inner > 0) add_roots(inner);
  if (outer < 1e299) add_roots(outer);
  if (-b > 0 && -b < rmax) cuts.push_back(-b);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    const double t = (c + mid * sigma).norm();
    if (t >= inner && t <= outer) piece(lo, hi);
  }
}

// Fixed-order Gauss-Legendre on [lo, hi].
template <typename Fn>
double gauss(Fn&& f, double lo, double hi, int order = 24) {
  const GaussRule& g = gauss_legendre(order);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  return s * half;
}

// Extends `base` (keeping its lattice alignment) so it also covers [lo, hi].
GridFrame covering_frame(const GridFrame& base, const std::array<double, 3>& lo,
                         const std::array<double, 3>& hi) {
  GridFrame f = base;
  for (int d = 0; d < f.dim; ++d) {
    const double blo = base.origin[d];
    const double bhi = base.origin[d] + base.size[d] * base.cell;
    const int below = std::max(0, static_cast<int>(std::ceil((blo - lo[d]) / base.cell)));
    const int above = std::max(0, static_cast<int>(std::ceil((hi[d] - bhi) / base.cell)));
    f.origin[d] = blo - below * base.cell;
    f.size[d] = base.size[d] + below + above;
  }
  return f;
}

std::pair<std::array<double, 3>, std::array<double, 3>> box_of(const ShapeSet& s) {
  std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
  if (const Grid* g = s.grid()) {
    for (int d = 0; d < g->frame.dim; ++d) {
      lo[d] = g->frame.origin[d];
      hi[d] = g->frame.origin[d] + g->frame.size[d] * g->frame.cell;
    }
    return {lo, hi};
  }
  const double r = s.bounding_radius();
  for (int d = 0; d < s.dimension(); ++d) {
    lo[d] = -r;
    hi[d] = r;
  }
  return {lo, hi};
}

double grid_xor(const Grid& a, const Grid& b) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) diff += (a.cells[i] != b.cells[i]);
  return static_cast<double>(diff) * a.frame.cell_volume();
}

bool same_frame(const GridFrame& a, const GridFrame& b) {
  return a.dim == b.dim && a.cell == b.cell && a.size == b.size && a.origin == b.origin;
}

}  // namespace

double mass(const ShapeSet& s) {
  const double m = std::visit(
      overloaded{
          [](const IntervalSet& iv) {
            double total = 0.0;
            for (const auto& [lo, hi] : iv.intervals) total += hi - lo;
            return total;
          },
          [](const PolygonLoops& p) {
            double total = 0.0;
            for (const auto& loop : p.loops) total += detail::signed_area(loop);
            return total;
          },
          [](const Grid& g) { return static_cast<double>(g.occupied()) * g.frame.cell_volume(); },
          [](const RadialProfile& r) {
            if (r.dim() == 2) {
              const auto& radii = r.radii();
              std::vector<double> terms(radii.size());
              for (std::size_t j = 0; j < radii.size(); ++j) terms[j] = 0.5 * radii[j] * radii[j];
              return pairwise_sum(terms) * 2.0 * kPi / static_cast<double>(radii.size());
            }
            double total = 0.0;
            for_each_spatial_node(r, [&](const Vec&, double rad, double w) { total += w * rad * rad * rad / 3.0; });
            return total;
          }},
      s.rep());
  if (!(m > 0) || !std::isfinite(m)) throw Error("empty set");
  return m;
}

bool contains(const ShapeSet& s, const Vec& x) {
  if (x.size() != s.dimension()) throw Error("point dimension mismatch");
  return std::visit(
      overloaded{
          [&](const IntervalSet& iv) {
            for (const auto& [lo, hi] : iv.intervals)
              if (x[0] >= lo && x[0] < hi) return true;
            return false;
          },
          [&](const PolygonLoops& p) { return detail::point_in_loops(p, as2(x)); },
          [&](const Grid& g) {
            const GridFrame& f = g.frame;
            int c[3] = {0, 0, 0};
            for (int d = 0; d < f.dim; ++d) {
              c[d] = static_cast<int>(std::floor((x[d] - f.origin[d]) / f.cell));
              if (c[d] < 0 || c[d] >= f.size[d]) return false;
            }
            return g.cells[f.index(c[0], c[1], c[2])] != 0;
          },
          [&](const RadialProfile& r) {
            Vec d = x - r.center();
            const double n = d.norm();
            if (n == 0.0) return true;
            return n < r.radius_toward(d);
          }},
      s.rep());
}

ShapeSet translate(const ShapeSet& s, const Vec& z) {
  if (z.size() != s.dimension()) throw Error("translation dimension mismatch");
  return std::visit(overloaded{[&](const IntervalSet& iv) {
                                 IntervalSet out = iv;
                                 for (auto& [lo, hi] : out.intervals) lo += z[0], hi += z[0];
                                 return ShapeSet(std::move(out));
                               },
                               [&](const PolygonLoops& p) {
                                 PolygonLoops out = p;
                                 for (auto& loop : out.loops)
                                   for (Vec2& v : loop) v += as2(z);
                                 return ShapeSet(std::move(out));
                               },
                               [&](const Grid& g) {
                                 Grid out = g;
                                 for (int d = 0; d < g.frame.dim; ++d) out.frame.origin[d] += z[d];
                                 return ShapeSet(std::move(out));
                               },
                               [&](const RadialProfile& r) { return ShapeSet(r.with_center(r.center() + z)); }},
                    s.rep());
}

ShapeSet scale(const ShapeSet& s, double t) {
  if (!(t > 0)) throw Error("scale factor must be positive");
  return std::visit(overloaded{[&](const IntervalSet& iv) {
                                 IntervalSet out = iv;
                                 for (auto& [lo, hi] : out.intervals) lo *= t, hi *= t;
                                 return ShapeSet(std::move(out));
                               },
                               [&](const PolygonLoops& p) {
                                 PolygonLoops out = p;
                                 for (auto& loop : out.loops)
                                   for (Vec2& v : loop) v *= t;
                                 return ShapeSet(std::move(out));
                               },
                               [&](const Grid& g) {
                                 Grid out = g;
                                 out.frame.cell *= t;
                                 for (int d = 0; d < g.frame.dim; ++d) out.frame.origin[d] *= t;
                                 return ShapeSet(std::move(out));
                               },
                               [&](const RadialProfile& r) { return ShapeSet(r.scaled(t)); }},
                    s.rep());
}

Grid rasterize(const ShapeSet& s, const GridFrame& frame) {
  if (frame.dim != s.dimension()) throw Error("dimension mismatch");
  Grid out{frame, std::vector<std::uint8_t>(frame.cell_count(), 0)};
  if (const PolygonLoops* p = s.polygon()) {
    // Even-odd scanline fill through the cell centres of each row.
    std::vector<double> xs;
    for (int j = 0; j < frame.size[1]; ++j) {
      const double y = frame.origin[1] + (j + 0.5) * frame.cell;
      xs.clear();
      for (const auto& loop : p->loops) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
          const Vec2& a = loop[i];
          const Vec2& b = loop[(i + 1) % n];
          if ((a.y() > y) != (b.y() > y)) xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
        }
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const int i0 = std::max(0, static_cast<int>(std::ceil((xs[k] - frame.origin[0]) / frame.cell - 0.5)));
        const int i1 = std::min(frame.size[0] - 1,
                                static_cast<int>(std::ceil((xs[k + 1] - frame.origin[0]) / frame.cell - 0.5)) - 1);
        for (int i = i0; i <= i1; ++i) out.cells[frame.index(i, j)] = 1;
      }
    }
    return out;
  }
  if (const Grid* g = s.grid(); g && same_frame(g->frame, frame)) return *g;
  for (std::size_t idx = 0; idx < out.cells.size(); ++idx) out.cells[idx] = contains(s, frame.center(idx)) ? 1 : 0;
  return out;
}

double default_cell_size(const ShapeSet& s) {
  if (const Grid* g = s.grid()) return g->frame.cell;
  const double m = mass(s);
  const double p = perimeter(s);
  double cell = 1e-3 * m / std::max(p, 1e-300);
  // Keep at most ~4M cells in 2D and ~8M in 3D.
  const double width = 2.0 * s.bounding_radius();
  const double cap = s.dimension() == 1 ? 1e6 : (s.dimension() == 2 ? 2048.0 : 200.0);
  return std::max(cell, width / cap);
}

PolygonLoops polygonize(const ShapeSet& s, int min_vertices) {
  if (s.dimension() != 2) throw Error("polygonize needs a planar set");
  if (const PolygonLoops* p = s.polygon()) return *p;
  if (const RadialProfile* r = s.radial()) {
    const int m = std::max<int>(min_vertices, static_cast<int>(r->radii().size()));
    std::vector<double> rad = r->resample(m);
    std::vector<Vec2> loop;
    loop.reserve(m);
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      loop.emplace_back(r->center()[0] + rad[j] * std::cos(th), r->center()[1] + rad[j] * std::sin(th));
    }
    return PolygonLoops{{std::move(loop)}};
  }
  throw Error("grid shapes cannot be polygonized");
}

namespace {

// Area of the intersection of two counter-clockwise convex loops by
// Sutherland-Hodgman clipping.
double convex_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  std::vector<Vec2> poly = a, next;
  const std::size_t nb = b.size();
  for (std::size_t j = 0; j < nb && !poly.empty(); ++j) {
    const Vec2& p = b[j];
    const Vec2 e = b[(j + 1) % nb] - p;
    auto side = [&](const Vec2& x) { return e.x() * (x.y() - p.y()) - e.y() * (x.x() - p.x()); };
    next.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& u = poly[i];
      const Vec2& v = poly[(i + 1) % n];
      const double su = side(u), sv = side(v);
      if (su >= 0) next.push_back(u);
      if ((su > 0 && sv < 0) || (su < 0 && sv > 0)) next.push_back(u + (su / (su - sv)) * (v - u));
    }
    poly.swap(next);
  }
  return poly.size() < 3 ? 0.0 : detail::signed_area(poly);
}

}  // namespace

double symmetric_difference_mass(const ShapeSet& s, const ShapeSet& t) {
  if (s.dimension() != t.dimension()) throw Error("dimension mismatch");
  if (s.intervals() && t.intervals())
    return mass(s) + mass(t) - 2.0 * interval_overlap(*s.intervals(), *t.intervals());

  const Grid* gs = s.grid();
  const Grid* gt = t.grid();
  if (gs && gt && same_frame(gs->frame, gt->frame)) return grid_xor(*gs, *gt);

  if (s.polygon() && t.polygon() && is_convex_polygon(s) && is_convex_polygon(t)) {
    // Clipping keeps full precision when the two polygons nearly coincide,
    // where the general overlay loses about 1e-6 relative.
    const double inter = convex_intersection_area(s.polygon()->loops[0], t.polygon()->loops[0]);
    return std::max(0.0, mass(s) + mass(t) - 2.0 * inter);
  }

  if (!gs && !gt && s.dimension() == 2) {
    namespace bg = boost::geometry;
    detail::BMulti a = detail::to_boost(polygonize(s));
    detail::BMulti b = detail::to_boost(polygonize(t));
    detail::BMulti out;
    bg::sym_difference(a, b, out);
    return bg::area(out);
  }

  // Rasterise both onto the finer lattice, extended to cover both sets.
  GridFrame base;
  if (gs && gt)
    base = gs->frame.cell <= gt->frame.cell ? gs->frame : gt->frame;
  else if (gs || gt)
    base = gs ? gs->frame : gt->frame;
  else
    base = GridFrame::centered(s.dimension(), std::min(default_cell_size(s), default_cell_size(t)),
                               std::max(s.bounding_radius(), t.bounding_radius()));
  auto [lo1, hi1] = box_of(s);
  auto [lo2, hi2] = box_of(t);
  std::array<double, 3> lo, hi;
  for (int d = 0; d < 3; ++d) lo[d] = std::min(lo1[d], lo2[d]), hi[d] = std::max(hi1[d], hi2[d]);
  const GridFrame frame = covering_frame(base, lo, hi);
  return grid_xor(rasterize(s, frame), rasterize(t, frame));
}

double intersection_mass(const ShapeSet& s, const Ball& b) {
  if (b.dim() != s.dimension()) throw Error("dimension mismatch");
  const double a = b.radius;
  return std::visit(
      overloaded{
          [&](const IntervalSet& iv) {
            IntervalSet ball{{{b.center[0] - a, b.center[0] + a}}};
            return interval_overlap(iv, ball);
          },
          [&](const PolygonLoops& p) { return detail::disc_intersection_area(p, as2(b.center), a); },
          [&](const Grid& g) {
            const GridFrame& f = g.frame;
            constexpr int kSub = 8;
            int subs = 1;
            for (int d = 0; d < f.dim; ++d) subs *= kSub;
            double covered = 0.0;
            for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
              if (!g.cells[idx]) continue;
              auto c = f.coords(idx);
              double near2 = 0.0, far2 = 0.0;
              for (int d = 0; d < f.dim; ++d) {
                const double lo = f.origin[d] + c[d] * f.cell - b.center[d];
                const double hi = lo + f.cell;
                const double nearest = (lo > 0) ? lo : (hi < 0 ? hi : 0.0);
                near2 += nearest * nearest;
                far2 += std::max(lo * lo, hi * hi);
              }
              if (far2 <= a * a) {
                covered += 1.0;
              } else if (near2 < a * a) {
                int inside = 0;
                for (int sidx = 0; sidx < subs; ++sidx) {
                  int rem = sidx;
                  double r2 = 0.0;
                  for (int d = 0; d < f.dim; ++d) {
                    const int k = rem % kSub;
                    rem /= kSub;
                    const double x = f.origin[d] + (c[d] + (k + 0.5) / kSub) * f.cell - b.center[d];
                    r2 += x * x;
                  }
                  inside += (r2 < a * a);
                }
                covered += static_cast<double>(inside) / subs;
              }
            }
            return covered * f.cell_volume();
          },
          [&](const RadialProfile& r) {
            const Vec delta = b.center - r.center();
            const double dd = delta.squaredNorm();
            auto ray = [&](const Vec& sigma, double rmax, int power) {
              const double sd = sigma.dot(delta);
              const double disc = sd * sd - dd + a * a;
              if (disc <= 0) return 0.0;
              const double root = std::sqrt(disc);
              const double lo = std::max(0.0, sd - root);
              const double hi = std::min(rmax, sd + root);
              if (hi <= lo) return 0.0;
              return (std::pow(hi, power) - std::pow(lo, power)) / power;
            };
            if (r.dim() == 2) {
              const auto& dense = r.dense_samples();
              const int m = static_cast<int>(dense.size());
              std::vector<double> terms(m);
              for (int j = 0; j < m; ++j) {
                const double th = 2.0 * kPi * j / m;
                Vec sigma(2);
                sigma << std::cos(th), std::sin(th);
                terms[j] = ray(sigma, dense[j], 2);
              }
              return pairwise_sum(terms) * 2.0 * kPi / m;
            }
            double total = 0.0;
            for_each_spatial_node(r, [&](const Vec& sigma, double rad, double w) { total += w * ray(sigma, rad, 3); });
            return total;
          }},
      s.rep());
}

double symmetric_difference_mass(const ShapeSet& s, const Ball& b) {
  return std::max(0.0, mass(s) + b.mass() - 2.0 * intersection_mass(s, b));
}

double integrate_radial(const ShapeSet& s, const std::function<double(double)>& phi, double inner, double outer) {
  if (!(outer > inner)) return 0.0;
  const int n = s.dimension();
  // Phi(R) = integral of phi(t) t^{n-1} over [inner, min(R, outer)].
  auto antiderivative = [&](double radius) {
    const double hi = std::min(radius, outer);
    if (hi <= inner) return 0.0;
    return integrate([&](double t) { return phi(t) * std::pow(t, n - 1); }, inner, hi);
  };
  return std::visit(
      overloaded{
          [&](const IntervalSet& iv) {
            double total = 0.0;
            auto add = [&](double lo, double hi) {  // |x| ranges over [lo, hi]
              lo = std::max(lo, inner);
              hi = std::min(hi, outer);
              if (hi > lo) total += integrate(phi, lo, hi);
            };
            for (const auto& [lo, hi] : iv.intervals) {
              if (hi > 0) add(std::max(lo, 0.0), hi);
              if (lo < 0) add(std::max(-hi, 0.0), -lo);
            }
            return total;
          },
          [&](const PolygonLoops& p) {
            double total = 0.0;
            for (const auto& loop : p.loops) {
              const std::size_t m = loop.size();
              for (std::size_t i = 0; i < m; ++i) {
                const Vec2 a = loop[i];
                const Vec2 e = loop[(i + 1) % m] - a;
                const double cross_ae = a.x() * e.y() - a.y() * e.x();
                if (std::abs(cross_ae) <= 1e-300) continue;
                const Vec2 q = a + e;
                const double base = std::atan2(a.y(), a.x());
                const double span = std::atan2(a.x() * q.y() - a.y() * q.x(), a.dot(q));
                auto rho = [&](double theta) {
                  const Vec2 sigma(std::cos(base + theta), std::sin(base + theta));
                  return cross_ae / (sigma.x() * e.y() - sigma.y() * e.x());
                };
                // Split where the edge crosses the circles |x| = inner, outer.
                std::vector<double> cuts{0.0, std::abs(span)};
                for (double radius : {inner, outer}) {
                  if (radius <= 0 || radius > 1e299) continue;
                  const double A = e.squaredNorm(), B = 2.0 * a.dot(e), C = a.squaredNorm() - radius * radius;
                  const double disc = B * B - 4 * A * C;
                  if (disc <= 0) continue;
                  for (double t : {(-B - std::sqrt(disc)) / (2 * A), (-B + std::sqrt(disc)) / (2 * A)}) {
                    if (t <= 0 || t >= 1) continue;
                    const Vec2 x = a + t * e;
                    const double ang = std::abs(std::atan2(a.x() * x.y() - a.y() * x.x(), a.dot(x)));
                    cuts.push_back(ang);
                  }
                }
                std::sort(cuts.begin(), cuts.end());
                const double sgn = span >= 0 ? 1.0 : -1.0;
                double edge_total = 0.0;
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                  edge_total += integrate([&](double u) { return antiderivative(rho(sgn * u)); }, cuts[k], cuts[k + 1], 1e-11);
                total += sgn * edge_total;
              }
            }
            return total;
          },
          [&](const Grid& g) {
            const GridFrame& f = g.frame;
            std::vector<double> terms;
            terms.reserve(g.occupied());
            for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
              if (!g.cells[idx]) continue;
              const double t = f.center(idx).norm();
              if (t >= inner && t <= outer) terms.push_back(phi(t));
            }
            return pairwise_sum(terms) * f.cell_volume();
          },
          [&](const RadialProfile& r) {
            if (r.dim() == 2 && centered_at_origin(r)) {
              const auto& dense = r.dense_samples();
              const int m = static_cast<int>(dense.size());
              const double lo_r = *std::min_element(dense.begin(), dense.end());
              const double hi_r = *std::max_element(dense.begin(), dense.end());
              const bool crosses = (inner > 0 && lo_r < inner && hi_r > inner) || (outer < 1e299 && lo_r < outer && hi_r > outer);
              if (!crosses) {
                const auto& radii = r.radii();
                std::vector<double> terms(radii.size());
                for (std::size_t j = 0; j < radii.size(); ++j) terms[j] = antiderivative(radii[j]);
                return pairwise_sum(terms) * 2.0 * kPi / static_cast<double>(radii.size());
              }
              // The integrand has kinks where the profile crosses a circle: split there.
              std::vector<double> cuts{0.0, 2.0 * kPi};
              for (double radius : {inner, outer}) {
                if (radius <= 0 || radius > 1e299) continue;
                for (int j = 0; j < m; ++j) {
                  const double r0 = dense[j] - radius, r1 = dense[(j + 1) % m] - radius;
                  if ((r0 < 0) != (r1 < 0)) {
                    const double t0 = 2.0 * kPi * j / m, t1 = 2.0 * kPi * (j + 1) / m;
                    cuts.push_back(bisect([&](double th) { return r.radius_at(th) - radius; }, t0, t1, 1e-13));
                  }
                }
              }
              std::sort(cuts.begin(), cuts.end());
              double total = 0.0;
              for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                total += integrate([&](double th) { return antiderivative(r.radius_at(th)); }, cuts[k], cuts[k + 1], 1e-11);
              return total;
            }
            // Off-centre profiles: ray quadrature from the profile centre.
            const Vec& c = r.center();
            auto along_ray = [&](const Vec& sigma, double rmax) {
              double acc = 0.0;
              ray_pieces(c, sigma, rmax, inner, outer, [&](double lo, double hi) {
                acc += gauss([&](double rho) { return phi((c + rho * sigma).norm()) * std::pow(rho, n - 1); }, lo, hi);
              });
              return acc;
            };
            if (r.dim() == 2) {
              const auto& dense = r.dense_samples();
              const int m = static_cast<int>(dense.size());
              std::vector<double> terms(m);
              for (int j = 0; j < m; ++j) {
                const double th = 2.0 * kPi * j / m;
                Vec sigma(2);
                sigma << std::cos(th), std::sin(th);
                terms[j] = along_ray(sigma, dense[j]);
              }
              return pairwise_sum(terms) * 2.0 * kPi / m;
            }
            double total = 0.0;
            for_each_spatial_node(r, [&](const Vec& sigma, double rad, double w) {
              if (centered_at_origin(r)) {
                total += w * antiderivative(rad);
              } else {
                total += w * along_ray(sigma, rad);
              }
            });
            return total;
          }},
      s.rep());
}

bool is_convex_polygon(const ShapeSet& s, double tol) {
  const PolygonLoops* p = s.polygon();
  if (!p || p->loops.size() != 1) return false;
  const auto& loop = p->loops[0];
  const std::size_t n = loop.size();
  double scale = 0.0;
  for (const Vec2& v : loop) scale = std::max(scale, v.squaredNorm());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = loop[(i + 1) % n] - loop[i];
    const Vec2 e2 = loop[(i + 2) % n] - loop[(i + 1) % n];
    if (e1.x() * e2.y() - e1.y() * e2.x() < -tol * std::max(scale, 1.0)) return false;
  }
  return true;
}

}  // namespace almlab
