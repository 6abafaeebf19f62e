#include "almlab/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

namespace almlab {

void SymmetrizationPlan::validate() const {
  if (directions.empty()) throw Error("symmetrization plan needs at least one direction");
  for (const Vec& w : directions)
    if (std::abs(w.norm() - 1.0) > 1e-9) throw Error("symmetrization directions must be unit vectors");
  if (max_iterations < 1) throw Error("max_iterations must be at least 1");
  if (!(stop_asymmetry > 0 && stop_asymmetry <= 1)) throw Error("stop_asymmetry must lie in (0, 1]");
}

namespace {

Vec normalized_int(const std::vector<int>& d) {
  Vec v(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<int>(i)] = d[i];
  return v.normalized();
}

int gcd_all(const std::vector<int>& d) {
  int g = 0;
  for (int x : d) g = std::gcd(g, std::abs(x));
  return g;
}

}  // namespace

SymmetrizationPlan SymmetrizationPlan::standard(int dim, int max_iterations, double stop_asymmetry, int random_extra,
                                                unsigned seed) {
  SymmetrizationPlan plan;
  plan.max_iterations = max_iterations;
  plan.stop_asymmetry = stop_asymmetry;
  std::vector<std::vector<int>> base;
  if (dim == 1) {
    base = {{1}};
  } else if (dim == 2) {
    // Axes, diagonals and the (2,1)-type directions. The angle between (1,0)
    // and (2,1) is an irrational multiple of pi, so the generated rotations
    // are dense and the iteration can only settle on a disc.
    base = {{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}, {-1, 2}, {-1, 1}, {-2, 1}};
  } else if (dim == 3) {
    base = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {2, 1, 0},
            {0, 2, 1}, {1, 0, 2}, {1, -1, 0}, {0, 1, -1}, {-1, 0, 1}, {1, 1, 1}};
  } else {
    throw Error("symmetrization plans are available in dimensions 1 to 3");
  }
  for (const auto& d : base) plan.directions.push_back(normalized_int(d));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-4, 4);
  while (random_extra > 0) {
    std::vector<int> d(dim);
    for (int& x : d) x = entry(rng);
    if (gcd_all(d) != 1) continue;
    plan.directions.push_back(normalized_int(d));
    --random_extra;
  }
  return plan;
}

std::vector<int> lattice_direction(const Vec& w, int max_entry) {
  const int n = static_cast<int>(w.size());
  const Vec u = w.normalized();
  // Scale so the largest component is an integer k and round the rest.
  int axis = 0;
  u.cwiseAbs().maxCoeff(&axis);
  for (int k = 1; k <= max_entry; ++k) {
    const double s = k / std::abs(u[axis]);
    std::vector<int> d(n);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const double x = u[i] * s;
      d[i] = static_cast<int>(std::lround(x));
      if (std::abs(x - d[i]) > 1e-7 * s) ok = false;
    }
    if (!ok || gcd_all(d) != 1) continue;
    if ((normalized_int(d) - u).norm() < 1e-9) return d;
  }
  throw Error("grid symmetrization needs a lattice direction");
}

namespace {

// Frame on the same lattice as `f` covering [-half_width, half_width]^dim.
GridFrame lattice_frame(const GridFrame& f, double half_width) {
  GridFrame out = f;
  for (int d = 0; d < f.dim; ++d) {
    const long lo = static_cast<long>(std::floor((-half_width - f.origin[d]) / f.cell));
    const long hi = static_cast<long>(std::ceil((half_width - f.origin[d]) / f.cell));
    out.origin[d] = f.origin[d] + lo * f.cell;
    out.size[d] = static_cast<int>(hi - lo);
  }
  return out;
}

Grid symmetrize_grid(const Grid& g, double bounding_radius, const Vec& w) {
  const std::vector<int> d = lattice_direction(w);
  const GridFrame& fin = g.frame;
  const int n = fin.dim;
  double dnorm = 0.0;
  for (int x : d) dnorm += double(x) * x;
  dnorm = std::sqrt(dnorm);
  const GridFrame f = lattice_frame(fin, bounding_radius + (dnorm + 3.0) * fin.cell);
  std::vector<std::uint8_t> src(f.cell_count(), 0);
  // Index shift between the two frames on the shared lattice.
  int shift[3] = {0, 0, 0};
  for (int a = 0; a < n; ++a) shift[a] = static_cast<int>(std::lround((fin.origin[a] - f.origin[a]) / f.cell));
  for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
    if (!g.cells[idx]) continue;
    auto c = fin.coords(idx);
    src[f.index(c[0] + shift[0], c[1] + shift[1], c[2] + shift[2])] = 1;
  }
  Grid out{f, std::vector<std::uint8_t>(f.cell_count(), 0)};
  const Vec u = w.normalized();
  const double step = dnorm * f.cell;  // distance between consecutive cells on a line
  auto inside = [&](const std::array<int, 3>& c) {
    for (int a = 0; a < 3; ++a)
      if (c[a] < 0 || c[a] >= f.size[a]) return false;
    return true;
  };
  std::vector<std::size_t> line;
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    auto c = f.coords(idx);
    std::array<int, 3> prev = c;
    for (int a = 0; a < n; ++a) prev[a] -= d[a];
    if (inside(prev)) continue;  // not the first cell of its line
    line.clear();
    std::size_t count = 0;
    for (std::array<int, 3> p = c; inside(p);) {
      const std::size_t j = f.index(p[0], p[1], p[2]);
      line.push_back(j);
      count += src[j];
      for (int a = 0; a < n; ++a) p[a] += d[a];
    }
    if (count == 0) continue;
    // Signed position of the first cell centre along w; place the block whose
    // centre is nearest the hyperplane, ties toward -w.
    const double s0 = f.center(line.front()).dot(u);
    const double t = -s0 / step - 0.5 * (static_cast<double>(count) - 1.0);
    const long k0 = static_cast<long>(std::ceil(t - 0.5 - 1e-9));
    if (k0 < 0 || k0 + static_cast<long>(count) > static_cast<long>(line.size()))
      throw Error("symmetrized line leaves the grid");
    for (std::size_t k = 0; k < count; ++k) out.cells[line[k0 + k]] = 1;
  }
  return out;
}

PolygonLoops symmetrize_polygon(const PolygonLoops& p, const Vec2& w) {
  const Vec2 perp(-w.y(), w.x());
  // Coordinates (u, v) = (<x, w>, <x, w_perp>).
  std::vector<std::vector<Vec2>> loops;
  std::vector<double> breaks;
  for (const auto& loop : p.loops) {
    std::vector<Vec2> uv;
    for (const Vec2& x : loop) {
      uv.emplace_back(x.dot(w), x.dot(perp));
      breaks.push_back(uv.back().y());
    }
    loops.push_back(std::move(uv));
  }
  std::sort(breaks.begin(), breaks.end());
  double scale = 0.0;
  for (double b : breaks) scale = std::max(scale, std::abs(b));
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(scale, 1.0); }),
               breaks.end());
  auto slice_length = [&](double v) {
    std::vector<double> xs;
    for (const auto& loop : loops) {
      const std::size_t n = loop.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % n];
        if ((a.y() > v) != (b.y() > v)) xs.push_back(a.x() + (v - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
    std::sort(xs.begin(), xs.end());
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) len += xs[k + 1] - xs[k];
    return len;
  };
  // The slice length is affine on each slab; recover its end values from two interior samples.
  struct Slab {
    double v0, v1, l0, l1;
  };
  std::vector<Slab> slabs;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double v0 = breaks[i], v1 = breaks[i + 1];
    const double a = slice_length(v0 + (v1 - v0) / 3.0);
    const double b = slice_length(v0 + 2.0 * (v1 - v0) / 3.0);
    slabs.push_back({v0, v1, std::max(0.0, 2.0 * a - b), std::max(0.0, 2.0 * b - a)});
  }
  const double tiny = 1e-12 * std::max(scale, 1.0);
  // Rounding leaves slightly different widths on either side of a breakpoint
  // where the slice length is continuous; unify them so no zig-zag survives.
  for (std::size_t k = 0; k + 1 < slabs.size(); ++k) {
    if (std::abs(slabs[k].l1 - slabs[k + 1].l0) <= 1e-9 * std::max(scale, 1.0)) {
      const double mid = 0.5 * (slabs[k].l1 + slabs[k + 1].l0);
      slabs[k].l1 = slabs[k + 1].l0 = mid;
    }
  }
  for (auto& sl : slabs) {
    if (sl.l0 <= tiny) sl.l0 = 0.0;
    if (sl.l1 <= tiny) sl.l1 = 0.0;
  }
  PolygonLoops out;
  std::size_t i = 0;
  while (i < slabs.size()) {
    if (slabs[i].l0 <= tiny && slabs[i].l1 <= tiny) {
      ++i;
      continue;
    }
    // Maximal run of slabs joined through positive widths.
    std::size_t j = i;
    while (j + 1 < slabs.size() && (slabs[j].l1 > tiny || slabs[j + 1].l0 > tiny) &&
           !(slabs[j + 1].l0 <= tiny && slabs[j + 1].l1 <= tiny))
      ++j;
    std::vector<Vec2> right;
    for (std::size_t k = i; k <= j; ++k) {
      right.emplace_back(0.5 * slabs[k].l0, slabs[k].v0);
      right.emplace_back(0.5 * slabs[k].l1, slabs[k].v1);
    }
    std::vector<Vec2> ring;
    auto push = [&](const Vec2& q) {
      if (ring.empty() || (q - ring.back()).norm() > tiny) ring.push_back(q);
    };
    for (const Vec2& q : right) push(q);
    for (auto it = right.rbegin(); it != right.rend(); ++it) push(Vec2(-it->x(), it->y()));
    while (ring.size() > 1 && (ring.front() - ring.back()).norm() <= tiny) ring.pop_back();
    // Drop vertices where the boundary doubles back on itself.
    for (bool changed = true; changed && ring.size() >= 3;) {
      changed = false;
      for (std::size_t k = 0; k < ring.size() && ring.size() >= 3; ++k) {
        const Vec2& a = ring[(k + ring.size() - 1) % ring.size()];
        const Vec2& b = ring[k];
        const Vec2& c = ring[(k + 1) % ring.size()];
        const Vec2 e1 = b - a, e2 = c - b;
        const double cross = e1.x() * e2.y() - e1.y() * e2.x();
        if (std::abs(cross) <= 1e-14 * e1.norm() * e2.norm() && e1.dot(e2) < 0) {
          ring.erase(ring.begin() + static_cast<long>(k));
          changed = true;
        }
      }
    }
    std::vector<Vec2> loop;
    for (const Vec2& q : ring) loop.push_back(q.x() * w + q.y() * perp);
    if (loop.size() >= 3) out.loops.push_back(std::move(loop));
    i = j + 1;
  }
  if (out.loops.empty()) throw Error("empty set");
  return out;
}

}  // namespace

ShapeSet steiner_symmetrize(const ShapeSet& s, const Vec& w) {
  if (w.size() != s.dimension()) throw Error("direction dimension mismatch");
  if (!(w.norm() > 0)) throw Error("symmetrization direction must be nonzero");
  const Vec u = w.normalized();
  if (const IntervalSet* iv = s.intervals()) {
    const double half = 0.5 * mass(s);
    (void)iv;
    return ShapeSet(IntervalSet{{{-half, half}}});
  }
  if (const Grid* g = s.grid()) return ShapeSet(symmetrize_grid(*g, s.bounding_radius(), u));
  if (s.dimension() == 2) return ShapeSet(symmetrize_polygon(polygonize(s), Vec2(u[0], u[1])));
  // Spatial radial profiles go through a grid at the default resolution.
  const GridFrame frame = GridFrame::centered(3, default_cell_size(s), s.bounding_radius());
  return ShapeSet(symmetrize_grid(rasterize(s, frame), s.bounding_radius(), u));
}

std::vector<DescentRecord> symmetrization_descent(const ShapeSet& s, const SymmetrizationPlan& plan,
                                                  const SurfaceTension& f, const RadialPotential& g) {
  plan.validate();
  if (!g.radial()) throw Error("descent guarantee requires radial potential");
  if (!g.nondecreasing()) throw Error("descent guarantee requires a nondecreasing potential");
  for (const Vec& w : plan.directions)
    if (w.size() != s.dimension()) throw Error("direction dimension mismatch");
  const double m = mass(s);
  const Ball ball = Ball::with_mass(s.dimension(), m);
  auto record = [&](int it, const ShapeSet& cur) {
    DescentRecord r;
    r.iteration = it;
    r.energy = free_energy(cur, f, g);
    r.mass = mass(cur);
    r.asymmetry = symmetric_difference_mass(cur, ball) / m;
    return r;
  };
  std::vector<DescentRecord> out{record(0, s)};
  ShapeSet cur = s;
  for (int it = 1; it <= plan.max_iterations; ++it) {
    cur = steiner_symmetrize(cur, plan.directions[(it - 1) % plan.directions.size()]);
    out.push_back(record(it, cur));
    if (out.back().asymmetry < plan.stop_asymmetry) break;
  }
  return out;
}

}  // namespace almlab
