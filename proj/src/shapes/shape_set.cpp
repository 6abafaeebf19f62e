#include <algorithm>
#include <cmath>
#include <numeric>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/shapes.hpp"
#include "polygon_ops.hpp"

namespace almlab {

std::string to_string(Encoding e) {
  switch (e) {
    case Encoding::polygon: return "polygon";
    case Encoding::grid: return "grid";
    case Encoding::radial: return "radial";
  }
  return "unknown";
}

std::array<int, 3> GridFrame::coords(std::size_t idx) const {
  const std::size_t nx = size[0], ny = size[1];
  return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
          static_cast<int>(idx / (nx * ny))};
}

Vec GridFrame::center(std::size_t idx) const {
  auto c = coords(idx);
  Vec x(dim);
  for (int d = 0; d < dim; ++d) x[d] = origin[d] + (c[d] + 0.5) * cell;
  return x;
}

double GridFrame::cell_volume() const { return std::pow(cell, dim); }

GridFrame GridFrame::centered(int dim, double cell, double half_width) {
  if (!(cell > 0)) throw Error("grid cell size must be positive");
  if (dim < 1 || dim > 3) throw Error("grids support dimensions 1 to 3");
  GridFrame f;
  f.dim = dim;
  f.cell = cell;
  const int half = static_cast<int>(std::ceil(half_width / cell - 1e-9));
  for (int d = 0; d < 3; ++d) {
    if (d < dim) {
      f.size[d] = 2 * half;
      f.origin[d] = -half * cell;
    } else {
      f.size[d] = 1;
      f.origin[d] = 0.0;
    }
  }
  return f;
}

std::size_t Grid::occupied() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

double Ball::mass() const { return unit_ball_volume(dim()) * std::pow(radius, dim()); }

Ball Ball::with_mass(int dim, double m, Vec center) {
  if (!(m > 0)) throw Error("ball mass must be positive");
  if (center.size() == 0) center = Vec::Zero(dim);
  if (center.size() != dim) throw Error("ball center dimension mismatch");
  return Ball{std::move(center), std::pow(m / unit_ball_volume(dim), 1.0 / dim)};
}

namespace {

IntervalSet normalize(IntervalSet s) {
  for (auto& [lo, hi] : s.intervals) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error("interval endpoints must be finite");
    if (hi < lo) std::swap(lo, hi);
  }
  std::erase_if(s.intervals, [](const auto& iv) { return iv.second - iv.first <= 0.0; });
  std::sort(s.intervals.begin(), s.intervals.end());
  IntervalSet out;
  for (const auto& iv : s.intervals) {
    if (!out.intervals.empty() && iv.first <= out.intervals.back().second)
      out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
    else
      out.intervals.push_back(iv);
  }
  return out;
}

void validate_polygon(const PolygonLoops& p) {
  if (p.loops.empty()) throw Error("empty set");
  for (const auto& loop : p.loops) {
    if (loop.size() < 3) throw Error("polygon loops need at least three vertices");
    for (const Vec2& v : loop)
      if (!v.allFinite()) throw Error("polygon vertices must be finite");
  }
  double area = 0.0;
  for (const auto& loop : p.loops) area += detail::signed_area(loop);
  if (!(area > 0)) throw Error("empty set");
  detail::BMulti m = detail::to_boost(p);
  boost::geometry::validity_failure_type failure;
  if (!boost::geometry::is_valid(m, failure))
    throw Error("polygon loops must be simple, non-overlapping and consistently oriented (" +
                std::string(boost::geometry::validity_failure_type_message(failure)) + ")");
}

}  // namespace

ShapeSet::ShapeSet(IntervalSet s) : rep_(normalize(std::move(s))) {
  if (std::get<IntervalSet>(rep_).intervals.empty()) throw Error("empty set");
  finish();
}

ShapeSet::ShapeSet(PolygonLoops p) : rep_(std::move(p)) {
  validate_polygon(std::get<PolygonLoops>(rep_));
  finish();
}

ShapeSet::ShapeSet(Grid g) : rep_(std::move(g)) {
  const Grid& grid = std::get<Grid>(rep_);
  const GridFrame& f = grid.frame;
  if (!(f.cell > 0) || !std::isfinite(f.cell)) throw Error("grid cell size must be positive");
  if (f.dim < 1 || f.dim > 3) throw Error("grids support dimensions 1 to 3");
  for (int d = 0; d < 3; ++d) {
    if (f.size[d] < 1) throw Error("grid extents must be positive");
    if (d >= f.dim && f.size[d] != 1) throw Error("unused grid axes must have extent 1");
  }
  if (grid.cells.size() != f.cell_count()) throw Error("grid cell array does not match its extents");
  for (auto c : grid.cells)
    if (c > 1) throw Error("grid cells must be 0 or 1");
  if (grid.occupied() == 0) throw Error("empty set");
  finish();
}

ShapeSet::ShapeSet(RadialProfile r) : rep_(std::move(r)) { finish(); }

Encoding ShapeSet::encoding() const {
  switch (rep_.index()) {
    case 0:
    case 1: return Encoding::polygon;
    case 2: return Encoding::grid;
    default: return Encoding::radial;
  }
}

void ShapeSet::finish() {
  struct Visitor {
    ShapeSet& self;
    void operator()(const IntervalSet& s) {
      self.dim_ = 1;
      double r = 0.0;
      for (const auto& [lo, hi] : s.intervals) r = std::max({r, std::abs(lo), std::abs(hi)});
      self.bounding_radius_ = r;
    }
    void operator()(const PolygonLoops& p) {
      self.dim_ = 2;
      double r = 0.0;
      for (const auto& loop : p.loops)
        for (const Vec2& v : loop) r = std::max(r, v.norm());
      self.bounding_radius_ = r;
    }
    void operator()(const Grid& g) {
      const GridFrame& f = g.frame;
      self.dim_ = f.dim;
      double r2 = 0.0;
      for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
        if (!g.cells[idx]) continue;
        auto c = f.coords(idx);
        double s = 0.0;
        for (int d = 0; d < f.dim; ++d) {
          double lo = f.origin[d] + c[d] * f.cell;
          double hi = lo + f.cell;
          s += std::max(lo * lo, hi * hi);
        }
        r2 = std::max(r2, s);
      }
      self.bounding_radius_ = std::sqrt(r2);
    }
    void operator()(const RadialProfile& r) {
      self.dim_ = r.dim();
      double rmax = 0.0;
      if (r.dim() == 2) {
        for (double v : r.resample(std::max<int>(8 * static_cast<int>(r.radii().size()), 4096)))
          rmax = std::max(rmax, v);
        rmax *= 1.0 + 1e-9;
      } else {
        for (double v : r.radii()) rmax = std::max(rmax, v);
      }
      self.bounding_radius_ = r.center().norm() + rmax;
    }
  };
  std::visit(Visitor{*this}, rep_);
  (void)mass(*this);  // throws "empty set" for degenerate inputs
}

}  // namespace almlab
