#include <algorithm>
#include <cmath>
#include <complex>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

namespace {

Vec make2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec make3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

void polygon_samples(const PolygonLoops& p, std::vector<BoundarySample>& out) {
  for (const auto& loop : p.loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[(i + 1) % n];
      const Vec2 e = b - a;
      const double len = e.norm();
      if (len == 0.0) continue;
      // Material lies to the left of every loop, so the outward normal is the right-hand perpendicular.
      out.push_back({make2(0.5 * (a.x() + b.x()), 0.5 * (a.y() + b.y())), make2(e.y() / len, -e.x() / len), len});
    }
  }
}

void planar_radial_samples(const RadialProfile& r, std::vector<BoundarySample>& out) {
  const auto& rad = r.radii();
  const std::vector<double> dr = r.sample_derivatives();
  const int n = static_cast<int>(rad.size());
  const double dth = 2.0 * kPi / n;
  for (int j = 0; j < n; ++j) {
    const double th = dth * j;
    const double c = std::cos(th), s = std::sin(th);
    // X(theta) = center + r(theta) (cos, sin); X' = r' (cos, sin) + r (-sin, cos).
    const double xp = dr[j] * c - rad[j] * s;
    const double yp = dr[j] * s + rad[j] * c;
    const double speed = std::hypot(xp, yp);
    if (speed == 0.0) continue;
    out.push_back({make2(r.center()[0] + rad[j] * c, r.center()[1] + rad[j] * s), make2(yp / speed, -xp / speed),
                   speed * dth});
  }
}

// Periodic spectral derivative of one ring of samples.
std::vector<double> periodic_derivative(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n, 0.0);
  const int kmax = (n - 1) / 2;
  for (int k = 1; k <= kmax; ++k) {
    std::complex<double> c(0.0, 0.0);
    for (int j = 0; j < n; ++j) c += v[j] * std::polar(1.0, -2.0 * kPi * k * j / n);
    for (int j = 0; j < n; ++j) out[j] += 2.0 * std::real(std::complex<double>(0.0, k) * c * std::polar(1.0, 2.0 * kPi * k * j / n));
  }
  for (double& x : out) x /= n;
  return out;
}

void spatial_radial_samples(const RadialProfile& r, std::vector<BoundarySample>& out) {
  const int nt = r.n_theta(), np = r.n_phi();
  const auto& rad = r.radii();
  std::vector<double> mu(nt), bw(nt);
  for (int i = 0; i < nt; ++i) mu[i] = std::cos(r.theta_node(i));
  for (int i = 0; i < nt; ++i) {
    double prod = 1.0;
    for (int j = 0; j < nt; ++j)
      if (j != i) prod *= mu[i] - mu[j];
    bw[i] = 1.0 / prod;
  }
  // Polynomial differentiation in mu across the Gauss nodes, per phi column.
  std::vector<double> dmu(rad.size(), 0.0);
  for (int i = 0; i < nt; ++i) {
    for (int jp = 0; jp < np; ++jp) {
      double diag = 0.0, acc = 0.0;
      for (int k = 0; k < nt; ++k) {
        if (k == i) continue;
        const double dik = (bw[k] / bw[i]) / (mu[i] - mu[k]);
        diag -= dik;
        acc += dik * rad[k * np + jp];
      }
      dmu[i * np + jp] = acc + diag * rad[i * np + jp];
    }
  }
  const double dphi = 2.0 * kPi / np;
  for (int i = 0; i < nt; ++i) {
    const double th = r.theta_node(i);
    const double st = std::sin(th), ct = std::cos(th);
    std::vector<double> ring(rad.begin() + i * np, rad.begin() + (i + 1) * np);
    const std::vector<double> dphi_r = periodic_derivative(ring);
    for (int j = 0; j < np; ++j) {
      const double ph = r.phi_node(j);
      const Vec3 sigma(st * std::cos(ph), st * std::sin(ph), ct);
      const Vec3 e_theta(ct * std::cos(ph), ct * std::sin(ph), -st);
      const Vec3 e_phi(-std::sin(ph), std::cos(ph), 0.0);
      const double rr = ring[j];
      const double r_theta = -st * dmu[i * np + j];
      const double r_phi_s = dphi_r[j] / st;
      const Vec3 nvec = rr * sigma - r_theta * e_theta - r_phi_s * e_phi;
      const double len = nvec.norm();
      if (len == 0.0) continue;
      const Vec3 x = rr * sigma;
      out.push_back({make3(r.center()[0] + x.x(), r.center()[1] + x.y(), r.center()[2] + x.z()),
                     make3(nvec.x() / len, nvec.y() / len, nvec.z() / len),
                     r.theta_weight(i) * dphi * rr * len});
    }
  }
}

void interval_samples(const IntervalSet& s, std::vector<BoundarySample>& out) {
  Vec left(1), right(1);
  left << -1.0;
  right << 1.0;
  for (const auto& [lo, hi] : s.intervals) {
    Vec a(1), b(1);
    a << lo;
    b << hi;
    out.push_back({a, left, 1.0});
    out.push_back({b, right, 1.0});
  }
}

// Indicator smoothed by `passes` two-tap box filters per axis. Each pass
// moves the sample lattice by half a cell, so one pass gives the vertex
// average of the adjacent cells. The array is zero-padded so contours close.
struct SmoothField {
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> origin{0.0, 0.0, 0.0};  // position of sample (0, 0, 0)
  std::vector<double> v;
  double at(int i, int j, int k = 0) const {
    return v[(static_cast<std::size_t>(k) * n[1] + j) * n[0] + i];
  }
};

SmoothField smooth_field(const Grid& g, int passes) {
  const GridFrame& f = g.frame;
  const int pad = passes + 1;
  SmoothField out;
  for (int d = 0; d < 3; ++d) out.n[d] = d < f.dim ? f.size[d] + 2 * pad : 1;
  out.v.assign(static_cast<std::size_t>(out.n[0]) * out.n[1] * out.n[2], 0.0);
  for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
    if (!g.cells[idx]) continue;
    auto c = f.coords(idx);
    out.v[(static_cast<std::size_t>(f.dim == 3 ? c[2] + pad : 0) * out.n[1] + (f.dim >= 2 ? c[1] + pad : 0)) *
              out.n[0] + c[0] + pad] = 1.0;
  }
  std::vector<double> tmp(out.v.size());
  const std::size_t stride[3] = {1, static_cast<std::size_t>(out.n[0]),
                                 static_cast<std::size_t>(out.n[0]) * out.n[1]};
  for (int p = 0; p < passes; ++p) {
    for (int d = 0; d < f.dim; ++d) {
      // new[i] = (old[i-1] + old[i]) / 2 along axis d
      for (std::size_t idx = 0; idx < out.v.size(); ++idx) {
        const int coord = static_cast<int>((idx / stride[d]) % out.n[d]);
        tmp[idx] = 0.5 * (out.v[idx] + (coord > 0 ? out.v[idx - stride[d]] : 0.0));
      }
      out.v.swap(tmp);
    }
  }
  for (int d = 0; d < f.dim; ++d) out.origin[d] = f.origin[d] + (0.5 - pad - 0.5 * passes) * f.cell;
  return out;
}

// Three passes keep the contour length within about 0.5% on discs and
// spheres at any resolution; a single pass (plain vertex averaging) leaves
// staircase ripples worth 1.5% in 2D and 2.4% in 3D.
constexpr int kContourPasses = 3;

constexpr double kIso = 0.5;

void grid1_samples(const Grid& g, std::vector<BoundarySample>& out) {
  const GridFrame& f = g.frame;
  for (int i = 0; i <= f.size[0]; ++i) {
    const bool left = i > 0 && g.cells[i - 1];
    const bool right = i < f.size[0] && g.cells[i];
    if (left == right) continue;
    Vec x(1), nrm(1);
    x << f.origin[0] + i * f.cell;
    nrm << (left ? 1.0 : -1.0);
    out.push_back({x, nrm, 1.0});
  }
}

// Marching squares on the smoothed indicator.
void grid2_samples(const Grid& g, std::vector<BoundarySample>& out) {
  const GridFrame& f = g.frame;
  const SmoothField vf = smooth_field(g, kContourPasses);
  const double h = f.cell;
  for (int j = 0; j + 1 < vf.n[1]; ++j) {
    for (int i = 0; i + 1 < vf.n[0]; ++i) {
      const double val[4] = {vf.at(i, j), vf.at(i + 1, j), vf.at(i + 1, j + 1), vf.at(i, j + 1)};
      const int off[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      bool in[4];
      int count = 0;
      for (int c = 0; c < 4; ++c) count += (in[c] = val[c] > kIso);
      if (count == 0 || count == 4) continue;
      const double x0 = vf.origin[0] + i * h, y0 = vf.origin[1] + j * h;
      auto crossing = [&](int e) {  // edge e joins corner e and e+1
        const int a = e, b = (e + 1) % 4;
        const double t = (kIso - val[a]) / (val[b] - val[a]);
        return Vec2(x0 + h * (off[a][0] + t * (off[b][0] - off[a][0])),
                    y0 + h * (off[a][1] + t * (off[b][1] - off[a][1])));
      };
      std::vector<std::pair<int, int>> segs;
      if (count == 2 && in[0] == in[2]) {
        const double centre = 0.25 * (val[0] + val[1] + val[2] + val[3]);
        // Corners of the class the centre does not belong to are isolated.
        const bool isolate_in = !(centre > kIso);
        for (int c = 0; c < 4; ++c)
          if (in[c] == isolate_in) segs.emplace_back((c + 3) % 4, c);
      } else {
        int edges[2], m = 0;
        for (int e = 0; e < 4; ++e)
          if (in[e] != in[(e + 1) % 4]) edges[m++] = e;
        segs.emplace_back(edges[0], edges[1]);
      }
      for (auto [ea, eb] : segs) {
        const Vec2 p = crossing(ea), q = crossing(eb);
        const Vec2 d = q - p;
        const double len = d.norm();
        if (len == 0.0) continue;
        Vec2 nrm(d.y() / len, -d.x() / len);
        const Vec2 mid = 0.5 * (p + q);
        const double fx = (mid.x() - x0) / h, fy = (mid.y() - y0) / h;
        const double gx = (1 - fy) * (val[1] - val[0]) + fy * (val[2] - val[3]);
        const double gy = (1 - fx) * (val[3] - val[0]) + fx * (val[2] - val[1]);
        if (nrm.x() * gx + nrm.y() * gy > 0) nrm = -nrm;
        out.push_back({make2(mid.x(), mid.y()), make2(nrm.x(), nrm.y()), len});
      }
    }
  }
}

// Marching tetrahedra (six-tetrahedron Freudenthal split) on the smoothed indicator.
void grid3_samples(const Grid& g, std::vector<BoundarySample>& out) {
  const GridFrame& f = g.frame;
  const SmoothField vf = smooth_field(g, kContourPasses);
  const double h = f.cell;
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k + 1 < vf.n[2]; ++k)
    for (int j = 0; j + 1 < vf.n[1]; ++j)
      for (int i = 0; i + 1 < vf.n[0]; ++i) {
        double cv[8];
        int count = 0;
        for (int c = 0; c < 8; ++c) {
          cv[c] = vf.at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
          count += cv[c] > kIso;
        }
        if (count == 0 || count == 8) continue;
        const Vec3 base(vf.origin[0] + i * h, vf.origin[1] + j * h, vf.origin[2] + k * h);
        auto corner = [&](int c) { return Vec3(base.x() + h * (c & 1), base.y() + h * ((c >> 1) & 1), base.z() + h * ((c >> 2) & 1)); };
        for (const auto& p : perms) {
          const int tet[4] = {0, 1 << p[0], (1 << p[0]) | (1 << p[1]), 7};
          int ins[4], outs[4], ni = 0, no = 0;
          for (int t : tet) (cv[t] > kIso ? ins[ni++] : outs[no++]) = t;
          if (ni == 0 || no == 0) continue;
          auto cross_pt = [&](int a, int b) {
            const double t = (kIso - cv[a]) / (cv[b] - cv[a]);
            return Vec3(corner(a) + t * (corner(b) - corner(a)));
          };
          Vec3 cin = Vec3::Zero(), cout = Vec3::Zero();
          for (int q = 0; q < ni; ++q) cin += corner(ins[q]) / ni;
          for (int q = 0; q < no; ++q) cout += corner(outs[q]) / no;
          const Vec3 away = cout - cin;
          auto emit = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
            Vec3 nrm = (b - a).cross(c - a);
            const double twice = nrm.norm();
            if (twice == 0.0) return;
            nrm /= twice;
            if (nrm.dot(away) < 0) nrm = -nrm;
            const Vec3 ctr = (a + b + c) / 3.0;
            out.push_back({make3(ctr.x(), ctr.y(), ctr.z()), make3(nrm.x(), nrm.y(), nrm.z()), 0.5 * twice});
          };
          if (ni == 1 || no == 1) {
            const int lone = ni == 1 ? ins[0] : outs[0];
            const int* others = ni == 1 ? outs : ins;
            emit(cross_pt(lone, others[0]), cross_pt(lone, others[1]), cross_pt(lone, others[2]));
          } else {
            const Vec3 a = cross_pt(ins[0], outs[0]), b = cross_pt(ins[0], outs[1]);
            const Vec3 c = cross_pt(ins[1], outs[1]), d = cross_pt(ins[1], outs[0]);
            emit(a, b, c);
            emit(a, c, d);
          }
        }
      }
}

}  // namespace

std::vector<BoundarySample> boundary_samples(const ShapeSet& s) {
  std::vector<BoundarySample> out;
  if (const IntervalSet* iv = s.intervals()) {
    interval_samples(*iv, out);
  } else if (const PolygonLoops* p = s.polygon()) {
    polygon_samples(*p, out);
  } else if (const RadialProfile* r = s.radial()) {
    if (r->dim() == 2)
      planar_radial_samples(*r, out);
    else
      spatial_radial_samples(*r, out);
  } else if (const Grid* g = s.grid()) {
    if (g->frame.dim == 1)
      grid1_samples(*g, out);
    else if (g->frame.dim == 2)
      grid2_samples(*g, out);
    else
      grid3_samples(*g, out);
  }
  if (out.empty()) throw Error("empty boundary");
  return out;
}

double perimeter(const ShapeSet& s) {
  const auto samples = boundary_samples(s);
  std::vector<double> w(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) w[i] = samples[i].weight;
  return pairwise_sum(w);
}

}  // namespace almlab
