#include "almlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

namespace almlab {

namespace {

int coarse_points(int n) { return n == 1 ? 41 : n == 2 ? 17 : 9; }

}  // namespace

AsymmetryResult asymmetry(const ShapeSet& s, double m) {
  const int n = s.dimension();
  const double ms = mass(s);
  if (!(m > 0) || std::abs(ms - m) > 1e-6 * m) throw Error("asymmetry needs |S| = m");
  const double a = Ball::with_mass(n, m).radius;
  const double R = std::max(s.bounding_radius(), a);
  AsymmetryResult res;
  auto objective = [&](const Vec& z) {
    ++res.evaluations;
    return symmetric_difference_mass(s, Ball{z, a}) / m;
  };

  const int K = coarse_points(n);
  const double step0 = 2.0 * R / (K - 1);
  std::vector<std::pair<double, Vec>> coarse;
  const int total = n == 1 ? K : n == 2 ? K * K : K * K * K;
  for (int idx = 0; idx < total; ++idx) {
    Vec z(n);
    int rem = idx;
    for (int d = 0; d < n; ++d) {
      z[d] = -R + step0 * (rem % K);
      rem /= K;
    }
    if (z.norm() > R * (1 + 1e-12)) continue;
    coarse.emplace_back(objective(z), z);
  }
  std::stable_sort(coarse.begin(), coarse.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  res.value = std::numeric_limits<double>::infinity();
  const std::size_t starts = std::min<std::size_t>(3, coarse.size());
  for (std::size_t st = 0; st < starts; ++st) {
    Vec z = coarse[st].second;
    double best = coarse[st].first;
    double step = step0;
    while (step >= 1e-5 * a) {
      bool moved = false;
      for (int d = 0; d < n && !moved; ++d) {
        for (double sgn : {1.0, -1.0}) {
          Vec cand = z;
          cand[d] += sgn * step;
          const double v = objective(cand);
          if (v < best) {
            best = v;
            z = cand;
            moved = true;
            break;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    if (best < res.value) {
      res.value = best;
      res.translation = z;
    }
  }
  res.value = std::clamp(res.value, 0.0, 2.0);
  return res;
}

bool StabilityReport::all_pass() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return !c.applicable || c.pass; });
}

double a_star_constant(int n, double a, double r_star) {
  const double t = n * std::pow(2.0 * r_star, n - 1);
  return 1.0 / (unit_sphere_area(n) * 2.0 * t * t / (std::pow(a, n - 1) * n * n));
}

double r_a_constant(double slope, double a_star) {
  if (!(slope > 0)) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(slope * a_star);
}

StabilityReport stability_certificate(const ShapeSet& s, const SurfaceTension& f, const RadialPotential& g,
                                      const StabilityOptions& opt) {
  if (!f.is_isotropic()) throw Error("stability certificate requires isotropic surface tension");
  if (!g.radial()) throw Error("stability certificate requires radial potential");
  if (!g.nondecreasing()) throw Error("stability certificate requires nondecreasing potential");
  const int n = s.dimension();
  StabilityReport r;
  r.mass = mass(s);
  const Ball ball = Ball::with_mass(n, r.mass);
  const double a = ball.radius;
  r.radius = a;
  r.energy = free_energy(s, f, g);
  r.ball_energy = centered_ball_energy(n, r.mass, g);
  r.deficit = r.energy.total - r.ball_energy.total;
  r.potential_excess = r.energy.potential - r.ball_energy.potential;
  const double sym = symmetric_difference_mass(s, ball);
  r.distance_to_minimizer = sym / r.mass;
  const double ha = g.h(a);
  r.potential_gap = integrate_radial(s, [&](double t) { return g.h(t) - ha; }, a);
  r.slope = g.right_slope(a);
  if (g.convex()) r.first_moment_term = r.slope * integrate_radial(s, [&](double t) { return t - a; }, a);
  r.r_star = std::max(s.bounding_radius(), a);
  r.A_star = a_star_constant(n, a, r.r_star);
  r.r_a = r_a_constant(r.slope, r.A_star);
  if (opt.tolerance >= 0)
    r.tolerance = opt.tolerance;
  else if (s.grid())
    r.tolerance = 0.01 * r.ball_energy.total;
  else
    r.tolerance = 1e-7 * std::max(r.ball_energy.total, 1e-300);

  auto add = [&](std::string name, bool applicable, double lhs, double rhs, double tol) {
    Certificate c;
    c.name = std::move(name);
    c.applicable = applicable;
    if (applicable) {
      c.lhs = lhs;
      c.rhs = rhs;
      c.slack = lhs - rhs;
      c.pass = c.slack >= -tol;
    }
    r.certificates.push_back(c);
  };
  const double tol = r.tolerance;
  add("minimality", true, r.deficit, 0.0, tol);
  add("potential_gap", true, r.deficit, r.potential_gap, tol);
  add("first_moment", g.convex(), r.deficit, r.first_moment_term, tol);
  const bool bounded_case = g.convex() && r.slope > 0;
  add("bounded_potential", bounded_case, r.potential_excess, r.slope * r.A_star * 0.25 * sym * sym, tol);
  add("symmetric_difference", bounded_case, bounded_case ? r.r_a * std::sqrt(std::max(r.potential_excess, 0.0)) : 0.0,
      sym, bounded_case ? r.r_a * std::sqrt(tol) : 0.0);

  if (opt.compute_asymmetry) {
    const AsymmetryResult as = asymmetry(s, r.mass);
    r.asymmetry = as.value;
    r.asymmetry_translation = as.translation;
    if (r.asymmetry > 1e-9) r.constant_estimate = r.deficit / (r.mass * r.asymmetry * r.asymmetry);
  }
  return r;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // Shortest augmenting paths with row and column potentials (1-based arrays).
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw Error("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> out(n);
  for (int j = 1; j <= n; ++j) out[p[j] - 1] = j - 1;
  return out;
}

namespace {

// Lattice points (offset off the coordinate planes) inside `keep`, with the
// spacing shrunk until both regions hold at least k points.
void sample_regions(const ShapeSet& s, double a, double region_mass, int k, std::vector<Vec>& out_a,
                    std::vector<Vec>& out_b) {
  const int n = s.dimension();
  const double R = std::max(s.bounding_radius(), a);
  double h = std::pow(region_mass / k, 1.0 / n);
  for (int attempt = 0; attempt < 80; ++attempt) {
    out_a.clear();
    out_b.clear();
    const long per_axis = static_cast<long>(std::ceil(2.0 * R / h)) + 1;
    long total = 1;
    for (int d = 0; d < n; ++d) total *= per_axis;
    for (long idx = 0; idx < total; ++idx) {
      Vec x(n);
      long rem = idx;
      for (int d = 0; d < n; ++d) {
        x[d] = -R + (static_cast<double>(rem % per_axis) + 0.5 + 0.0137 * (d + 1)) * h;
        rem /= per_axis;
      }
      const double r = x.norm();
      const bool in_s = contains(s, x);
      if (in_s && r >= a) out_a.push_back(x);
      if (!in_s && r < a) out_b.push_back(x);
    }
    if (static_cast<int>(out_a.size()) >= k && static_cast<int>(out_b.size()) >= k) break;
    h *= 0.85;
  }
  if (static_cast<int>(out_a.size()) < k || static_cast<int>(out_b.size()) < k)
    throw Error("could not place transport samples");
  auto thin = [k](std::vector<Vec>& pts) {
    std::vector<Vec> kept;
    kept.reserve(k);
    const double stride = static_cast<double>(pts.size()) / k;
    for (int i = 0; i < k; ++i) kept.push_back(pts[static_cast<std::size_t>((i + 0.5) * stride)]);
    pts = std::move(kept);
  };
  thin(out_a);
  thin(out_b);
}

}  // namespace

TransportCertificate transport_bound(const ShapeSet& s, const RadialPotential& g, int samples) {
  if (samples < 10) throw Error("transport needs at least 10 samples");
  if (samples > 600) throw Error("exact assignment is limited to 600 samples");
  if (!g.radial()) throw Error("transport bound requires radial potential");
  const int n = s.dimension();
  const double m = mass(s);
  const Ball ball = Ball::with_mass(n, m);
  const double a = ball.radius;
  TransportCertificate c;
  c.region_mass = m - intersection_mass(s, ball);
  if (c.region_mass <= 1e-12 * m) {
    c.region_mass = 0.0;
    c.trivial = true;
    return c;
  }
  std::vector<Vec> src, dst;
  sample_regions(s, a, c.region_mass, samples, src, dst);
  std::vector<std::vector<double>> cost(samples, std::vector<double>(samples));
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) cost[i][j] = (src[i] - dst[j]).squaredNorm();
  const std::vector<int> match = solve_assignment(cost);

  const double ha = g.h(a);
  std::vector<double> moment(samples), gap(samples), bound(samples), sq(samples);
  for (int i = 0; i < samples; ++i) {
    const Vec& x = src[i];
    const Vec& y = dst[match[i]];
    c.pairs.push_back({x, y});
    c.max_target_radius = std::max(c.max_target_radius, y.norm());
    moment[i] = g.h(y.norm());
    gap[i] = g.h(x.norm()) - g.h(y.norm());
    bound[i] = g.h(x.norm()) - ha;
    sq[i] = cost[i][match[i]];
  }
  c.cost = pairwise_sum(sq) / samples;
  c.targets_inside = c.max_target_radius <= a * (1 + 1e-12);
  const double sampled_moment = pairwise_sum(moment) / samples;
  const double exact_moment =
      (centered_ball_energy(n, m, g).potential - integrate_radial(s, [&](double t) { return g.h(t); }, 0.0, a)) /
      c.region_mass;
  const double diff = std::abs(sampled_moment - exact_moment);
  c.pushforward_error = std::abs(exact_moment) > 0 ? diff / std::abs(exact_moment) : diff;
  c.sample_gap = c.region_mass * pairwise_sum(gap) / samples;
  c.sample_bound = c.region_mass * pairwise_sum(bound) / samples;
  c.bound_holds = c.sample_gap >= c.sample_bound - 1e-12 * (std::abs(c.sample_bound) + 1e-300);
  return c;
}

namespace {

std::vector<Vec> half_directions(int n, int count) {
  if (count < 1) throw Error("need at least one direction");
  std::vector<Vec> out;
  if (n == 1) {
    out.push_back(Vec::Ones(1));
  } else if (n == 2) {
    for (int j = 0; j < count; ++j) {
      const double th = kPi * j / count;
      Vec w(2);
      w << std::cos(th), std::sin(th);
      out.push_back(w);
    }
  } else {
    out = sphere_directions(3, count);
  }
  return out;
}

}  // namespace

TranslationBound translation_lower_bound(const ShapeSet& s, int directions, int steps) {
  if (steps < 2) throw Error("translation bound needs at least 2 steps");
  TranslationBound tb;
  tb.directions = half_directions(s.dimension(), directions);
  const double R = s.bounding_radius();
  const double t_max = 2.0 * R;
  const double h0 = s.grid() ? 2.0 * s.grid()->frame.cell : 1e-4 * R;
  auto delta = [&](const Vec& w, double y) { return symmetric_difference_mass(translate(s, y * w), s); };
  std::vector<std::vector<double>> phi(tb.directions.size());
  std::vector<double> ys(steps);
  for (int k = 0; k < steps; ++k) ys[k] = t_max * (k + 1) / steps;
  for (std::size_t i = 0; i < tb.directions.size(); ++i) {
    const Vec& w = tb.directions[i];
    const double r1 = delta(w, h0) / h0;
    const double r2 = delta(w, 2 * h0) / (2 * h0);
    tb.slopes.push_back(2 * r1 - r2);
    for (double y : ys) phi[i].push_back(delta(w, y));
  }
  const auto it = std::min_element(tb.slopes.begin(), tb.slopes.end());
  tb.rate = *it;
  tb.worst_direction = tb.directions[it - tb.slopes.begin()];
  tb.range = t_max;
  for (std::size_t i = 0; i < tb.directions.size(); ++i) {
    double range = t_max;
    for (int k = 0; k < steps; ++k) {
      if (phi[i][k] < (1 - 1e-3) * tb.rate * ys[k]) {
        range = k == 0 ? 0.0 : ys[k - 1];
        break;
      }
    }
    tb.range = std::min(tb.range, range);
  }
  return tb;
}

double boundary_flux(const ShapeSet& s, const Vec& w, double t) {
  const PolygonLoops* p = s.polygon();
  if (!p || p->loops.size() != 1) throw Error("boundary flux needs a single polygon loop");
  const auto& loop = p->loops.front();
  const std::size_t n = loop.size();
  const Vec2 ww(w[0], w[1]);
  std::vector<Vec2> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = loop[(i + 1) % n] - loop[i];
    normals[i] = Vec2(e.y(), -e.x()).normalized();
  }
  std::vector<double> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const double proj = normals[i].dot(ww);
    if (proj == 0.0) continue;
    const Vec2 a = loop[i] - t * ww;
    const Vec2 d = loop[(i + 1) % n] - loop[i];
    // Cyrus-Beck clipping of a + u d, u in [0, 1], against the closed convex polygon.
    double lo = 0.0, hi = 1.0;
    for (std::size_t j = 0; j < n && lo <= hi; ++j) {
      const double num = (a - loop[j]).dot(normals[j]);
      const double den = d.dot(normals[j]);
      const double scale = 1e-14 * (std::abs(num) + d.norm() + 1.0);
      if (std::abs(den) <= 1e-15 * d.norm()) {
        if (num > scale) hi = -1.0;
      } else if (den > 0) {
        hi = std::min(hi, -num / den);
      } else {
        lo = std::max(lo, -num / den);
      }
    }
    if (hi > lo) terms.push_back(proj * (hi - lo) * d.norm());
  }
  return pairwise_sum(terms);
}

DerivativeIdentity derivative_identity_check(const ShapeSet& s, const Vec& w, double t_max, int steps) {
  if (!s.polygon() || !is_convex_polygon(s)) throw Error("derivative identity needs a convex polygon");
  if (std::abs(w.norm() - 1.0) > 1e-12) throw Error("direction must be a unit vector");
  if (!(t_max > 0) || steps < 1) throw Error("derivative identity needs t_max > 0 and steps >= 1");
  std::vector<double> f(steps + 1);
  const double dt = t_max / steps;
  for (int k = 0; k <= steps; ++k)
    f[k] = k == 0 ? 0.0 : symmetric_difference_mass(translate(s, (k * dt) * w), s);
  DerivativeIdentity out;
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * dt;
    const double fp = (f[k + 1] - f[k]) / dt;
    const double gw = boundary_flux(s, w, tm);
    out.t.push_back(tm);
    out.fprime.push_back(fp);
    out.g.push_back(gw);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(fp - 2 * gw) / (std::abs(2 * gw) + 1e-12));
  }
  return out;
}

}  // namespace almlab
