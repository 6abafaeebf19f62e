#include "almlab/energy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

namespace almlab {

namespace {

Eigen::MatrixXd isotropic_hessian(const Vec& x) {
  const double r = x.norm();
  const int n = static_cast<int>(x.size());
  return (Eigen::MatrixXd::Identity(n, n) - x * x.transpose() / (r * r)) / r;
}

// Orthonormal basis of the plane orthogonal to v (columns).
Eigen::MatrixXd tangent_basis(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd m(n, 1);
  m.col(0) = v.normalized();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

}  // namespace

std::vector<Vec> sphere_directions(int dim, int count) {
  std::vector<Vec> out;
  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Vec v(1);
      v << s;
      out.push_back(v);
    }
    return out;
  }
  if (count < 1) throw Error("direction count must be positive");
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * kPi * k / count;
      Vec v(2);
      v << std::cos(th), std::sin(th);
      out.push_back(v);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec v(3);
      v << r * std::cos(golden * k), r * std::sin(golden * k), z;
      out.push_back(v);
    }
    return out;
  }
  throw Error("directions are available in dimensions 1 to 3");
}

SurfaceTension SurfaceTension::isotropic() {
  return SurfaceTension("isotropic", {}, [](const Vec& x) { return x.norm(); }, isotropic_hessian, true);
}

SurfaceTension SurfaceTension::p_norm(double p) {
  if (!(p >= 1.0)) throw Error("p-norm surface tension needs p >= 1");
  if (std::isinf(p))
    return SurfaceTension("p-norm", {p}, [](const Vec& x) { return x.cwiseAbs().maxCoeff(); }, {}, false);
  Eval eval = [p](const Vec& x) {
    double s = 0.0;
    for (double c : x) s += std::pow(std::abs(c), p);
    return std::pow(s, 1.0 / p);
  };
  Hess hess;
  if (p >= 2.0) {
    hess = [p, eval](const Vec& x) {
      const int n = static_cast<int>(x.size());
      const double f = eval(x);
      Vec g(n);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const double a = std::abs(x[i]);
        g[i] = std::pow(a, p - 1) * (x[i] < 0 ? -1.0 : 1.0);
        h(i, i) = (p - 1) * std::pow(f, 1 - p) * std::pow(a, p - 2);
      }
      h += (1 - p) * std::pow(f, 1 - 2 * p) * g * g.transpose();
      return h;
    };
  }
  return SurfaceTension("p-norm", {p}, std::move(eval), std::move(hess), p == 2.0);
}

SurfaceTension SurfaceTension::crystalline(std::vector<Vec> normals, std::vector<double> values) {
  if (normals.empty() || normals.size() != values.size())
    throw Error("crystalline tension needs matching facet normals and values");
  const int n = static_cast<int>(normals.front().size());
  if (n < 2 || n > 3) throw Error("crystalline tension supports dimensions 2 and 3");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != n) throw Error("facet normals must share one dimension");
    if (!(normals[i].norm() > 0)) throw Error("facet normals must be nonzero");
    if (!(values[i] > 0)) throw Error("surface tension not positive");
  }
  // Every direction must meet some facet normal at an acute angle, otherwise
  // the facet polytope is unbounded and f vanishes on a cap.
  for (const Vec& u : sphere_directions(n, n == 2 ? 4096 : 8192)) {
    double best = -1.0;
    for (const Vec& v : normals) best = std::max(best, u.dot(v) / v.norm());
    if (!(best > 1e-9)) throw Error("surface tension not positive");
  }
  // Vertex enumeration: intersect every n-subset of facets and keep feasible points.
  std::vector<Vec> vertices;
  const int k = static_cast<int>(normals.size());
  auto feasible = [&](const Vec& x) {
    for (int i = 0; i < k; ++i)
      if (x.dot(normals[i]) > values[i] * (1 + 1e-10) + 1e-12) return false;
    return true;
  };
  auto solve = [&](std::initializer_list<int> idx) {
    Eigen::MatrixXd a(n, n);
    Vec b(n);
    int row = 0;
    for (int i : idx) {
      a.row(row) = normals[i].transpose();
      b[row++] = values[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < n) return;
    Vec x = lu.solve(b);
    if (feasible(x)) vertices.push_back(x);
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (n == 2) {
        solve({i, j});
      } else {
        for (int l = j + 1; l < k; ++l) solve({i, j, l});
      }
    }
  if (vertices.empty()) throw Error("surface tension not positive");
  std::vector<double> params;
  for (int i = 0; i < k; ++i) {
    for (double c : normals[i]) params.push_back(c);
    params.push_back(values[i]);
  }
  Eval eval = [vertices](const Vec& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : vertices) best = std::max(best, v.dot(x));
    return best;
  };
  return SurfaceTension("crystalline", std::move(params), std::move(eval), {}, false);
}

SurfaceTension SurfaceTension::axial(double c) {
  Eval eval = [c](const Vec& x) {
    const double r = x.norm();
    const double xn = x[x.size() - 1];
    return r + c * xn * xn / r;
  };
  Hess hess = [c](const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double r = x.norm();
    const double xn = x[n - 1];
    Vec e = Vec::Zero(n);
    e[n - 1] = 1.0;
    Eigen::MatrixXd h = isotropic_hessian(x);
    // D^2 (x_n^2 / r)
    Eigen::MatrixXd g = 2.0 * e * e.transpose() / r;
    g -= 2.0 * xn * (e * x.transpose() + x * e.transpose()) / std::pow(r, 3);
    g -= xn * xn * (Eigen::MatrixXd::Identity(n, n) / std::pow(r, 3) - 3.0 * x * x.transpose() / std::pow(r, 5));
    return Eigen::MatrixXd(h + c * g);
  };
  return SurfaceTension("axial", {c}, std::move(eval), std::move(hess), c == 0.0);
}

double SurfaceTension::operator()(const Vec& v) const { return eval_(v); }

Eigen::MatrixXd SurfaceTension::hessian(const Vec& v) const {
  if (!hessian_) throw Error("surface tension '" + name_ + "' has no second derivative");
  return hessian_(v);
}

double SurfaceTension::ellipticity(int dim, int samples) const {
  if (!hessian_ || dim < 2) return 0.0;
  double lambda = std::numeric_limits<double>::infinity();
  for (const Vec& v : sphere_directions(dim, samples)) {
    const Eigen::MatrixXd t = tangent_basis(v);
    const Eigen::MatrixXd m = t.transpose() * hessian_(v) * t;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    lambda = std::min(lambda, es.eigenvalues().minCoeff());
  }
  return std::max(lambda, 0.0);
}

void SurfaceTension::check_positive(int dim, int samples) const {
  for (const Vec& v : sphere_directions(dim, samples))
    if (!(eval_(v) > 0)) throw Error("surface tension not positive");
}

void SurfaceTension::check_convex(int dim, int samples, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto unit = [&] {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return Vec(v.normalized());
  };
  for (int s = 0; s < samples; ++s) {
    const Vec a = unit(), b = unit();
    const Vec mid = a + b;
    if (mid.norm() < 1e-9) continue;
    const double lhs = eval_(Vec(mid.normalized())) * mid.norm();
    const double rhs = eval_(a) + eval_(b);
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) throw Error("surface tension is not convex");
  }
}

RadialPotential RadialPotential::power(double alpha, double coeff) {
  if (!(alpha > 0)) throw Error("power potential needs alpha > 0");
  if (!(coeff >= 0)) throw Error("potential coefficient must be nonnegative");
  RadialPotential g;
  g.name_ = alpha == 1.0 ? "linear" : (alpha == 2.0 ? "quadratic" : "power");
  g.params_ = {alpha, coeff};
  g.h_ = [alpha, coeff](double t) { return coeff * std::pow(t, alpha); };
  g.slope_ = [alpha, coeff](double a) {
    if (a == 0.0) return alpha == 1.0 ? coeff : (alpha > 1.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return coeff * alpha * std::pow(a, alpha - 1.0);
  };
  g.convex_ = alpha >= 1.0 || coeff == 0.0;
  g.differentiable_ = alpha >= 1.0;
  g.zero_ = coeff == 0.0;
  g.degree_ = alpha;
  return g;
}

RadialPotential RadialPotential::zero() {
  RadialPotential g;
  g.name_ = "zero";
  g.h_ = [](double) { return 0.0; };
  g.slope_ = [](double) { return 0.0; };
  g.zero_ = true;
  return g;
}

RadialPotential RadialPotential::table(std::vector<double> t, std::vector<double> h) {
  if (t.size() < 2 || t.size() != h.size()) throw Error("potential table needs at least two (t, h) pairs");
  if (t.front() != 0.0 || h.front() != 0.0) throw Error("potential table must start at (0, 0)");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error("potential table abscissae must increase");
    if (!(h[i] >= 0) || !std::isfinite(h[i])) throw Error("potential values must be finite and nonnegative");
  }
  RadialPotential g;
  g.name_ = "table";
  for (std::size_t i = 0; i < t.size(); ++i) {
    g.params_.push_back(t[i]);
    g.params_.push_back(h[i]);
  }
  std::vector<double> slopes(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) slopes[i] = (h[i + 1] - h[i]) / (t[i + 1] - t[i]);
  g.nondecreasing_ = std::all_of(slopes.begin(), slopes.end(), [](double s) { return s >= 0; });
  g.convex_ = std::is_sorted(slopes.begin(), slopes.end());
  g.differentiable_ = std::adjacent_find(slopes.begin(), slopes.end(), std::not_equal_to<>()) == slopes.end();
  // Beyond the last node the table extends linearly with its last slope.
  auto segment = [t](double x) {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  };
  g.h_ = [t, h, slopes, segment](double x) {
    const std::size_t i = segment(x);
    return h[i] + slopes[i] * (x - t[i]);
  };
  g.slope_ = [slopes, segment](double a) { return slopes[segment(a)]; };
  return g;
}

RadialPotential RadialPotential::custom(std::string name, std::function<double(double)> h, bool nondecreasing,
                                        bool convex, std::optional<double> degree) {
  RadialPotential g;
  g.name_ = std::move(name);
  g.h_ = std::move(h);
  g.nondecreasing_ = nondecreasing;
  g.convex_ = convex;
  g.differentiable_ = false;
  g.degree_ = degree;
  return g;
}

double RadialPotential::operator()(const Vec& x) const {
  if (radial()) return h_(x.norm());
  return h_((x - center_).norm());
}

double RadialPotential::right_slope(double a) const {
  if (slope_) return slope_(a);
  const double step = 1e-6 * std::max(a, 1e-300);
  return (h_(a + step) - h_(a)) / step;
}

RadialPotential RadialPotential::scaled(double c) const {
  if (!(c >= 0)) throw Error("potential scale must be nonnegative");
  RadialPotential g = *this;
  auto h = h_;
  g.h_ = [h, c](double t) { return c * h(t); };
  if (slope_) {
    auto s = slope_;
    g.slope_ = [s, c](double a) { return c * s(a); };
  }
  if (!g.params_.empty() && (name_ == "power" || name_ == "linear" || name_ == "quadratic")) g.params_[1] *= c;
  if (c == 0.0) g.zero_ = true;
  return g;
}

RadialPotential RadialPotential::centered_at(Vec x0) const {
  RadialPotential g = *this;
  g.center_ = std::move(x0);
  return g;
}

void RadialPotential::check(double t_max, int samples) const {
  if (h_(0.0) != 0.0) throw Error("potential must vanish at 0");
  double prev = 0.0, prev_slope = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= samples; ++i) {
    const double t = t_max * i / samples;
    const double v = h_(t);
    if (!(v >= 0) || !std::isfinite(v)) throw Error("potential must be finite and nonnegative");
    if (nondecreasing_ && v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
      throw Error("potential flagged nondecreasing decreases");
    if (convex_ && i >= 2) {
      const double t0 = t_max * (i - 2) / samples;
      const double mid = h_(0.5 * (t0 + t));
      if (mid > 0.5 * (h_(t0) + v) + 1e-12 * std::max(1.0, v)) throw Error("potential flagged convex fails midpoint convexity");
      const double s = right_slope(t0);
      if (s < prev_slope - 1e-9 * std::max(1.0, std::abs(s))) throw Error("right slope of a convex potential decreases");
      prev_slope = s;
    }
    prev = v;
  }
}

double surface_energy(const ShapeSet& s, const SurfaceTension& f) {
  const auto samples = boundary_samples(s);
  std::vector<double> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) terms[i] = f(samples[i].normal) * samples[i].weight;
  return pairwise_sum(terms);
}

double potential_energy(const ShapeSet& s, const RadialPotential& g) {
  if (g.is_zero()) return 0.0;
  auto h = [&g](double t) { return g.h(t); };
  if (g.radial()) return integrate_radial(s, h);
  if (g.center().size() != s.dimension()) throw Error("potential center dimension mismatch");
  return integrate_radial(translate(s, -g.center()), h);
}

EnergyBreakdown free_energy(const ShapeSet& s, const SurfaceTension& f, const RadialPotential& g) {
  EnergyBreakdown e;
  e.surface = surface_energy(s, f);
  e.potential = potential_energy(s, g);
  e.total = e.surface + e.potential;
  return e;
}

EnergyBreakdown centered_ball_energy(int n, double m, const RadialPotential& g) {
  if (!g.radial()) throw Error("ball energy needs a radial potential");
  const double a = Ball::with_mass(n, m).radius;
  const double area = unit_sphere_area(n);
  EnergyBreakdown e;
  e.surface = area * std::pow(a, n - 1);
  if (!g.is_zero())
    e.potential = area * integrate([&](double t) { return g.h(t) * std::pow(t, n - 1); }, 0.0, a, 1e-13);
  e.total = e.surface + e.potential;
  return e;
}

namespace {

// Sutherland-Hodgman step: keep the part of `poly` with <x, v> <= c.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec2& v, double c) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double dp = p.dot(v) - c, dq = q.dot(v) - c;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) out.push_back(p + (dp / (dp - dq)) * (q - p));
  }
  return out;
}

}  // namespace

ShapeSet wulff_shape(const SurfaceTension& f, int dim, int directions, double cell) {
  if (directions < 2 * dim + 2) throw Error("Wulff construction needs at least 2n+2 directions");
  const std::vector<Vec> dirs = sphere_directions(dim, directions);
  std::vector<double> values(dirs.size());
  double fmax = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    values[k] = f(dirs[k]);
    if (!(values[k] > 0) || !std::isfinite(values[k])) throw Error("surface tension not positive");
    fmax = std::max(fmax, values[k]);
  }
  if (dim == 1) return ShapeSet(IntervalSet{{{-values[1], values[0]}}});
  if (dim == 2) {
    // Every point farther than fmax / cos(pi / N) violates a nearby halfplane.
    const double box = 2.0 * fmax / std::cos(kPi / directions);
    std::vector<Vec2> poly{Vec2(-box, -box), Vec2(box, -box), Vec2(box, box), Vec2(-box, box)};
    for (std::size_t k = 0; k < dirs.size(); ++k) poly = clip(poly, Vec2(dirs[k][0], dirs[k][1]), values[k]);
    std::vector<Vec2> clean;
    for (const Vec2& p : poly)
      if (clean.empty() || (p - clean.back()).norm() > 1e-13 * fmax) clean.push_back(p);
    while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-13 * fmax) clean.pop_back();
    if (clean.size() < 3) throw Error("surface tension not positive");
    return ShapeSet(PolygonLoops{{std::move(clean)}});
  }
  if (dim != 3) throw Error("Wulff shapes are available in dimensions 1 to 3");
  // Circumradius estimate from dense rays, then rasterise the halfspace test.
  double radius = 0.0;
  for (const Vec& u : sphere_directions(3, 20000)) {
    double hit = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double c = u.dot(dirs[k]);
      if (c > 1e-12) hit = std::min(hit, values[k] / c);
    }
    if (!std::isfinite(hit)) throw Error("surface tension not positive");
    radius = std::max(radius, hit);
  }
  const GridFrame frame = GridFrame::centered(3, cell, 1.05 * radius + 2.0 * cell);
  Grid g{frame, std::vector<std::uint8_t>(frame.cell_count(), 0)};
  for (std::size_t idx = 0; idx < g.cells.size(); ++idx) {
    const Vec x = frame.center(idx);
    if (x.norm() > 1.05 * radius) continue;
    bool inside = true;
    for (std::size_t k = 0; k < dirs.size() && inside; ++k) inside = x.dot(dirs[k]) <= values[k];
    g.cells[idx] = inside ? 1 : 0;
  }
  return ShapeSet(std::move(g));
}

}  // namespace almlab
