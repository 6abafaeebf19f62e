#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "almlab/builders.hpp"
#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/parallel.hpp"
#include "almlab/stability.hpp"

namespace almlab {

std::string to_string(Family f) {
  switch (f) {
    case Family::translated_ball:
      return "translated_ball";
    case Family::dilated_ellipse:
      return "dilated_ellipse";
    case Family::perturbed_disk:
      return "perturbed_disk";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "translated_ball") return Family::translated_ball;
  if (name == "dilated_ellipse") return Family::dilated_ellipse;
  if (name == "perturbed_disk") return Family::perturbed_disk;
  throw Error("unknown perturbation family '" + name + "'");
}

namespace {

// |B_a Δ (B_a + d e)| for |d| < 2a.
double translated_ball_distance(int n, double a, double d) {
  if (n == 1) return 2.0 * d;
  if (n == 2) {
    const double lens = 2 * a * a * std::acos(d / (2 * a)) - 0.5 * d * std::sqrt(4 * a * a - d * d);
    return 2.0 * (kPi * a * a - lens);
  }
  const double lens = kPi * (4 * a + d) * (2 * a - d) * (2 * a - d) / 12.0;
  return 2.0 * (4.0 * kPi * a * a * a / 3.0 - lens);
}

// |E Δ B_a| for the ellipse with semi-axes (a s, a / s), s >= 1.
double ellipse_distance(double a, double s) {
  if (s <= 1.0) return 0.0;
  const double A = a * s, B = a / s;
  const double th = std::asin(std::sqrt((a * a - B * B) / (A * A - B * B)));
  const double inter = 2 * a * a * (th + 0.5 * kPi - std::atan(s * s * std::tan(th)));
  return 2.0 * (kPi * a * a - inter);
}

ShapeSet perturbed(double m, double eta) {
  const double base = std::sqrt(m / (kPi * (1 + 0.5 * eta * eta)));
  return perturbed_disk(base, {0.0, 0.0, eta}, {0.0, 0.0, 0.0});
}

}  // namespace

ShapeSet family_member(Family family, int n, double m, double eps) {
  if (!(m > 0)) throw Error("family mass must be positive");
  if (eps < 0) throw Error("family eps must be nonnegative");
  if (n < 1 || n > 3) throw Error("families are available in dimensions 1 to 3");
  const double a = Ball::with_mass(n, m).radius;
  const double target = eps * m;
  switch (family) {
    case Family::translated_ball: {
      // The profile encodings need the origin inside, so |d| < a.
      const double dmax = (n == 1 ? 2.0 : 0.999) * a;
      if (target > translated_ball_distance(n, a, dmax)) throw Error("eps too large for the family");
      const double d =
          eps == 0 ? 0.0 : bisect([&](double x) { return translated_ball_distance(n, a, x) - target; }, 0.0, dmax);
      if (n == 1) return interval(-a + d, a + d);
      if (n == 2) return offset_disk(a, Vec2(d, 0.0));
      return offset_ball3(a, Vec3(d, 0.0, 0.0));
    }
    case Family::dilated_ellipse: {
      if (n != 2) throw Error("family available in the plane only");
      if (eps == 0) return ellipse(a, a, 1024);
      if (target >= ellipse_distance(a, 20.0)) throw Error("eps too large for the family");
      const double s = bisect([&](double x) { return ellipse_distance(a, x) - target; }, 1.0, 20.0);
      return ellipse(a * s, a / s, 1024);
    }
    case Family::perturbed_disk: {
      if (n != 2) throw Error("family available in the plane only");
      if (eps == 0) return perturbed(m, 0.0);
      const Ball ball = Ball::with_mass(2, m);
      auto dist = [&](double eta) { return symmetric_difference_mass(perturbed(m, eta), ball) / m - eps; };
      if (dist(0.9) < 0) throw Error("eps too large for the family");
      return perturbed(m, bisect(dist, 0.0, 0.9, 1e-13));
    }
  }
  throw Error("unknown perturbation family");
}

ModulusFit fit_modulus(std::vector<SweepPoint> points) {
  std::set<double> eps_values, mass_values;
  for (const auto& p : points) {
    eps_values.insert(p.measured_eps);
    mass_values.insert(p.mass);
  }
  if (eps_values.size() < 2) throw Error("degenerate sweep grid: need at least two distinct eps values");
  const bool with_mass = mass_values.size() >= 2;
  const int cols = with_mass ? 3 : 2;
  const int rows = static_cast<int>(points.size());
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    const auto& p = points[i];
    if (!(p.deficit > 0))
      throw Error("nonpositive deficit at m=" + std::to_string(p.mass) + ", eps=" + std::to_string(p.eps));
    X(i, 0) = std::log(p.measured_eps);
    if (with_mass) X(i, 1) = std::log(p.mass);
    X(i, cols - 1) = 1.0;
    y[i] = std::log(p.deficit);
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  ModulusFit fit;
  fit.p_eps = beta[0];
  if (with_mass) fit.p_m = beta[1];
  fit.prefactor = std::exp(beta[cols - 1]);
  const Eigen::VectorXd res = y - X * beta;
  fit.residuals.assign(res.data(), res.data() + rows);
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  fit.r_squared = ss_tot > 0 ? 1.0 - res.squaredNorm() / ss_tot : 1.0;
  fit.points = std::move(points);
  return fit;
}

ModulusFit modulus_sweep(const SurfaceTension& f, const RadialPotential& g, int n, const std::vector<double>& masses,
                         const std::vector<double>& eps_grid, Family family, const SweepOptions& opt) {
  if (masses.empty() || eps_grid.empty()) throw Error("degenerate sweep grid: empty mass or eps list");
  for (double m : masses)
    if (!(m > 0)) throw Error("sweep masses must be positive");
  for (double e : eps_grid)
    if (!(e > 0)) throw Error("sweep eps values must be positive");
  if (std::set<double>(eps_grid.begin(), eps_grid.end()).size() < 2)
    throw Error("degenerate sweep grid: need at least two distinct eps values");

  // Reference energies use the family's own encoding of the ball so that
  // discretization bias cancels in the deficit.
  std::vector<double> reference(masses.size());
  parallel_for(masses.size(), opt.threads, [&](std::size_t i) {
    reference[i] = free_energy(family_member(family, n, masses[i], 0.0), f, g).total;
  });
  const std::size_t ne = eps_grid.size();
  std::vector<SweepPoint> points(masses.size() * ne);
  parallel_for(points.size(), opt.threads, [&](std::size_t idx) {
    const std::size_t mi = idx / ne, ei = idx % ne;
    SweepPoint p;
    p.mass = masses[mi];
    p.eps = eps_grid[ei];
    const ShapeSet e = family_member(family, n, p.mass, p.eps);
    p.measured_eps = symmetric_difference_mass(e, Ball::with_mass(n, p.mass)) / p.mass;
    p.deficit = free_energy(e, f, g).total - reference[mi];
    if (opt.compute_asymmetry) p.asymmetry = asymmetry(e, mass(e)).value;
    points[idx] = p;
  });
  return fit_modulus(std::move(points));
}

}  // namespace almlab
