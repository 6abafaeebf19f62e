// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "almlab/builders.hpp"
#include "almlab/curvature.hpp"
#include "almlab/energy.hpp"
#include "almlab/error.hpp"
#include "almlab/mass.hpp"
#include "almlab/numeric.hpp"
#include "almlab/stability.hpp"
#include "almlab/symmetrize.hpp"

using namespace almlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Vec v2(double x, double y) { return Vec2(x, y); }

// 1. Translated unit interval with h = t^2: deficit = x^2.
Outcome one_dimensional_sharpness() {
  const auto f = SurfaceTension::isotropic();
  const auto g = RadialPotential::quadratic();
  const double base = free_energy(interval(-0.5, 0.5), f, g).total;
  double worst = 0.0;
  for (double x : {0.05, 0.1, 0.2}) {
    const double deficit = free_energy(interval(-0.5 + x, 0.5 + x), f, g).total - base;
    worst = std::max(worst, std::abs(deficit - x * x));
  }
  return {worst <= 1e-9, fmt("max |deficit - x^2| = %.3g", worst)};
}

// 2. Sharp eps exponent over translated discs.
Outcome sharp_exponent() {
  SweepOptions opt;
  opt.compute_asymmetry = true;
  const auto fit = modulus_sweep(SurfaceTension::isotropic(), RadialPotential::quadratic(), 2, log_grid(0.5, 5.0, 8),
                                 log_grid(0.01, 0.2, 8), Family::translated_ball, opt);
  const bool ok = fit.p_eps >= 1.95 && fit.p_eps <= 2.05 && fit.r_squared > 0.999;
  return {ok, fmt("p_eps = %.5f, R^2 = %.7f, p_m = %.5f (reported)", fit.p_eps, fit.r_squared, fit.p_m.value_or(NAN))};
}

struct Instance {
  std::string family;
  double mass;
  ShapeSet shape;
  RadialPotential g;
};

// 200 seeded instances: translated balls (n = 1, 2, 3), ellipses and
// perturbed discs, with h = t or t^2.
std::vector<Instance> generated_instances() {
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> mass_d(0.5, 3.0), eps_d(0.01, 0.3);
  std::vector<Instance> out;
  const Family fams[] = {Family::translated_ball, Family::dilated_ellipse, Family::perturbed_disk};
  for (int i = 0; i < 200; ++i) {
    const Family fam = fams[i % 3];
    const int n = fam == Family::translated_ball ? 1 + (i / 3) % 3 : 2;
    const double m = mass_d(rng), eps = eps_d(rng);
    const auto g = (i / 2) % 2 ? RadialPotential::quadratic() : RadialPotential::linear();
    out.push_back({to_string(fam) + "/n" + std::to_string(n), m, family_member(fam, n, m, eps), g});
  }
  return out;
}

// 3. Potential-gap and first-moment certificates.
Outcome stability_certificates(const std::vector<Instance>& sets) {
  StabilityOptions opt;
  opt.compute_asymmetry = false;
  double worst = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (const auto& inst : sets) {
    const auto r = stability_certificate(inst.shape, SurfaceTension::isotropic(), inst.g, opt);
    for (const auto& c : r.certificates) {
      if (c.name != "potential_gap" && c.name != "first_moment") continue;
      if (!c.applicable) {
        ++failures;
        continue;
      }
      worst = std::min(worst, c.slack / inst.mass);
      if (c.slack < -1e-6 * inst.mass) ++failures;
    }
  }
  return {failures == 0, fmt("%zu sets, min slack/m = %.3g, violations = %d", sets.size(), worst, failures)};
}

// 4. Transport pushforward identity and target radius bound.
Outcome transport_certificates(const std::vector<Instance>& sets) {
  const double delta = 1.0 / 256;
  int failures = 0, checked = 0;
  double worst_ratio = 0.0, worst_excess = -1.0;
  for (const auto& inst : sets) {
    const auto c = transport_bound(inst.shape, inst.g, 300);
    if (c.trivial) continue;
    ++checked;
    const double k = static_cast<double>(c.pairs.size());
    const double a = Ball::with_mass(inst.shape.dimension(), inst.mass).radius;
    worst_ratio = std::max(worst_ratio, c.pushforward_error / (3 / std::sqrt(k)));
    worst_excess = std::max(worst_excess, c.max_target_radius - a);
    if (c.pushforward_error > 3 / std::sqrt(k) || c.max_target_radius > a + 2 * delta) ++failures;
  }
  return {failures == 0 && checked > 0,
          fmt("%d instances, max error/(3/sqrt k) = %.3f, max(|T x| - a) = %.3g, violations = %d", checked, worst_ratio,
              worst_excess, failures)};
}

// 5. Critical mass against the crossover and the direct substitution.
Outcome critical_masses() {
  double worst = 0.0;
  for (auto [n, alpha] : {std::pair{2, 1.0}, {2, 2.0}, {3, 1.0}, {3, 2.0}}) {
    const auto g = RadialPotential::power(alpha);
    const double m = critical_mass(n, g);
    const auto curve = energy_curve(n, g, log_grid(m / 30, m * 30, 161));
    const auto split = regime_split(curve);
    worst = std::max(worst, std::abs(*split.crossover / m - 1));
  }
  // n = 2, h = t^2: int_{B1} t^2 = pi / 2 and H^1(S^1) = 2 pi, so
  // m = pi [2 pi / (2 * 4 * pi / 2)]^{2/3} = pi (1/2)^{2/3}.
  const double direct = kPi * std::pow(0.5, 2.0 / 3.0);
  const double closed = critical_mass(2, RadialPotential::quadratic());
  const double gap = std::abs(closed / direct - 1);
  return {worst <= 1e-3 && gap <= 1e-6, fmt("max crossover gap = %.3g, |m_2 / (pi 2^(-2/3)) - 1| = %.3g", worst, gap)};
}

// 6. Symmetrization descent from a 1 x 4 rectangle.
Outcome symmetrization_monotonicity() {
  const ShapeSet s = grid_of(rectangle(1.0, 4.0), 1.0 / 256, 0.1);
  const auto rec = symmetrization_descent(s, SymmetrizationPlan::standard(2, 200, 0.02), SurfaceTension::isotropic(),
                                          RadialPotential::quadratic());
  bool mass_exact = true, f_ok = true, g_ok = true;
  double worst_f = -1.0, worst_g = -1.0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    mass_exact = mass_exact && rec[i].mass == rec[0].mass;
    const double df = rec[i].energy.surface / rec[i - 1].energy.surface - 1;
    const double dg = rec[i].energy.potential / rec[i - 1].energy.potential - 1;
    worst_f = std::max(worst_f, df);
    worst_g = std::max(worst_g, dg);
    f_ok = f_ok && df <= 0.01;
    g_ok = g_ok && dg <= 1e-3;
  }
  const double final_asym = rec.back().asymmetry;
  return {mass_exact && f_ok && g_ok && final_asym < 0.02,
          fmt("%d steps, mass exact = %s, max rel dF = %.3g, max rel dG = %.3g, final asymmetry = %.4f",
              rec.back().iteration, mass_exact ? "yes" : "no", worst_f, worst_g, final_asym)};
}

// 7. f'_w(t) = 2 g_w(t).
Outcome derivative_identity() {
  double square = 0.0, gon = 0.0;
  for (const Vec& w : {v2(1, 0), v2(0, 1), v2(0.6, 0.8), Vec(v2(1, 1).normalized())})
    square = std::max(square, derivative_identity_check(unit_square(), w, 0.4, 200).max_relative_error);
  const ShapeSet p = regular_polygon(256, 1.0);
  for (const Vec& w : {v2(1, 0), v2(0.6, 0.8), Vec(v2(std::cos(0.3), std::sin(0.3)))})
    gon = std::max(gon, derivative_identity_check(p, w, 0.4, 400).max_relative_error);
  return {square <= 1e-6 && gon <= 1e-3, fmt("square max rel = %.3g, 256-gon max rel = %.3g", square, gon)};
}

// 8. Curvature benchmarks.
Outcome curvature_benchmarks() {
  const auto s = curvature_fields(icosphere(2.0, 4));
  double worst = 0.0;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    worst = std::max(worst, std::abs(s.H[i] / 1.0 - 1));
    worst = std::max(worst, std::abs(s.A2[i] / 0.5 - 1));
    worst = std::max(worst, std::abs(s.K[i] / 0.25 - 1));
  }
  const double gb_sphere = std::abs(total_gauss_curvature(s) / (4 * kPi) - 1);
  const auto t = curvature_fields(torus_mesh(2.0, 0.5, 96, 32));
  // chi = 0 on the torus, so the residual is scaled by 2 pi.
  const double gb_torus = std::abs(total_gauss_curvature(t)) / (2 * kPi);
  const double q = q_coefficient(0.1, -1.0);
  const double q_err = std::abs(q - 0.01 / 2.2);
  const bool rounds = std::abs(q - 0.0045455) < 5e-8;
  const bool ok = worst <= 0.01 && gb_sphere <= 1e-6 && gb_torus <= 1e-6 && q_err <= 1e-12 && rounds;
  return {ok, fmt("max field rel err = %.3g, Gauss-Bonnet sphere %.2g torus %.2g, q(0.1,-1) = %.10f", worst, gb_sphere,
                  gb_torus, q)};
}

// 9. Randomized property suite.
Outcome property_suite() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0, checks = 0;
  auto random_polygon = [&]() {
    const int sides = 3 + static_cast<int>(u(rng) * 9);
    const Vec2 c(u(rng) - 0.5, u(rng) - 0.5);
    const double r = 0.3 + u(rng);
    switch (static_cast<int>(u(rng) * 3)) {
      case 0: return regular_polygon(sides, r, c);
      case 1: return rectangle(0.3 + u(rng), 0.3 + u(rng), c);
      default: return translate(l_shape(), c);
    }
  };
  // Symmetric-difference metric: triangle inequality.
  for (int i = 0; i < 60; ++i) {
    const auto a = random_polygon(), b = random_polygon(), c = random_polygon();
    const double ab = symmetric_difference_mass(a, b), bc = symmetric_difference_mass(b, c),
                 ac = symmetric_difference_mass(a, c);
    ++checks;
    if (ac > ab + bc + 1e-9) ++failures;
  }
  // Wulff weak optimality: F(K) <= F(S) at equal mass.
  for (int i = 0; i < 12; ++i) {
    SurfaceTension f = SurfaceTension::isotropic();
    if (i % 3 == 0) f = SurfaceTension::p_norm(1.0 + 4 * u(rng));
    if (i % 3 == 1) f = SurfaceTension::axial(0.8 * u(rng));
    if (i % 3 == 2) {
      std::vector<Vec> normals;
      std::vector<double> values;
      const int k = 3 + static_cast<int>(u(rng) * 5);
      for (int j = 0; j < k; ++j) {
        const double th = 2 * kPi * (j + 0.3 * u(rng)) / k;
        normals.push_back(v2(std::cos(th), std::sin(th)));
        values.push_back(0.5 + u(rng));
      }
      f = SurfaceTension::crystalline(normals, values);
    }
    const ShapeSet k = wulff_shape(f, 2, 720);
    const double mk = mass(k), fk = surface_energy(k, f);
    for (int j = 0; j < 5; ++j) {
      ShapeSet s = j == 0 ? disk(1.0, 1024) : random_polygon();
      s = scale(s, std::sqrt(mk / mass(s)));
      ++checks;
      if (fk > surface_energy(s, f) * (1 + 1e-9)) ++failures;
    }
  }
  // Asymmetry is translation invariant.
  for (int i = 0; i < 8; ++i) {
    const ShapeSet s = random_polygon();
    const double m = mass(s);
    const double a0 = asymmetry(s, m).value;
    const double a1 = asymmetry(translate(s, v2(3 * u(rng) - 1.5, 3 * u(rng) - 1.5)), m).value;
    ++checks;
    if (std::abs(a0 - a1) > 1e-4 * std::max(a0, 1e-3)) ++failures;
  }
  // Critical mass scale covariance: m(c h) = c^{-n/(1+alpha)} m(h).
  for (int i = 0; i < 40; ++i) {
    const int n = 2 + i % 2;
    const double alpha = 0.25 + 3 * u(rng), c = std::exp(4 * u(rng) - 2);
    const double m1 = critical_mass(n, RadialPotential::power(alpha));
    const double mc = critical_mass(n, RadialPotential::power(alpha, c));
    ++checks;
    if (std::abs(mc / (std::pow(c, -n / (1 + alpha)) * m1) - 1) > 1e-9) ++failures;
  }
  return {failures == 0, fmt("%d checks, %d failures", checks, failures)};
}

}  // namespace

int main() {
  std::vector<Instance> sets;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "1D sharpness", 1, one_dimensional_sharpness},
      {2, "sharp eps exponent", 60, sharp_exponent},
      {3, "stability certificates", 300,
       [&] {
         sets = generated_instances();
         return stability_certificates(sets);
       }},
      {4, "transport certificate", 300,
       [&] {
         if (sets.empty()) sets = generated_instances();
         return transport_certificates(sets);
       }},
      {5, "critical mass", 10, critical_masses},
      {6, "symmetrization monotonicity", 120, symmetrization_monotonicity},
      {7, "derivative identity", 60, derivative_identity},
      {8, "curvature benchmarks", 60, curvature_benchmarks},
      {9, "property suite", 300, property_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool within = secs <= c.budget_s;
    const bool pass = o.pass && within;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2fs of %.0fs]%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_s, within ? "" : " over time budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
