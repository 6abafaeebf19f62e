#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "almlab/builders.hpp"
#include "almlab/curvature.hpp"
#include "almlab/energy.hpp"
#include "almlab/error.hpp"
#include "almlab/io.hpp"
#include "almlab/mass.hpp"
#include "almlab/numeric.hpp"
#include "almlab/parallel.hpp"
#include "almlab/stability.hpp"
#include "almlab/symmetrize.hpp"

namespace almlab::cli {

namespace {

// Catalogue lookups happen before any module work, so a bad name is a
// configuration error rather than a module failure.
SurfaceTension tension_of(const std::string& spec, int dim) {
  try {
    return tension_from_spec(spec, dim);
  } catch (const Error& e) {
    throw ConfigError(std::string("tension: ") + e.what());
  }
}

RadialPotential potential_of(const std::string& spec) {
  try {
    return potential_from_spec(spec);
  } catch (const Error& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

Family family_of(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  try {
    return family_from_string(n);
  } catch (const Error& e) {
    throw ConfigError(std::string("family: ") + e.what());
  }
}

std::vector<double> numbers(const std::string& body, const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ConfigError("bad number '" + tok + "' in '" + spec + "'");
    out.push_back(v);
  }
  return out;
}

void need(const std::vector<double>& v, std::size_t lo, std::size_t hi, const std::string& spec) {
  if (v.size() < lo || v.size() > hi) throw ConfigError("wrong number of parameters in '" + spec + "'");
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json energy_json(const EnergyBreakdown& e) {
  return {{"surface", e.surface}, {"potential", e.potential}, {"total", e.total}};
}

ShapeSet with_cell(ShapeSet s, double cell) {
  if (cell > 0) return grid_of(s, cell);
  return s;
}

// Ball of mass m in R^n translated by x along the first axis.
ShapeSet translated_ball(int n, double m, double x) {
  const double a = Ball::with_mass(n, m).radius;
  if (n == 1) return interval(-a + x, a + x);
  if (n == 2) return offset_disk(a, Vec2(x, 0.0));
  if (n == 3) return offset_ball3(a, Vec3(x, 0.0, 0.0));
  throw ConfigError("dimension n must be 1, 2 or 3");
}

void check_dim(int n) {
  if (n < 1 || n > 3) throw ConfigError("dimension n must be 1, 2 or 3");
}

}  // namespace

ShapeSet shape_from_spec(const std::string& spec) {
  if (spec.empty()) throw ConfigError("missing shape");
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") return read_shape(spec);
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto v = colon == std::string::npos ? std::vector<double>{} : numbers(spec.substr(colon + 1), spec);
  struct Builder {
    std::size_t lo, hi;
    std::function<ShapeSet(const std::vector<double>&)> make;
  };
  static const std::map<std::string, Builder> builders = {
      {"interval", {2, 2, [](const auto& a) { return interval(a[0], a[1]); }}},
      {"rectangle", {2, 2, [](const auto& a) { return rectangle(a[0], a[1]); }}},
      {"square", {0, 0, [](const auto&) { return unit_square(); }}},
      {"l-shape", {0, 0, [](const auto&) { return l_shape(); }}},
      {"polygon", {2, 2, [](const auto& a) { return regular_polygon(static_cast<int>(a[0]), a[1]); }}},
      {"disk", {1, 1, [](const auto& a) { return disk(a[0]); }}},
      {"ellipse", {2, 2, [](const auto& a) { return ellipse(a[0], a[1]); }}},
      {"perturbed",
       {2, 64,
        [](const auto& a) {
          return perturbed_disk(a[0], std::vector<double>(a.begin() + 1, a.end()),
                                std::vector<double>(a.size() - 1, 0.0));
        }}},
      {"sphere", {1, 1, [](const auto& a) { return sphere(a[0]); }}},
      {"grid-ball", {3, 3, [](const auto& a) { return grid_ball(static_cast<int>(a[0]), a[1], a[2]); }}},
  };
  const auto it = builders.find(name);
  if (it == builders.end()) throw ConfigError("unknown shape builder '" + name + "'");
  need(v, it->second.lo, it->second.hi, spec);
  return it->second.make(v);
}

void run_energy(const EnergyParams& p, RunContext& ctx) {
  const ShapeSet s = with_cell(shape_from_spec(p.shape), p.cell);
  const auto f = tension_of(p.tension, s.dimension());
  const auto g = potential_of(p.potential);
  const double m = mass(s);
  const EnergyBreakdown e = free_energy(s, f, g);
  json r = {{"kind", "energy"},         {"shape", p.shape},       {"encoding", to_string(s.encoding())},
            {"dimension", s.dimension()}, {"mass", m},            {"perimeter", perimeter(s)},
            {"tension", p.tension},       {"potential", p.potential}, {"energy", energy_json(e)}};
  std::optional<double> deficit;
  if (f.is_isotropic() && g.radial()) {
    const EnergyBreakdown b = centered_ball_energy(s.dimension(), m, g);
    r["ball_energy"] = energy_json(b);
    deficit = e.total - b.total;
  } else {
    r["ball_energy"] = nullptr;
  }
  r["deficit"] = opt_json(deficit);
  ctx.out->record(r);
  ctx.out->header({"mass", "perimeter", "surface", "potential", "total", "deficit"});
  ctx.out->row({num(m), num(perimeter(s)), num(e.surface), num(e.potential), num(e.total), num(deficit)});
  ctx.out->print("E = " + num(e.total) + " (F = " + num(e.surface) + ", G = " + num(e.potential) + ")");
}

void run_wulff(const WulffParams& p, RunContext& ctx) {
  check_dim(p.dim);
  if (p.directions < 3) throw ConfigError("wulff needs at least 3 directions");
  const auto f = tension_of(p.tension, p.dim);
  ShapeSet k = wulff_shape(f, p.dim, p.directions, p.cell);
  if (p.mass > 0) k = scale(k, std::pow(p.mass / mass(k), 1.0 / p.dim));
  const double m = mass(k);
  const double fk = surface_energy(k, f);
  // Weak optimality: the Wulff shape beats the ball of equal mass.
  const double a = Ball::with_mass(p.dim, m).radius;
  const ShapeSet ball = p.dim == 1 ? interval(-a, a) : p.dim == 2 ? disk(a, 2048) : sphere(a, 48, 96);
  const double fb = surface_energy(ball, f);
  const double expo = (p.dim - 1.0) / p.dim;
  json r = {{"kind", "wulff"},
            {"tension", p.tension},
            {"dimension", p.dim},
            {"encoding", to_string(k.encoding())},
            {"mass", m},
            {"surface_energy", fk},
            {"normalized_energy", fk / std::pow(m, expo)},
            {"ball_surface_energy", fb},
            {"weak_optimality", fk <= fb * (1 + 1e-9)}};
  ctx.out->record(r);
  ctx.out->header({"dimension", "mass", "surface_energy", "normalized_energy", "ball_surface_energy"});
  ctx.out->row({std::to_string(p.dim), num(m), num(fk), num(fk / std::pow(m, expo)), num(fb)});
  if (!p.save.empty()) write_shape(k, p.save);
  ctx.out->print("F(K) = " + num(fk) + ", F(B) = " + num(fb) + " at mass " + num(m));
}

void run_symmetrize(const SymmetrizeParams& p, RunContext& ctx) {
  const ShapeSet s = with_cell(shape_from_spec(p.shape), p.cell);
  const auto f = tension_of(p.tension, s.dimension());
  const auto g = potential_of(p.potential);
  if (p.max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (p.random_directions < 0) throw ConfigError("random_directions must be nonnegative");
  const auto plan =
      SymmetrizationPlan::standard(s.dimension(), p.max_iterations, p.stop_asymmetry, p.random_directions, ctx.seed);
  const auto history = symmetrization_descent(s, plan, f, g);
  ctx.out->header({"iteration", "F", "G", "E", "asymmetry"});
  for (const auto& h : history) {
    ctx.out->record({{"kind", "descent"},
                     {"iteration", h.iteration},
                     {"mass", h.mass},
                     {"F", h.energy.surface},
                     {"G", h.energy.potential},
                     {"E", h.energy.total},
                     {"asymmetry", h.asymmetry}});
    ctx.out->row({std::to_string(h.iteration), num(h.energy.surface), num(h.energy.potential), num(h.energy.total),
                  num(h.asymmetry)});
  }
  const auto& last = history.back();
  ctx.out->print("steps = " + std::to_string(last.iteration) + ", E = " + num(last.energy.total) +
                 ", asymmetry = " + num(last.asymmetry));
}

namespace {

struct StabilityTask {
  double mass = 0.0;
  std::optional<double> eps, x;
  std::string label;
  std::function<ShapeSet()> build;
};

json report_json(const StabilityReport& r) {
  json certs = json::array();
  for (const auto& c : r.certificates)
    certs.push_back({{"name", c.name},
                     {"applicable", c.applicable},
                     {"lhs", c.lhs},
                     {"rhs", c.rhs},
                     {"slack", c.slack},
                     {"pass", c.pass}});
  return {{"mass", r.mass},
          {"radius", r.radius},
          {"energy", energy_json(r.energy)},
          {"ball_energy", energy_json(r.ball_energy)},
          {"deficit", r.deficit},
          {"potential_excess", r.potential_excess},
          {"asymmetry", r.asymmetry},
          {"asymmetry_translation", r.asymmetry_translation.size() ? vec_json(r.asymmetry_translation) : json::array()},
          {"distance_to_minimizer", r.distance_to_minimizer},
          {"potential_gap", r.potential_gap},
          {"first_moment_term", r.first_moment_term},
          {"slope", r.slope},
          {"A_star", r.A_star},
          {"r_a", r.r_a},
          {"r_star", r.r_star},
          {"constant_estimate", opt_json(r.constant_estimate)},
          {"tolerance", r.tolerance},
          {"certificates", certs},
          {"all_pass", r.all_pass()}};
}

}  // namespace

void run_stability(const StabilityParams& p, RunContext& ctx) {
  check_dim(p.n);
  const auto f = tension_of(p.tension, p.n);
  const auto g = potential_of(p.potential);
  std::vector<StabilityTask> tasks;
  const int modes = !p.shape.empty() + !p.eps.empty() + !p.x.empty() + (p.random_sets > 0);
  if (modes != 1) throw ConfigError("stability needs exactly one of shape, eps, x or random_sets");
  for (double m : p.masses)
    if (!(m > 0)) throw ConfigError("masses must be positive");
  if (!p.shape.empty()) {
    const ShapeSet s = shape_from_spec(p.shape);
    tasks.push_back({mass(s), std::nullopt, std::nullopt, p.shape, [s] { return s; }});
  } else if (!p.x.empty()) {
    if (family_of(p.family) != Family::translated_ball) throw ConfigError("x offsets need the translated_ball family");
    for (double m : p.masses)
      for (double x : p.x)
        tasks.push_back({m, std::nullopt, x, "translated_ball", [n = p.n, m, x] { return translated_ball(n, m, x); }});
  } else {
    const Family fam = family_of(p.family);
    std::vector<double> eps = p.eps;
    if (p.random_sets > 0) {
      if (p.eps_range.size() != 2 || !(0 < p.eps_range[0] && p.eps_range[0] < p.eps_range[1]))
        throw ConfigError("eps_range must be two increasing positive numbers");
      std::mt19937 rng(ctx.seed);
      std::uniform_real_distribution<double> u(p.eps_range[0], p.eps_range[1]);
      eps.clear();
      for (int i = 0; i < p.random_sets; ++i) eps.push_back(u(rng));
    }
    for (double m : p.masses)
      for (double e : eps)
        tasks.push_back({m, e, std::nullopt, to_string(fam), [fam, n = p.n, m, e] { return family_member(fam, n, m, e); }});
  }
  StabilityOptions opt;
  opt.tolerance = p.tolerance;
  opt.compute_asymmetry = !p.no_asymmetry;
  std::vector<StabilityReport> reports(tasks.size());
  parallel_for(tasks.size(), ctx.threads,
               [&](std::size_t i) { reports[i] = stability_certificate(tasks[i].build(), f, g, opt); });

  const std::vector<std::string> names = {"minimality", "potential_gap", "first_moment", "bounded_potential",
                                          "symmetric_difference"};
  std::vector<std::string> header = {"m", "eps", "x", "deficit", "asymmetry"};
  for (const auto& n : names) header.push_back("slack_" + n);
  header.push_back("all_pass");
  ctx.out->header(header);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& r = reports[i];
    json rec = report_json(r);
    rec["kind"] = "stability";
    rec["shape"] = tasks[i].label;
    rec["eps"] = opt_json(tasks[i].eps);
    rec["x"] = opt_json(tasks[i].x);
    ctx.out->record(rec);
    std::vector<std::string> row = {num(tasks[i].mass), num(tasks[i].eps), num(tasks[i].x), num(r.deficit),
                                    num(r.asymmetry)};
    for (const auto& n : names) {
      std::string cell;
      for (const auto& c : r.certificates)
        if (c.name == n && c.applicable) cell = num(c.slack);
      row.push_back(cell);
    }
    row.push_back(r.all_pass() ? "true" : "false");
    ctx.out->row(row);
    ctx.out->print("m = " + num(tasks[i].mass) + (tasks[i].x ? ", x = " + num(tasks[i].x) : "") +
                   (tasks[i].eps ? ", eps = " + num(tasks[i].eps) : "") + ": deficit = " + num(r.deficit) +
                   ", asymmetry = " + num(r.asymmetry) + (r.all_pass() ? "" : " [certificate failed]"));
  }
}

void run_transport(const TransportParams& p, RunContext& ctx) {
  check_dim(p.n);
  const Family fam = family_of(p.family);
  const auto g = potential_of(p.potential);
  if (!(p.mass > 0)) throw ConfigError("mass must be positive");
  if (p.eps.empty()) throw ConfigError("transport needs at least one eps value");
  std::vector<TransportCertificate> certs(p.eps.size());
  parallel_for(p.eps.size(), ctx.threads, [&](std::size_t i) {
    certs[i] = transport_bound(family_member(fam, p.n, p.mass, p.eps[i]), g, p.samples);
  });
  ctx.out->header({"m", "eps", "samples", "pushforward_error", "max_target_radius", "sample_gap", "sample_bound",
                   "targets_inside", "bound_holds"});
  const double a = Ball::with_mass(p.n, p.mass).radius;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const auto& c = certs[i];
    ctx.out->record({{"kind", "transport"},
                     {"family", to_string(fam)},
                     {"n", p.n},
                     {"mass", p.mass},
                     {"radius", a},
                     {"eps", p.eps[i]},
                     {"samples", c.pairs.size()},
                     {"region_mass", c.region_mass},
                     {"cost", c.cost},
                     {"pushforward_error", c.pushforward_error},
                     {"max_target_radius", c.max_target_radius},
                     {"sample_gap", c.sample_gap},
                     {"sample_bound", c.sample_bound},
                     {"targets_inside", c.targets_inside},
                     {"bound_holds", c.bound_holds},
                     {"trivial", c.trivial}});
    ctx.out->row({num(p.mass), num(p.eps[i]), std::to_string(c.pairs.size()), num(c.pushforward_error),
                  num(c.max_target_radius), num(c.sample_gap), num(c.sample_bound), c.targets_inside ? "true" : "false",
                  c.bound_holds ? "true" : "false"});
    ctx.out->print("eps = " + num(p.eps[i]) + ": k = " + std::to_string(c.pairs.size()) +
                   ", max |T(x)| = " + num(c.max_target_radius) + " (a = " + num(a) + ")");
  }
}

void run_modulus(const ModulusParams& p, RunContext& ctx) {
  check_dim(p.n);
  const Family fam = family_of(p.family);
  const auto f = tension_of(p.tension, p.n);
  const auto g = potential_of(p.potential);
  if (p.eps.empty()) throw ConfigError("modulus needs an eps grid");
  SweepOptions opt;
  opt.threads = ctx.threads;
  opt.compute_asymmetry = !p.no_asymmetry;
  const ModulusFit fit = modulus_sweep(f, g, p.n, p.masses, p.eps, fam, opt);
  ctx.out->header({"mass", "eps", "measured_eps", "deficit", "asymmetry"});
  for (const auto& pt : fit.points) {
    ctx.out->record({{"kind", "sweep_point"},
                     {"mass", pt.mass},
                     {"eps", pt.eps},
                     {"measured_eps", pt.measured_eps},
                     {"deficit", pt.deficit},
                     {"asymmetry", pt.asymmetry}});
    ctx.out->row({num(pt.mass), num(pt.eps), num(pt.measured_eps), num(pt.deficit), num(pt.asymmetry)});
  }
  ctx.out->record({{"kind", "modulus_fit"},
                   {"family", to_string(fam)},
                   {"n", p.n},
                   {"p_eps", fit.p_eps},
                   {"p_m", opt_json(fit.p_m)},
                   {"prefactor", fit.prefactor},
                   {"r_squared", fit.r_squared},
                   {"points", fit.points.size()}});
  ctx.out->print("p_eps = " + num(fit.p_eps) + (fit.p_m ? ", p_m = " + num(fit.p_m) : "") +
                 ", R^2 = " + num(fit.r_squared));
}

void run_critical_mass(const CriticalMassParams& p, RunContext& ctx) {
  if (p.n < 2 || p.n > 3) throw ConfigError("critical-mass needs n = 2 or 3");
  std::string spec = p.potential;
  if (spec == "power") {
    if (std::isnan(p.alpha)) throw ConfigError("critical-mass with the power potential needs alpha");
    spec = "power:" + num(p.alpha);
  }
  const auto g = potential_of(spec);
  if (!std::isnan(p.alpha) && g.degree() && std::abs(*g.degree() - p.alpha) > 1e-12)
    throw ConfigError("potential degree " + num(*g.degree()) + " does not match alpha " + num(p.alpha));
  const double m_alpha = critical_mass(p.n, g);
  const double lo = p.m_min > 0 ? p.m_min : m_alpha / 30;
  const double hi = p.m_max > 0 ? p.m_max : m_alpha * 30;
  if (!(lo < hi)) throw ConfigError("m_min must be below m_max");
  if (p.points < 5) throw ConfigError("critical-mass needs at least 5 points");
  const EnergyCurve curve = energy_curve(p.n, g, log_grid(lo, hi, p.points), ctx.threads);
  const RegimeSplit split = regime_split(curve, false);
  ctx.out->record({{"kind", "critical_mass"},
                   {"n", p.n},
                   {"alpha", curve.alpha},
                   {"potential", spec},
                   {"m_alpha", m_alpha},
                   {"crossover", opt_json(split.crossover)},
                   {"relative_gap", split.crossover ? json(std::abs(*split.crossover / m_alpha - 1)) : json(nullptr)},
                   {"concave", {split.concave_lo, split.concave_hi}},
                   {"convex", {split.convex_lo, split.convex_hi}}});
  ctx.out->header({"mass", "energy", "second_diff"});
  for (std::size_t i = 0; i < curve.masses.size(); ++i) {
    std::optional<double> d2;
    const auto it = std::find(split.masses.begin(), split.masses.end(), curve.masses[i]);
    if (it != split.masses.end()) d2 = split.second_diff[it - split.masses.begin()];
    ctx.out->record(
        {{"kind", "curve_point"}, {"mass", curve.masses[i]}, {"energy", curve.energies[i]}, {"second_diff", opt_json(d2)}});
    ctx.out->row({num(curve.masses[i]), num(curve.energies[i]), num(d2)});
  }
  ctx.out->print("m_alpha = " + num(m_alpha));
  ctx.out->print("crossover = " + (split.crossover ? num(*split.crossover) : std::string("none")));
}

void run_curvature(const CurvatureParams& p, RunContext& ctx) {
  if (p.mesh.empty() == p.generator.empty()) throw ConfigError("curvature needs exactly one of mesh or generator");
  SurfaceMesh mesh;
  if (!p.mesh.empty()) {
    mesh = read_mesh(p.mesh);
  } else {
    const auto colon = p.generator.find(':');
    const std::string name = p.generator.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : p.generator.substr(colon + 1);
    if (name == "profile") {
      const ShapeSet s = read_shape(body);
      if (!s.radial()) throw ConfigError("profile generator needs a radial shape file");
      mesh = mesh_from_profile(*s.radial());
    } else {
      const auto v = numbers(body, p.generator);
      if (name == "icosphere") {
        need(v, 2, 2, p.generator);
        mesh = icosphere(v[0], static_cast<int>(v[1]));
      } else if (name == "ellipsoid") {
        need(v, 4, 4, p.generator);
        mesh = ellipsoid_mesh(v[0], v[1], v[2], static_cast<int>(v[3]));
      } else if (name == "torus") {
        need(v, 4, 4, p.generator);
        mesh = torus_mesh(v[0], v[1], static_cast<int>(v[2]), static_cast<int>(v[3]));
      } else {
        throw ConfigError("unknown mesh generator '" + name + "'");
      }
    }
  }
  const auto g = potential_of(p.potential);
  std::optional<SurfaceTension> f;
  if (!p.tension.empty()) f = tension_of(p.tension, 3);
  SurfaceMesh m = curvature_fields(std::move(mesh), ctx.threads);
  if (f) anisotropic_mean_curvature(m, *f);
  const CurvatureCertificate c = curvature_certificate(m, g, p.alpha);
  const double mu = multiplier_mu(m, f ? *f : SurfaceTension::isotropic(), g);

  auto stats = [](const std::vector<double>& v) {
    const auto s = summarize(v);
    return json{{"min", s.min}, {"max", s.max}, {"mean", s.mean}};
  };
  json fields = {{"H", stats(m.H)},         {"A2", stats(m.A2)}, {"K", stats(m.K)},
                 {"omega", stats(c.omega)}, {"epsilon", stats(c.epsilon)}, {"v", stats(c.v)},
                 {"q", stats(c.q)},         {"grad_g", stats(c.gradient_norm)}};
  if (f) fields["Hf"] = stats(m.Hf);
  ctx.out->record({{"kind", "curvature"},
                   {"source", p.mesh.empty() ? p.generator : p.mesh},
                   {"vertices", m.vertices.size()},
                   {"triangles", m.triangles.size()},
                   {"euler_characteristic", m.euler_characteristic()},
                   {"enclosed_volume", m.enclosed_volume()},
                   {"surface_area", m.surface_area()},
                   {"total_gauss_curvature", total_gauss_curvature(m)},
                   {"alpha", p.alpha},
                   {"mu", mu},
                   {"fields", fields},
                   {"q_value", c.q_value},
                   {"q_minus_one_value", c.q_minus_one_value},
                   {"tolerance", c.tolerance},
                   {"remark_ratio_max", c.remark_ratio_max},
                   {"identity_residual_max", c.identity_residual_max},
                   {"sigma_tlog_fraction", c.sigma_tlog_fraction},
                   {"sigma_sqrt_fraction", c.sigma_sqrt_fraction},
                   {"verdict", c.convex ? "convex" : "not convex"}});
  ctx.out->header({"field", "min", "max", "mean"});
  for (const auto& [name, s] : fields.items())
    ctx.out->row({name, num(s["min"].get<double>()), num(s["max"].get<double>()), num(s["mean"].get<double>())});
  if (!p.vertex_csv.empty()) write_vertex_csv(m, &c, p.vertex_csv);
  ctx.out->print("H in [" + num(summarize(m.H).min) + ", " + num(summarize(m.H).max) + "], K in [" +
                 num(summarize(m.K).min) + ", " + num(summarize(m.K).max) + "], verdict: " +
                 (c.convex ? "convex" : "not convex"));
}

}  // namespace almlab::cli
