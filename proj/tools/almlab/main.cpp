#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <set>

#include "almlab/error.hpp"
#include "commands.hpp"
#include "output.hpp"

using namespace almlab::cli;

namespace {

constexpr const char* kVersion = "0.1.0";

// "--max-iterations,--max_iterations": config keys may use either spelling.
std::string flag(const std::string& name) {
  std::string alt = name;
  std::replace(alt.begin(), alt.end(), '-', '_');
  return alt == name ? "--" + name : "--" + name + ",--" + alt;
}

// Points CLI11 config diagnostics at the offending line of the config file.
std::string with_line(const std::string& message, const std::string& config_path) {
  if (config_path.empty()) return message;
  std::ifstream in(config_path);
  if (!in) return message;
  std::set<std::string> keys;
  std::smatch m;
  static const std::regex parse_re(R"(parse ([A-Za-z0-9_.\-]+))");
  static const std::regex opt_re(R"(--([A-Za-z0-9_\-]+))");
  if (std::regex_search(message, m, parse_re)) {
    std::string k = m[1];
    keys.insert(k.substr(k.rfind('.') + 1));
  }
  for (auto it = std::sregex_iterator(message.begin(), message.end(), opt_re); it != std::sregex_iterator(); ++it)
    keys.insert((*it)[1]);
  std::string line;
  int number = 0;
  static const std::regex key_re(R"(^\s*([A-Za-z0-9_\-]+)\s*=)");
  while (std::getline(in, line)) {
    ++number;
    if (std::regex_search(line, m, key_re) && keys.count(m[1]))
      return message + " (" + config_path + ":" + std::to_string(number) + ")";
  }
  return message;
}

// Effective option values (given or default) of one app level, as strings.
nlohmann::json echo_options(const CLI::App& app) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto* opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" || opt->get_lnames().front() == "version")
      continue;
    const auto& res = opt->reduced_results();
    if (opt->count() == 0)
      out[opt->get_lnames().front()] = opt->get_default_str();
    else if (res.size() == 1)
      out[opt->get_lnames().front()] = res.front();
    else
      out[opt->get_lnames().front()] = res;
  }
  return out;
}

nlohmann::json manifest_base(const std::string& sub, const CLI::App& app, const RunContext& ctx,
                             const std::string& config_path) {
  return {{"tool", "almlab"},
          {"subcommand", sub},
          {"seed", ctx.seed},
          {"threads", ctx.threads},
          {"config_file", config_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(config_path)},
          {"config", {{"global", echo_options(app)}, {sub, echo_options(*app.get_subcommand(sub))}}},
          {"versions",
           {{"almlab", kVersion},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"cli11", CLI11_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"compiler", __VERSION__}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-energy stability experiments: energies, Wulff shapes, symmetrization, certificates, "
               "critical masses and surface curvature."};
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  RunContext ctx;
  std::string out_dir = "run";
  bool quiet = false;
  app.add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  app.add_option("--threads", ctx.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  app.add_option(flag("out"), out_dir, "output directory")->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress stdout summaries");
  app.require_subcommand(0, 0);
  app.fallthrough();

  EnergyParams energy;
  auto* s_energy = app.add_subcommand("energy", "free energy of a shape")->configurable();
  s_energy->add_option(flag("shape"), energy.shape, "shape file (.json) or builder spec")->required();
  s_energy->add_option(flag("cell"), energy.cell, "rasterize onto a lattice of this cell size");
  s_energy->add_option(flag("tension"), energy.tension)->capture_default_str();
  s_energy->add_option(flag("potential"), energy.potential)->capture_default_str();

  WulffParams wulff;
  auto* s_wulff = app.add_subcommand("wulff", "Wulff shape of a surface tension")->configurable();
  s_wulff->add_option(flag("tension"), wulff.tension)->capture_default_str();
  s_wulff->add_option(flag("dim"), wulff.dim)->capture_default_str();
  s_wulff->add_option(flag("directions"), wulff.directions)->capture_default_str();
  s_wulff->add_option(flag("cell"), wulff.cell, "cell size for spatial shapes")->capture_default_str();
  s_wulff->add_option(flag("mass"), wulff.mass, "rescale to this mass");
  s_wulff->add_option(flag("save"), wulff.save, "write the shape to this JSON file");

  SymmetrizeParams sym;
  auto* s_sym = app.add_subcommand("symmetrize", "Steiner symmetrization descent")->configurable();
  s_sym->add_option(flag("shape"), sym.shape)->capture_default_str();
  s_sym->add_option(flag("cell"), sym.cell, "lattice cell size (<= 0 keeps the input encoding)")->capture_default_str();
  s_sym->add_option(flag("tension"), sym.tension)->capture_default_str();
  s_sym->add_option(flag("potential"), sym.potential)->capture_default_str();
  s_sym->add_option(flag("max-iterations"), sym.max_iterations)->capture_default_str();
  s_sym->add_option(flag("stop-asymmetry"), sym.stop_asymmetry)->capture_default_str();
  s_sym->add_option(flag("random-directions"), sym.random_directions, "extra seeded lattice directions")
      ->capture_default_str();

  StabilityParams stab;
  auto* s_stab = app.add_subcommand("stability", "stability certificates")->configurable();
  s_stab->add_option(flag("family"), stab.family)->capture_default_str();
  s_stab->add_option(flag("shape"), stab.shape, "certify a single shape instead of a family");
  s_stab->add_option(flag("n"), stab.n)->capture_default_str();
  s_stab->add_option(flag("masses"), stab.masses)->delimiter(',')->capture_default_str();
  s_stab->add_option(flag("eps"), stab.eps, "distances |E Δ B|/m")->delimiter(',');
  s_stab->add_option(flag("x"), stab.x, "translation offsets (translated_ball)")->delimiter(',');
  s_stab->add_option(flag("random-sets"), stab.random_sets, "seeded random eps draws")->capture_default_str();
  s_stab->add_option(flag("eps-range"), stab.eps_range)->delimiter(',')->capture_default_str();
  s_stab->add_option(flag("tension"), stab.tension)->capture_default_str();
  s_stab->add_option(flag("potential"), stab.potential)->capture_default_str();
  s_stab->add_option(flag("tolerance"), stab.tolerance, "absolute certificate tolerance (< 0: default)");
  s_stab->add_flag(flag("no-asymmetry"), stab.no_asymmetry, "skip the asymmetry search");

  TransportParams trans;
  auto* s_trans = app.add_subcommand("transport", "discrete transport certificate")->configurable();
  s_trans->add_option(flag("family"), trans.family)->capture_default_str();
  s_trans->add_option(flag("n"), trans.n)->capture_default_str();
  s_trans->add_option(flag("mass"), trans.mass)->capture_default_str();
  s_trans->add_option(flag("eps"), trans.eps)->delimiter(',')->capture_default_str();
  s_trans->add_option(flag("samples"), trans.samples)->capture_default_str();
  s_trans->add_option(flag("potential"), trans.potential)->capture_default_str();

  ModulusParams mod;
  auto* s_mod = app.add_subcommand("modulus", "stability modulus sweep and fit")->configurable();
  s_mod->add_option(flag("family"), mod.family)->capture_default_str();
  s_mod->add_option(flag("n"), mod.n)->capture_default_str();
  s_mod->add_option(flag("masses"), mod.masses)->delimiter(',')->capture_default_str();
  s_mod->add_option(flag("eps"), mod.eps)->delimiter(',')->required();
  s_mod->add_option(flag("tension"), mod.tension)->capture_default_str();
  s_mod->add_option(flag("potential"), mod.potential)->capture_default_str();
  s_mod->add_flag(flag("no-asymmetry"), mod.no_asymmetry);

  CriticalMassParams crit;
  auto* s_crit = app.add_subcommand("critical-mass", "critical mass and regime split")->configurable();
  s_crit->add_option(flag("n"), crit.n)->capture_default_str();
  s_crit->add_option(flag("alpha"), crit.alpha, "homogeneity degree of h");
  s_crit->add_option(flag("potential"), crit.potential, "potential spec; 'power' takes alpha")->capture_default_str();
  s_crit->add_option(flag("m-min"), crit.m_min);
  s_crit->add_option(flag("m-max"), crit.m_max);
  s_crit->add_option(flag("points"), crit.points)->capture_default_str();

  CurvatureParams curv;
  auto* s_curv = app.add_subcommand("curvature", "mesh curvature certificate")->configurable();
  s_curv->add_option(flag("mesh"), curv.mesh, "OFF or binary STL file");
  s_curv->add_option(flag("generator"), curv.generator, "icosphere:r,s | ellipsoid:a,b,c,s | torus:R,r,nu,nv | profile:file");
  s_curv->add_option(flag("potential"), curv.potential)->capture_default_str();
  s_curv->add_option(flag("tension"), curv.tension, "tension for the anisotropic mean curvature");
  s_curv->add_option(flag("alpha"), curv.alpha, "exponent in v = H^alpha (H^2 - |A|^2)")->capture_default_str();
  s_curv->add_option(flag("vertex-csv"), curv.vertex_csv, "per-vertex field dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto* cfg = app.get_option("--config");
    const std::string path = cfg->count() ? cfg->as<std::string>() : "";
    std::cerr << "config error: " << with_line(e.what(), path) << '\n';
    return 2;
  }
  const auto* cfg = app.get_option("--config");
  if (cfg->count()) config_path = cfg->as<std::string>();

  std::set<std::string> chosen;
  for (const auto* s : app.get_subcommands()) chosen.insert(s->get_name());
  if (chosen.empty()) {
    std::cerr << "config error: missing subcommand\n";
    return 2;
  }
  if (chosen.size() > 1) {
    std::cerr << "config error: conflicting subcommands:";
    for (const auto& c : chosen) std::cerr << ' ' << c;
    std::cerr << '\n';
    return 2;
  }
  const std::string sub = *chosen.begin();

  std::unique_ptr<RunOutput> out;
  try {
    out = std::make_unique<RunOutput>(out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  out->set_quiet(quiet);
  ctx.out = out.get();
  const auto manifest = manifest_base(sub, app, ctx, config_path);
  try {
    if (sub == "energy") run_energy(energy, ctx);
    if (sub == "wulff") run_wulff(wulff, ctx);
    if (sub == "symmetrize") run_symmetrize(sym, ctx);
    if (sub == "stability") run_stability(stab, ctx);
    if (sub == "transport") run_transport(trans, ctx);
    if (sub == "modulus") run_modulus(mod, ctx);
    if (sub == "critical-mass") run_critical_mass(crit, ctx);
    if (sub == "curvature") run_curvature(curv, ctx);
  } catch (const ConfigError& e) {
    out->finish(manifest, std::string(e.what()));
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    out->finish(manifest, std::string(e.what()));
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  out->finish(manifest);
  return 0;
}
