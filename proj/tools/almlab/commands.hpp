#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "almlab/shapes.hpp"
#include "output.hpp"

namespace almlab::cli {

struct RunContext {
  unsigned seed = 1;
  unsigned threads = 1;
  RunOutput* out = nullptr;
};

struct EnergyParams {
  std::string shape;
  double cell = 0.0;  // > 0 rasterizes the shape onto a lattice of this cell size
  std::string tension = "isotropic";
  std::string potential = "quadratic";
};

struct WulffParams {
  std::string tension = "isotropic";
  int dim = 2;
  int directions = 720;
  double cell = 1.0 / 64;
  double mass = 0.0;  // > 0 rescales the shape to this mass
  std::string save;
};

struct SymmetrizeParams {
  std::string shape = "rectangle:1,4";
  double cell = 1.0 / 256;  // <= 0 keeps the input encoding
  std::string tension = "isotropic";
  std::string potential = "quadratic";
  int max_iterations = 200;
  double stop_asymmetry = 0.02;
  int random_directions = 0;
};

struct StabilityParams {
  std::string family = "translated_ball";
  std::string shape;
  int n = 2;
  std::vector<double> masses{1.0};
  std::vector<double> eps;
  std::vector<double> x;
  int random_sets = 0;
  std::vector<double> eps_range{0.01, 0.3};
  std::string tension = "isotropic";
  std::string potential = "quadratic";
  double tolerance = -1.0;
  bool no_asymmetry = false;
};

struct TransportParams {
  std::string family = "translated_ball";
  int n = 2;
  double mass = 1.0;
  std::vector<double> eps{0.1};
  int samples = 400;
  std::string potential = "quadratic";
};

struct ModulusParams {
  std::string family = "translated_ball";
  int n = 2;
  std::vector<double> masses{1.0};
  std::vector<double> eps;
  std::string tension = "isotropic";
  std::string potential = "quadratic";
  bool no_asymmetry = false;
};

struct CriticalMassParams {
  int n = 2;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string potential = "power";
  double m_min = 0.0;  // <= 0 picks m_alpha / 30
  double m_max = 0.0;  // <= 0 picks 30 m_alpha
  int points = 121;
};

struct CurvatureParams {
  std::string mesh;
  std::string generator;
  std::string potential = "quadratic";
  std::string tension;  // optional; enables the anisotropic mean curvature
  double alpha = -1.0;
  std::string vertex_csv;
};

void run_energy(const EnergyParams& p, RunContext& ctx);
void run_wulff(const WulffParams& p, RunContext& ctx);
void run_symmetrize(const SymmetrizeParams& p, RunContext& ctx);
void run_stability(const StabilityParams& p, RunContext& ctx);
void run_transport(const TransportParams& p, RunContext& ctx);
void run_modulus(const ModulusParams& p, RunContext& ctx);
void run_critical_mass(const CriticalMassParams& p, RunContext& ctx);
void run_curvature(const CurvatureParams& p, RunContext& ctx);

// Shape from a JSON file path (*.json) or a builder spec such as
// "rectangle:1,4", "disk:1", "interval:-0.5,0.5", "polygon:6,1", "l-shape",
// "ellipse:2,1", "perturbed:1,0,0.1", "sphere:1" or "grid-ball:2,1,0.01".
ShapeSet shape_from_spec(const std::string& spec);

}  // namespace almlab::cli
