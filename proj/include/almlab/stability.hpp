#pragma once

#include <optional>
#include <string>
#include <vector>

#include "almlab/energy.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

struct AsymmetryResult {
  double value = 0.0;  // inf_z |S Δ (B_a + z)| / m
  Vec translation;     // minimizing z
  int evaluations = 0;
};

// Coarse grid over the bounding box, then pattern search from the best grid
// points with step halving down to 1e-5 a. Requires |S| = m to 1e-6 relative.
AsymmetryResult asymmetry(const ShapeSet& s, double m);

struct Certificate {
  std::string name;
  bool applicable = true;  // false when the hypothesis (e.g. convex h) is absent
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool pass = true;    // slack >= -tolerance
};

struct StabilityReport {
  double mass = 0.0;
  double radius = 0.0;  // a, with |B_a| = m
  EnergyBreakdown energy;
  EnergyBreakdown ball_energy;
  double deficit = 0.0;
  double potential_excess = 0.0;  // G(E) - G(B_a)
  double asymmetry = 0.0;
  Vec asymmetry_translation;
  double distance_to_minimizer = 0.0;  // |E Δ B_a| / m
  double potential_gap = 0.0;          // int_{E\B_a} h(|x|) - h(a)
  double first_moment_term = 0.0;      // dh(a) int_{E\B_a} |x| - a (convex h only)
  double slope = 0.0;                  // right derivative of h at a
  double A_star = 0.0;
  double r_a = 0.0;
  double r_star = 0.0;
  // deficit / (m asymmetry^2): an empirical lower-bound estimate for the
  // dimensional constant, absent when the asymmetry vanishes.
  std::optional<double> constant_estimate;
  double tolerance = 0.0;
  std::vector<Certificate> certificates;

  bool all_pass() const;
};

struct StabilityOptions {
  bool compute_asymmetry = true;
  // Absolute tolerance for the certificates; negative selects the encoding
  // default (1e-7 E(B_a) for exact encodings, 1% of F(B_a) for grids).
  double tolerance = -1.0;
};

// Requires isotropic f and a radial nondecreasing g; throws naming the
// violated hypothesis otherwise.
StabilityReport stability_certificate(const ShapeSet& s, const SurfaceTension& f, const RadialPotential& g,
                                      const StabilityOptions& opt = {});

// The proof's constants for dimension n, ball radius a and enclosing radius
// r_*, with t_n = n (2 r_*)^{n-1}.
double a_star_constant(int n, double a, double r_star);
double r_a_constant(double slope, double a_star);

struct TransportPair {
  Vec source;  // in E \ B_a
  Vec target;  // in B_a \ E
};

struct TransportCertificate {
  std::vector<TransportPair> pairs;
  double region_mass = 0.0;          // |E \ B_a| = |B_a \ E|
  double cost = 0.0;                 // mean squared displacement of the matching
  double pushforward_error = 0.0;    // relative gap of the sampled h-moment of T(x) vs the exact moment over B_a \ E
  double max_target_radius = 0.0;
  double sample_gap = 0.0;           // |E\B_a| mean[h(|x|) - h(|T x|)]
  double sample_bound = 0.0;         // |E\B_a| mean[h(|x|) - h(a)]
  bool targets_inside = true;
  bool bound_holds = true;
  bool trivial = false;
};

// Equal-size lattice samples of E \ B_a and B_a \ E matched by an exact
// minimum quadratic-cost assignment; refuses more than 600 samples.
TransportCertificate transport_bound(const ShapeSet& s, const RadialPotential& g, int samples);

// Minimum-cost perfect matching for a square cost matrix (row i -> column result[i]).
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

struct TranslationBound {
  double rate = 0.0;   // min over sampled directions of the small-|y| slope of |(S+yw) Δ S|
  double range = 0.0;  // |(S+yw) Δ S| >= (1 - 1e-3) rate |y| for all sampled w and |y| <= range
  Vec worst_direction;
  std::vector<Vec> directions;
  std::vector<double> slopes;  // per direction
};

TranslationBound translation_lower_bound(const ShapeSet& s, int directions, int steps);

struct DerivativeIdentity {
  std::vector<double> t;       // midpoints of the t-grid
  std::vector<double> fprime;  // difference quotients of |(S+tw) Δ S|
  std::vector<double> g;       // boundary integral g_w(t)
  double max_relative_error = 0.0;
};

// Boundary integral g_w(t) = int over (∂(S - tw)) ∩ S of <ν(x + tw), w>.
double boundary_flux(const ShapeSet& s, const Vec& w, double t);

// Convex polygons only.
DerivativeIdentity derivative_identity_check(const ShapeSet& s, const Vec& w, double t_max, int steps);

enum class Family { translated_ball, dilated_ellipse, perturbed_disk };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

// Member of the family with mass m in R^n at distance |E Δ B_a| / m = eps
// from the centred ball (eps = 0 is the family's own ball encoding).
ShapeSet family_member(Family family, int n, double m, double eps);

struct SweepPoint {
  double mass = 0.0;
  double eps = 0.0;
  double measured_eps = 0.0;
  double deficit = 0.0;
  double asymmetry = 0.0;
};

struct ModulusFit {
  double p_eps = 0.0;
  std::optional<double> p_m;  // absent when the sweep has a single mass
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
  std::vector<SweepPoint> points;
};

struct SweepOptions {
  unsigned threads = 1;
  bool compute_asymmetry = false;
};

// Deficits over masses x eps, fitted as log deficit = p_eps log eps + p_m log m + log c.
ModulusFit modulus_sweep(const SurfaceTension& f, const RadialPotential& g, int n, const std::vector<double>& masses,
                         const std::vector<double>& eps_grid, Family family, const SweepOptions& opt = {});

// Least-squares fit of precomputed points.
ModulusFit fit_modulus(std::vector<SweepPoint> points);

}  // namespace almlab
