#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "almlab/shapes.hpp"

namespace almlab {

// Convex, positively 1-homogeneous surface tension. The catalogue models are
// evaluated through their homogeneous extension, so f(t v) = t f(v) holds by
// construction; callers normally pass unit normals.
class SurfaceTension {
 public:
  static SurfaceTension isotropic();
  // f(v) = |v|_p for p >= 1 (p = infinity allowed).
  static SurfaceTension p_norm(double p);
  // Support function of the polytope {x : <x, n_i> <= c_i}; the polytope is
  // the Wulff shape of the tension. Normals need not be unit.
  static SurfaceTension crystalline(std::vector<Vec> normals, std::vector<double> values);
  // f(x) = |x| + c x_n^2 / |x|: a smooth axially symmetric anisotropy.
  static SurfaceTension axial(double c);

  double operator()(const Vec& v) const;
  bool has_hessian() const { return static_cast<bool>(hessian_); }
  // Hessian of the homogeneous extension at v.
  Eigen::MatrixXd hessian(const Vec& v) const;
  bool is_isotropic() const { return isotropic_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& parameters() const { return params_; }
  // Least eigenvalue of D^2 f on the tangent space of the unit sphere,
  // sampled over directions in R^dim; 0 when no Hessian is available.
  double ellipticity(int dim, int samples = 512) const;

  // Sampled invariant checks; throw Error on violation.
  void check_positive(int dim, int samples = 2048) const;
  void check_convex(int dim, int samples = 2048, unsigned seed = 1) const;

 private:
  using Eval = std::function<double(const Vec&)>;
  using Hess = std::function<Eigen::MatrixXd(const Vec&)>;
  SurfaceTension(std::string name, std::vector<double> params, Eval f, Hess h, bool iso)
      : name_(std::move(name)), params_(std::move(params)), eval_(std::move(f)), hessian_(std::move(h)),
        isotropic_(iso) {}

  std::string name_;
  std::vector<double> params_;
  Eval eval_;
  Hess hessian_;
  bool isotropic_ = false;
};

// g(x) = h(|x - x0|). With x0 = 0 the potential is radial.
class RadialPotential {
 public:
  // h(t) = coeff * t^alpha.
  static RadialPotential power(double alpha, double coeff = 1.0);
  static RadialPotential linear() { return power(1.0); }
  static RadialPotential quadratic() { return power(2.0); }
  static RadialPotential zero();
  // Linear interpolation of (t, h) pairs, extended past the last node with
  // the last slope.
  static RadialPotential table(std::vector<double> t, std::vector<double> h);
  // Arbitrary h; the right slope falls back to a forward difference.
  static RadialPotential custom(std::string name, std::function<double(double)> h, bool nondecreasing,
                                bool convex, std::optional<double> degree = std::nullopt);

  double h(double t) const { return h_(t); }
  double operator()(const Vec& x) const;
  // Right derivative of h at a: closed form where available, otherwise the
  // forward quotient with step 1e-6 a.
  double right_slope(double a) const;

  bool nondecreasing() const { return nondecreasing_; }
  bool convex() const { return convex_; }
  bool differentiable() const { return differentiable_; }
  std::optional<double> degree() const { return degree_; }
  bool is_zero() const { return zero_; }
  bool radial() const { return center_.size() == 0 || center_.norm() == 0.0; }
  const Vec& center() const { return center_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& parameters() const { return params_; }

  RadialPotential scaled(double c) const;
  RadialPotential centered_at(Vec x0) const;

  // Sampled invariant checks on [0, t_max]; throw Error on violation.
  void check(double t_max, int samples = 1000) const;

 private:
  RadialPotential() = default;

  std::string name_;
  std::vector<double> params_;
  std::function<double(double)> h_;
  std::function<double(double)> slope_;  // empty: use the difference quotient
  bool nondecreasing_ = true;
  bool convex_ = true;
  bool differentiable_ = true;
  bool zero_ = false;
  std::optional<double> degree_;
  Vec center_;
};

struct EnergyBreakdown {
  double surface = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

double surface_energy(const ShapeSet& s, const SurfaceTension& f);
double potential_energy(const ShapeSet& s, const RadialPotential& g);
EnergyBreakdown free_energy(const ShapeSet& s, const SurfaceTension& f, const RadialPotential& g);

// Energy of the centred ball of mass m in R^n for isotropic tension:
// |S^{n-1}| a^{n-1} + |S^{n-1}| int_0^a h(t) t^{n-1} dt.
EnergyBreakdown centered_ball_energy(int n, double m, const RadialPotential& g);

// Intersection of the halfspaces {<x, v> <= f(v)} over `directions` sampled
// directions: a polygon in 2D, an interval in 1D and a grid of the given
// cell size in 3D.
ShapeSet wulff_shape(const SurfaceTension& f, int dim, int directions, double cell = 1.0 / 64);

// Quasi-uniform unit directions: equally spaced angles in 2D, a Fibonacci
// lattice in 3D, +-1 in 1D.
std::vector<Vec> sphere_directions(int dim, int count);

}  // namespace almlab
