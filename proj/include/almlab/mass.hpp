#pragma once

#include <optional>
#include <vector>

#include "almlab/energy.hpp"

namespace almlab {

// int_{B_1} h(|x|) dx = |S^{n-1}| int_0^1 h(t) t^{n-1} dt, adaptive quadrature to 1e-10.
double unit_ball_potential(int n, const RadialPotential& g);

// Energy of the centred ball of mass m for f = 1 and h homogeneous of degree
// alpha > 0, from the closed form in m^{(n-1)/n} and m^{(n+alpha)/n}.
EnergyBreakdown ball_energy(double m, int n, const RadialPotential& g);

// Mass where m -> E(B_{r(m)}) turns from concave to convex (n >= 2).
double critical_mass(int n, const RadialPotential& g);

struct EnergyCurve {
  std::vector<double> masses;  // sorted, positive
  std::vector<double> energies;
  double alpha = 0.0;
  int n = 2;

  void validate() const;
};

// count masses log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

EnergyCurve energy_curve(int n, const RadialPotential& g, const std::vector<double>& masses, unsigned threads = 1);

struct RegimeSplit {
  std::vector<double> masses;        // interior points where a second derivative was estimated
  std::vector<double> second_diff;   // d^2 E / dm^2 there
  std::optional<double> crossover;   // first concave -> convex zero
  double concave_lo = 0.0, concave_hi = 0.0;  // empty interval when lo == hi
  double convex_lo = 0.0, convex_hi = 0.0;
};

// Second derivatives by central differences; on log-uniform grids they are
// taken in log m with Richardson extrapolation. The crossover is the zero of
// the linearly interpolated second derivative. Throws "crossover not
// bracketed" when require_crossover is set and no sign change is found.
RegimeSplit regime_split(const EnergyCurve& curve, bool require_crossover = true);

}  // namespace almlab
