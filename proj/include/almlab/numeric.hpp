#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace almlab {

inline constexpr double kPi = std::numbers::pi;

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// H^{n-1}(S^{n-1}) = n * unit_ball_volume(n).
double unit_sphere_area(int n);

// Adaptive Gauss-Kronrod (21 points) on [a, b] with a global error target
// max(abs_tol, rel_tol * |first estimate|). Returns 0 for empty intervals.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Pairwise summation; result is independent of thread count.
double pairwise_sum(std::span<const double> values);

// Root of a continuous function bracketed by [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-14, int max_iter = 200);

}  // namespace almlab
