#include "almlab/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <map>
#include <mutex>

#include "almlab/error.hpp"

namespace almlab {

double unit_ball_volume(int n) {
  if (n < 1) throw Error("dimension must be positive");
  return std::pow(kPi, 0.5 * n) / boost::math::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

namespace {

struct Estimate {
  double value;
  double error;
};

// One 21-point Kronrod panel with the embedded 10-point Gauss rule. The
// error is |K - G| without the absolute floor Boost adds, so short panels
// far from the origin are not refined forever.
Estimate gk21(const std::function<double(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  static const auto& x = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = wk[0] * f0, g = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double pair = f(c - h * x[i]) + f(c + h * x[i]);
    k += wk[i] * pair;
    if (i % 2 == 1) g += wg[i / 2] * pair;
  }
  return {k * h, std::abs(k - g) * h};
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol, int depth,
                   Estimate est) {
  const double mid = 0.5 * (a + b);
  if (est.error <= tol || depth == 0 || !(mid > a && mid < b)) return est.value;
  return adaptive_gk(f, a, mid, 0.5 * tol, depth - 1, gk21(f, a, mid)) +
         adaptive_gk(f, mid, b, 0.5 * tol, depth - 1, gk21(f, mid, b));
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  const Estimate est = gk21(f, a, b);
  // The tolerance is global: halved on each split so the pieces add up to it.
  return adaptive_gk(f, a, b, std::max(abs_tol, rel_tol * std::abs(est.value)), 18, est);
}

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace almlab
