#include "almlab/mass.hpp"

#include <algorithm>
#include <cmath>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/parallel.hpp"

namespace almlab {

namespace {

double homogeneity(const RadialPotential& g) {
  if (!g.radial()) throw Error("ball energy needs a radial potential");
  if (!g.degree()) throw Error("potential is not homogeneous");
  const double alpha = *g.degree();
  if (!(alpha > 0)) throw Error("homogeneity degree must be positive");
  return alpha;
}

}  // namespace

double unit_ball_potential(int n, const RadialPotential& g) {
  if (n < 1) throw Error("dimension must be positive");
  if (g.is_zero()) return 0.0;
  return unit_sphere_area(n) * integrate([&](double t) { return g.h(t) * std::pow(t, n - 1); }, 0.0, 1.0, 1e-10);
}

EnergyBreakdown ball_energy(double m, int n, const RadialPotential& g) {
  if (!(m > 0)) throw Error("mass must be positive");
  const double alpha = homogeneity(g);
  const double hb = unit_ball_potential(n, g);
  if (!(hb > 0)) throw Error("potential integral over the unit ball must be positive");
  const double b1 = unit_ball_volume(n);
  EnergyBreakdown e;
  e.surface = unit_sphere_area(n) * std::pow(b1, -(n - 1.0) / n) * std::pow(m, (n - 1.0) / n);
  e.potential = std::pow(b1, -(alpha + n) / n) * hb * std::pow(m, (n + alpha) / n);
  e.total = e.surface + e.potential;
  return e;
}

double critical_mass(int n, const RadialPotential& g) {
  if (n < 2) throw Error("critical mass needs dimension n >= 2");
  const double alpha = homogeneity(g);
  const double hb = unit_ball_potential(n, g);
  if (!(hb > 0)) throw Error("potential integral over the unit ball must be positive");
  return unit_ball_volume(n) *
         std::pow((n - 1.0) * unit_sphere_area(n) / (alpha * (alpha + n) * hb), n / (1.0 + alpha));
}

void EnergyCurve::validate() const {
  if (masses.size() != energies.size()) throw Error("energy curve sizes differ");
  if (masses.size() < 3) throw Error("energy curve needs at least 3 points");
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0)) throw Error("energy curve masses must be positive");
    if (i > 0 && !(masses[i] > masses[i - 1])) throw Error("energy curve masses must increase");
    if (!(energies[i] > 0) || !std::isfinite(energies[i])) throw Error("energy curve energies must be positive");
  }
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2) throw Error("log grid needs 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

EnergyCurve energy_curve(int n, const RadialPotential& g, const std::vector<double>& masses, unsigned threads) {
  EnergyCurve c;
  c.alpha = homogeneity(g);
  c.n = n;
  c.masses = masses;
  c.energies.resize(masses.size());
  parallel_for(masses.size(), threads, [&](std::size_t i) { c.energies[i] = ball_energy(masses[i], n, g).total; });
  c.validate();
  return c;
}

RegimeSplit regime_split(const EnergyCurve& curve, bool require_crossover) {
  curve.validate();
  const auto& m = curve.masses;
  const auto& e = curve.energies;
  const std::size_t N = m.size();
  RegimeSplit out;
  std::vector<double> u(N);
  for (std::size_t i = 0; i < N; ++i) u[i] = std::log(m[i]);
  const double hu = (u[N - 1] - u[0]) / (N - 1);
  bool log_uniform = true;
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(u[i] - u[i - 1] - hu) > 1e-9 * std::max(1.0, std::abs(hu))) log_uniform = false;

  for (std::size_t i = 1; i + 1 < N; ++i) {
    double d2;
    if (log_uniform) {
      // E_mm m^2 = E_uu - E_u with u = log m.
      double eu = (e[i + 1] - e[i - 1]) / (2 * hu);
      double euu = (e[i + 1] - 2 * e[i] + e[i - 1]) / (hu * hu);
      if (i >= 2 && i + 2 < N) {
        const double eu2 = (e[i + 2] - e[i - 2]) / (4 * hu);
        const double euu2 = (e[i + 2] - 2 * e[i] + e[i - 2]) / (4 * hu * hu);
        eu = (4 * eu - eu2) / 3;
        euu = (4 * euu - euu2) / 3;
      }
      d2 = (euu - eu) / (m[i] * m[i]);
    } else {
      const double h0 = m[i] - m[i - 1], h1 = m[i + 1] - m[i];
      d2 = 2 * (h0 * e[i + 1] - (h0 + h1) * e[i] + h1 * e[i - 1]) / (h0 * h1 * (h0 + h1));
    }
    out.masses.push_back(m[i]);
    out.second_diff.push_back(d2);
  }
  for (std::size_t k = 0; k + 1 < out.masses.size(); ++k) {
    // m^2 E'' varies like a sum of powers of m, so it interpolates well in log m.
    const double a = out.second_diff[k] * out.masses[k] * out.masses[k];
    const double b = out.second_diff[k + 1] * out.masses[k + 1] * out.masses[k + 1];
    if (a < 0 && b >= 0) {
      const double la = std::log(out.masses[k]), lb = std::log(out.masses[k + 1]);
      out.crossover = std::exp(la + (lb - la) * a / (a - b));
      break;
    }
  }
  const double lo = m.front(), hi = m.back();
  if (out.crossover) {
    out.concave_lo = lo;
    out.concave_hi = out.convex_lo = *out.crossover;
    out.convex_hi = hi;
  } else {
    if (require_crossover) throw Error("crossover not bracketed");
    const bool concave = std::all_of(out.second_diff.begin(), out.second_diff.end(), [](double d) { return d < 0; });
    if (concave) {
      out.concave_lo = lo;
      out.concave_hi = hi;
      out.convex_lo = out.convex_hi = hi;
    } else {
      out.convex_lo = lo;
      out.convex_hi = hi;
      out.concave_lo = out.concave_hi = lo;
    }
  }
  return out;
}

}  // namespace almlab
