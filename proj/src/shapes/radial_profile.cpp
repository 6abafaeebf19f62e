#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

// Half spectrum of real samples.
void forward(const std::vector<double>& in, std::vector<double>& re, std::vector<double>& im) {
  const int n = static_cast<int>(in.size());
  const int h = n / 2 + 1;
  std::vector<double> buf(in);
  std::vector<fftw_complex> out(h);
  std::lock_guard lock(fftw_mutex());
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, buf.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  re.resize(h);
  im.resize(h);
  for (int k = 0; k < h; ++k) {
    re[k] = out[k][0];
    im[k] = out[k][1];
  }
}

// Real samples of length m from a half spectrum of length m/2 + 1 (unnormalised).
std::vector<double> backward(std::vector<fftw_complex>& spec, int m) {
  std::vector<double> out(m);
  std::lock_guard lock(fftw_mutex());
  fftw_plan plan = fftw_plan_dft_c2r_1d(m, spec.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;
  return theta;
}

}  // namespace

RadialProfile::RadialProfile(Vec center, std::vector<double> radii)
    : center_(std::move(center)), radii_(std::move(radii)) {
  if (center_.size() != 2) throw Error("planar radial profile needs a 2D center");
  build_planar();
}

RadialProfile::RadialProfile(Vec center, int n_theta, int n_phi, std::vector<double> radii)
    : center_(std::move(center)), radii_(std::move(radii)), n_theta_(n_theta), n_phi_(n_phi) {
  if (center_.size() != 3) throw Error("spatial radial profile needs a 3D center");
  if (n_theta < 2 || n_phi < 3 ||
      radii_.size() != static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi))
    throw Error("radial profile grid size does not match the sample count");
  build_spatial();
}

void RadialProfile::build_planar() {
  if (radii_.size() < 8) throw Error("planar radial profile needs at least 8 samples");
  for (double r : radii_)
    if (!std::isfinite(r) || r < 0) throw Error("radial samples must be finite and nonnegative");
  forward(radii_, spec_re_, spec_im_);
  const int n = static_cast<int>(radii_.size());
  table_ = resample(std::max(8 * n, 4096));
}

void RadialProfile::build_spatial() {
  for (double r : radii_)
    if (!std::isfinite(r) || r < 0) throw Error("radial samples must be finite and nonnegative");
  const GaussRule& rule = gauss_legendre(n_theta_);
  thetas_.resize(n_theta_);
  mu_weights_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i) {
    thetas_[i] = std::acos(rule.nodes[i]);  // nodes descend, so theta ascends
    mu_weights_[i] = rule.weights[i];
  }
}

double RadialProfile::phi_node(int j) const { return 2.0 * kPi * j / n_phi_; }

double RadialProfile::radius_at(double theta) const {
  const int n = static_cast<int>(radii_.size());
  double sum = spec_re_[0];
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int k = 1; k <= kmax; ++k)
    sum += 2.0 * (spec_re_[k] * std::cos(k * theta) - spec_im_[k] * std::sin(k * theta));
  if (n % 2 == 0) sum += spec_re_[n / 2] * std::cos(0.5 * n * theta);
  return sum / n;
}

double RadialProfile::derivative_at(double theta) const {
  const int n = static_cast<int>(radii_.size());
  double sum = 0.0;
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int k = 1; k <= kmax; ++k)
    sum -= 2.0 * k * (spec_re_[k] * std::sin(k * theta) + spec_im_[k] * std::cos(k * theta));
  if (n % 2 == 0) sum -= 0.5 * n * spec_re_[n / 2] * std::sin(0.5 * n * theta);
  return sum / n;
}

std::vector<double> RadialProfile::resample(int m) const {
  if (dim() != 2) throw Error("resample is defined for planar profiles");
  const int n = static_cast<int>(radii_.size());
  if (m < n) {
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) out[j] = radius_at(2.0 * kPi * j / m);
    return out;
  }
  std::vector<fftw_complex> spec(m / 2 + 1);
  for (auto& c : spec) c[0] = c[1] = 0.0;
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int k = 0; k <= kmax; ++k) {
    spec[k][0] = spec_re_[k];
    spec[k][1] = spec_im_[k];
  }
  if (n % 2 == 0) {
    // Split the Nyquist term so the real part matches the cosine-only interpolant.
    const double scale = (n == m) ? 1.0 : 0.5;
    spec[n / 2][0] = spec_re_[n / 2] * scale;
    spec[n / 2][1] = 0.0;
  }
  std::vector<double> out = backward(spec, m);
  for (double& v : out) v /= n;
  return out;
}

std::vector<double> RadialProfile::sample_derivatives() const {
  if (dim() != 2) throw Error("sample derivatives are defined for planar profiles");
  const int n = static_cast<int>(radii_.size());
  std::vector<fftw_complex> spec(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    // i k c_k
    spec[k][0] = -k * spec_im_[k];
    spec[k][1] = k * spec_re_[k];
  }
  if (n % 2 == 0) spec[n / 2][0] = spec[n / 2][1] = 0.0;
  std::vector<double> out = backward(spec, n);
  for (double& v : out) v /= n;
  return out;
}

double RadialProfile::radius_toward(const Vec& d) const {
  if (dim() == 2) {
    const int m = static_cast<int>(table_.size());
    double t = wrap_angle(std::atan2(d[1], d[0])) / (2.0 * kPi) * m;
    int i0 = static_cast<int>(std::floor(t));
    double frac = t - i0;
    i0 %= m;
    int i1 = (i0 + 1) % m;
    return (1.0 - frac) * table_[i0] + frac * table_[i1];
  }
  const double norm = d.norm();
  const double theta = std::acos(std::clamp(d[2] / norm, -1.0, 1.0));
  const double phi = wrap_angle(std::atan2(d[1], d[0]));
  double tphi = phi / (2.0 * kPi) * n_phi_;
  int j0 = static_cast<int>(std::floor(tphi));
  double fphi = tphi - j0;
  j0 %= n_phi_;
  int j1 = (j0 + 1) % n_phi_;
  auto ring = [&](int i) {
    return (1.0 - fphi) * radii_[i * n_phi_ + j0] + fphi * radii_[i * n_phi_ + j1];
  };
  if (theta <= thetas_.front()) return ring(0);
  if (theta >= thetas_.back()) return ring(n_theta_ - 1);
  int i = static_cast<int>(std::upper_bound(thetas_.begin(), thetas_.end(), theta) - thetas_.begin()) - 1;
  double ft = (theta - thetas_[i]) / (thetas_[i + 1] - thetas_[i]);
  return (1.0 - ft) * ring(i) + ft * ring(i + 1);
}

RadialProfile RadialProfile::with_center(Vec center) const {
  RadialProfile out = *this;
  if (center.size() != center_.size()) throw Error("center dimension mismatch");
  out.center_ = std::move(center);
  return out;
}

RadialProfile RadialProfile::scaled(double factor) const {
  std::vector<double> r(radii_);
  for (double& v : r) v *= factor;
  if (dim() == 2) return RadialProfile(center_ * factor, std::move(r));
  return RadialProfile(center_ * factor, n_theta_, n_phi_, std::move(r));
}

}  // namespace almlab
