#include "almlab/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "almlab/error.hpp"
#include "almlab/numeric.hpp"
#include "almlab/parallel.hpp"

namespace almlab {

void SurfaceMesh::validate() const {
  const int nv = static_cast<int>(vertices.size());
  if (nv < 4 || triangles.size() < 4) throw Error("mesh needs at least 4 vertices and 4 triangles");
  std::map<std::pair<int, int>, int> undirected, directed;
  std::vector<char> used(nv, 0);
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) throw Error("triangle index out of range");
      used[t[k]] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw Error("degenerate triangle with repeated vertex");
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++undirected[{std::min(a, b), std::max(a, b)}];
      ++directed[{a, b}];
    }
  }
  for (int i = 0; i < nv; ++i)
    if (!used[i]) throw Error("vertex " + std::to_string(i) + " is not used by any triangle");
  std::ostringstream bad;
  int count = 0;
  for (const auto& [e, c] : undirected) {
    const bool oriented = directed[{e.first, e.second}] == 1 && directed[{e.second, e.first}] == 1;
    if (c != 2 || !oriented) {
      if (count < 8) bad << (count ? ", " : "") << "(" << e.first << "," << e.second << ") x" << c;
      ++count;
    }
  }
  if (count > 0)
    throw Error("non-manifold or inconsistently oriented mesh: " + std::to_string(count) + " bad edges: " + bad.str());
}

int SurfaceMesh::euler_characteristic() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) edges.insert({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(triangles.size());
}

double SurfaceMesh::enclosed_volume() const {
  std::vector<double> terms;
  terms.reserve(triangles.size());
  for (const auto& t : triangles)
    terms.push_back(vertices[t[0]].dot(vertices[t[1]].cross(vertices[t[2]])) / 6.0);
  return pairwise_sum(terms);
}

double SurfaceMesh::max_edge_length() const {
  double out = 0.0;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) out = std::max(out, (vertices[t[k]] - vertices[t[(k + 1) % 3]]).norm());
  return out;
}

double SurfaceMesh::surface_area() const {
  std::vector<double> terms;
  for (const auto& t : triangles)
    terms.push_back(0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm());
  return pairwise_sum(terms);
}

SurfaceMesh oriented_outward(SurfaceMesh m) {
  if (m.enclosed_volume() < 0)
    for (auto& t : m.triangles) std::swap(t[1], t[2]);
  return m;
}

namespace {

double cot(const Vec3& u, const Vec3& v) { return u.dot(v) / u.cross(v).norm(); }

std::vector<std::vector<int>> vertex_neighbors(const SurfaceMesh& m) {
  std::vector<std::set<int>> nb(m.vertices.size());
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      nb[t[k]].insert(t[(k + 1) % 3]);
      nb[t[k]].insert(t[(k + 2) % 3]);
    }
  std::vector<std::vector<int>> out(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) out[i].assign(nb[i].begin(), nb[i].end());
  return out;
}

// Orthonormal tangent pair for a unit normal.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& n) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = (seed - seed.dot(n) * n).normalized();
  return {t1, n.cross(t1)};
}

std::vector<QuadricFit> fit_quadrics(const SurfaceMesh& m, const std::vector<Vec3>& normals, unsigned threads) {
  const auto nb = vertex_neighbors(m);
  std::vector<QuadricFit> out(m.vertices.size());
  parallel_for(m.vertices.size(), threads, [&](std::size_t i) {
    std::set<int> ring(nb[i].begin(), nb[i].end());
    for (int j : nb[i]) ring.insert(nb[j].begin(), nb[j].end());
    ring.erase(static_cast<int>(i));
    const Vec3& n = normals[i];
    const auto [t1, t2] = tangent_frame(n);
    Eigen::MatrixXd X(ring.size(), 5);
    Eigen::VectorXd z(ring.size());
    int row = 0;
    for (int j : ring) {
      const Vec3 d = m.vertices[j] - m.vertices[i];
      const double x = d.dot(t1), y = d.dot(t2);
      X.row(row) << x * x, x * y, y * y, x, y;
      z[row] = d.dot(n);
      ++row;
    }
    const Eigen::VectorXd c = X.colPivHouseholderQr().solve(z);
    // Shape operator I^{-1} II of the height graph at the origin; the sign
    // makes curvature positive where the surface bends away from n.
    Eigen::Matrix2d hess;
    hess << 2 * c[0], c[1], c[1], 2 * c[2];
    const Eigen::Vector2d grad(c[3], c[4]);
    const Eigen::Matrix2d first = Eigen::Matrix2d::Identity() + grad * grad.transpose();
    const Eigen::Matrix2d second = -hess / std::sqrt(1 + grad.squaredNorm());
    Eigen::EigenSolver<Eigen::Matrix2d> es(first.inverse() * second);
    Eigen::Vector2d vals = es.eigenvalues().real();
    Eigen::Matrix2d vecs = es.eigenvectors().real();
    int hi = vals[0] >= vals[1] ? 0 : 1;
    QuadricFit q;
    q.k1 = vals[hi];
    q.k2 = vals[1 - hi];
    Vec3 d1 = vecs(0, hi) * t1 + vecs(1, hi) * t2;
    d1 = (d1 - d1.dot(n) * n).normalized();
    q.dir1 = d1;
    q.dir2 = n.cross(d1);
    out[i] = q;
  });
  return out;
}

std::vector<Vec3> angle_weighted_normals(const SurfaceMesh& m) {
  std::vector<Vec3> acc(m.vertices.size(), Vec3::Zero());
  for (const auto& t : m.triangles) {
    const Vec3 fn = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]).normalized();
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
      const Vec3 v = m.vertices[t[(k + 2) % 3]] - m.vertices[t[k]];
      acc[t[k]] += std::atan2(u.cross(v).norm(), u.dot(v)) * fn;
    }
  }
  for (auto& n : acc) n.normalize();
  return acc;
}

}  // namespace

SurfaceMesh curvature_fields(SurfaceMesh m, unsigned threads) {
  m.validate();
  m = oriented_outward(std::move(m));
  const std::size_t nv = m.vertices.size();
  std::vector<double> angle_sum(nv, 0.0), area(nv, 0.0);
  std::vector<Vec3> hn(nv, Vec3::Zero());
  for (const auto& t : m.triangles) {
    const Vec3* p[3] = {&m.vertices[t[0]], &m.vertices[t[1]], &m.vertices[t[2]]};
    double ang[3], cots[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = *p[(k + 1) % 3] - *p[k];
      const Vec3 v = *p[(k + 2) % 3] - *p[k];
      ang[k] = std::atan2(u.cross(v).norm(), u.dot(v));
      cots[k] = cot(u, v);
    }
    const double tri_area = 0.5 * (*p[1] - *p[0]).cross(*p[2] - *p[0]).norm();
    const bool obtuse = ang[0] > kPi / 2 || ang[1] > kPi / 2 || ang[2] > kPi / 2;
    for (int k = 0; k < 3; ++k) {
      const int i = t[k], j = t[(k + 1) % 3], l = t[(k + 2) % 3];
      angle_sum[i] += ang[k];
      // Edge (i, j) is opposite corner l.
      const double c = cots[(k + 2) % 3];
      hn[i] += c * (m.vertices[i] - m.vertices[j]);
      hn[j] += c * (m.vertices[j] - m.vertices[i]);
      (void)l;
      // Mixed Voronoi area.
      if (!obtuse) {
        const double e1 = (*p[(k + 1) % 3] - *p[k]).squaredNorm();  // opposite corner k+2
        const double e2 = (*p[(k + 2) % 3] - *p[k]).squaredNorm();  // opposite corner k+1
        area[i] += (e1 * cots[(k + 2) % 3] + e2 * cots[(k + 1) % 3]) / 8.0;
      } else {
        area[i] += ang[k] > kPi / 2 ? tri_area / 2 : tri_area / 4;
      }
    }
  }
  m.normal = angle_weighted_normals(m);
  m.area = area;
  m.K.assign(nv, 0.0);
  m.H.assign(nv, 0.0);
  m.A2.assign(nv, 0.0);
  m.k1.assign(nv, 0.0);
  m.k2.assign(nv, 0.0);
  for (std::size_t i = 0; i < nv; ++i) {
    m.K[i] = (2 * kPi - angle_sum[i]) / area[i];
    m.H[i] = (hn[i] / (2 * area[i])).dot(m.normal[i]);
    m.A2[i] = m.H[i] * m.H[i] - 2 * m.K[i];
    const double disc = std::sqrt(std::max(0.25 * m.H[i] * m.H[i] - m.K[i], 0.0));
    m.k1[i] = 0.5 * m.H[i] + disc;
    m.k2[i] = 0.5 * m.H[i] - disc;
  }
  const auto fits = fit_quadrics(m, m.normal, threads);
  m.dir1.resize(nv);
  m.dir2.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    m.dir1[i] = fits[i].dir1;
    m.dir2[i] = fits[i].dir2;
  }
  return m;
}

std::vector<QuadricFit> quadric_fit(const SurfaceMesh& m) {
  const SurfaceMesh o = oriented_outward(m);
  return fit_quadrics(o, m.normal.size() == m.vertices.size() ? m.normal : angle_weighted_normals(o), 1);
}

std::vector<double> anisotropic_mean_curvature(SurfaceMesh& m, const SurfaceTension& f) {
  if (!f.has_hessian()) throw Error("surface tension '" + f.name() + "' has no second derivative");
  if (m.H.size() != m.vertices.size()) throw Error("curvature fields have not been computed");
  m.Hf.resize(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const Vec n = m.normal[i];
    const Eigen::MatrixXd D = f.hessian(n);
    const Vec d1 = m.dir1[i], d2 = m.dir2[i];
    m.Hf[i] = m.k1[i] * d1.dot(D * d1) + m.k2[i] * d2.dot(D * d2);
  }
  return m.Hf;
}

double multiplier_mu(const SurfaceMesh& m, const SurfaceTension& f, const RadialPotential& g) {
  std::vector<double> surf, flux, vol;
  for (const auto& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    const Vec3 cr = (b - a).cross(c - a);
    const double A = 0.5 * cr.norm();
    if (A == 0) continue;
    const Vec3 n = cr.normalized();
    const double support = a.dot(n);  // <x, nu> is constant on the face
    surf.push_back(f(Vec(n)) * A);
    if (!g.is_zero()) {
      // Edge-midpoint rule, exact for quadratic integrands.
      const double gm = (g(Vec(Vec3(0.5 * (a + b)))) + g(Vec(Vec3(0.5 * (b + c)))) + g(Vec(Vec3(0.5 * (c + a))))) / 3;
      flux.push_back(gm * support * A);
    }
    vol.push_back(support * A / 3.0);
  }
  double volume = pairwise_sum(vol);
  double sign = volume < 0 ? -1.0 : 1.0;
  volume *= sign;
  if (!(volume > 1e-300)) throw Error("mesh encloses zero volume");
  return (2.0 * pairwise_sum(surf) + sign * pairwise_sum(flux)) / (3.0 * volume);
}

double total_gauss_curvature(const SurfaceMesh& m) {
  std::vector<double> terms(m.K.size());
  for (std::size_t i = 0; i < m.K.size(); ++i) terms[i] = m.K[i] * m.area[i];
  return pairwise_sum(terms);
}

double q_coefficient(double eps, double alpha) {
  const double a2 = alpha * alpha;
  return eps / (2 * (1 + eps)) * (-4 - a2 * eps - 2 * a2 - 6 * alpha - 2 * alpha * eps);
}

double q_coefficient_expanded(double eps, double alpha) {
  const double a2 = alpha * alpha;
  const double first = a2 + 3 * alpha + 2 - a2 * eps * eps / (2 * (1 + eps)) + 2 * a2 * eps - (a2 - alpha) * (1 + eps);
  const double second = -4 * alpha - 2 / (1 + eps) + 2 * alpha * eps / (1 + eps);
  return -first - second;
}

double q_minus_one(double eps) { return eps * eps / (2 * (1 + eps)); }

FieldSummary summarize(const std::vector<double>& values) {
  FieldSummary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = pairwise_sum(values) / static_cast<double>(values.size());
  return s;
}

std::vector<double> surface_gradient_norm(const SurfaceMesh& m, const std::vector<double>& values) {
  std::vector<Vec3> acc(m.vertices.size(), Vec3::Zero());
  std::vector<double> wsum(m.vertices.size(), 0.0);
  for (const auto& t : m.triangles) {
    const Vec3& p0 = m.vertices[t[0]];
    const Vec3& p1 = m.vertices[t[1]];
    const Vec3& p2 = m.vertices[t[2]];
    const Vec3 cr = (p1 - p0).cross(p2 - p0);
    const double A2 = cr.norm();
    if (A2 == 0) continue;
    const Vec3 n = cr / A2;
    // Gradient of the hat function at corner k is n x (opposite edge) / (2 area).
    const Vec3 grad = (values[t[0]] * n.cross(p2 - p1) + values[t[1]] * n.cross(p0 - p2) +
                       values[t[2]] * n.cross(p1 - p0)) /
                      A2;
    for (int k = 0; k < 3; ++k) {
      acc[t[k]] += 0.5 * A2 * grad;
      wsum[t[k]] += 0.5 * A2;
    }
  }
  std::vector<double> out(m.vertices.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (acc[i] / wsum[i]).norm();
  return out;
}

CurvatureCertificate curvature_certificate(const SurfaceMesh& m, const RadialPotential& g, double alpha) {
  if (!(alpha < 0)) throw Error("certificate exponent alpha must be negative");
  if (m.H.size() != m.vertices.size()) throw Error("curvature fields have not been computed");
  for (double h : m.H)
    if (!(h > 0)) throw Error("H^alpha undefined: mean curvature is not positive everywhere");
  const std::size_t nv = m.vertices.size();
  CurvatureCertificate c;
  c.alpha = alpha;
  std::vector<double> gv(nv);
  for (std::size_t i = 0; i < nv; ++i) gv[i] = g(Vec(m.vertices[i]));
  c.gradient_norm = surface_gradient_norm(m, gv);
  c.omega.resize(nv);
  c.epsilon.resize(nv);
  c.v.resize(nv);
  c.q.resize(nv);
  std::size_t tlog = 0, sq = 0;
  for (std::size_t i = 0; i < nv; ++i) {
    const double H = m.H[i];
    c.omega[i] = m.A2[i] / (H * H);
    c.epsilon[i] = c.omega[i] - 1.0;
    c.v[i] = std::pow(H, alpha) * (H * H - m.A2[i]);
    c.q[i] = q_coefficient(c.epsilon[i], alpha);
    const double k2sum = m.k1[i] * m.k1[i] + m.k2[i] * m.k2[i];
    if (k2sum > 0) c.remark_ratio_max = std::max(c.remark_ratio_max, std::abs(2 * m.k1[i] * m.k2[i]) / k2sum);
    c.identity_residual_max = std::max(c.identity_residual_max, std::abs(2 * m.K[i] - (H * H - m.A2[i])));
    const double grad2 = c.gradient_norm[i] * c.gradient_norm[i];
    if (H < 1 && H * std::log(1 / H) <= grad2) ++tlog;
    if (std::sqrt(H) <= grad2) ++sq;
  }
  const double eps_mean = summarize(c.epsilon).mean;
  c.q_value = q_coefficient(eps_mean, alpha);
  c.q_minus_one_value = q_minus_one(eps_mean);
  c.sigma_tlog_fraction = static_cast<double>(tlog) / nv;
  c.sigma_sqrt_fraction = static_cast<double>(sq) / nv;
  c.tolerance = m.max_edge_length();
  c.convex = summarize(c.v).min >= -c.tolerance;
  return c;
}

}  // namespace almlab
