#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "almlab/curvature.hpp"
#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

using namespace almlab;

namespace {

struct EllipsoidOracle {
  double a, b, c;
  double S(const Vec3& x) const {
    return x[0] * x[0] / std::pow(a, 4) + x[1] * x[1] / std::pow(b, 4) + x[2] * x[2] / std::pow(c, 4);
  }
  double H(const Vec3& x) const {
    return (a * a + b * b + c * c - x.squaredNorm()) / (std::pow(a * b * c, 2) * std::pow(S(x), 1.5));
  }
  double K(const Vec3& x) const { return 1.0 / (std::pow(a * b * c, 2) * S(x) * S(x)); }
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("almlab_" + name)).string();
}

}  // namespace

TEST(Curvature, SphereFieldsMatchRadius) {
  const auto m = curvature_fields(icosphere(2.0, 4));
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_NEAR(m.H[i], 1.0, 0.01);
    EXPECT_NEAR(m.A2[i], 0.5, 0.005);
    EXPECT_NEAR(m.K[i], 0.25, 0.0025);
  }
}

TEST(Curvature, GaussBonnetOnSphereAndTorus) {
  const auto s = curvature_fields(icosphere(1.3, 3));
  EXPECT_EQ(s.euler_characteristic(), 2);
  EXPECT_NEAR(total_gauss_curvature(s) / (4 * kPi), 1.0, 1e-6);
  const auto t = curvature_fields(torus_mesh(2.0, 0.5, 64, 24));
  EXPECT_EQ(t.euler_characteristic(), 0);
  EXPECT_NEAR(total_gauss_curvature(t), 0.0, 1e-6 * 4 * kPi);
}

TEST(Curvature, InwardOrientationIsCorrected) {
  auto m = icosphere(1.0, 3);
  for (auto& t : m.triangles) std::swap(t[1], t[2]);
  EXPECT_LT(m.enclosed_volume(), 0);
  const auto f = curvature_fields(m);
  EXPECT_GT(f.enclosed_volume(), 0);
  EXPECT_NEAR(summarize(f.H).mean, 2.0, 0.01);
}

TEST(Curvature, EllipsoidAgainstClosedForm) {
  const EllipsoidOracle o{1.5, 1.0, 0.7};
  const auto m = curvature_fields(ellipsoid_mesh(o.a, o.b, o.c, 5));
  std::vector<double> errH;
  double wsum = 0, werrH = 0, werrK = 0;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& x = m.vertices[i];
    errH.push_back(std::abs(m.H[i] / o.H(x) - 1));
    wsum += m.area[i];
    werrH += m.area[i] * errH.back();
    werrK += m.area[i] * std::abs(m.K[i] / o.K(x) - 1);
  }
  std::sort(errH.begin(), errH.end());
  EXPECT_LT(werrH / wsum, 0.02);
  EXPECT_LT(werrK / wsum, 0.02);
  EXPECT_LT(errH[errH.size() * 99 / 100], 0.02);
  // The quadric fit converges pointwise, so it carries the per-vertex check.
  const auto q = quadric_fit(m);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& x = m.vertices[i];
    EXPECT_NEAR((q[i].k1 + q[i].k2) / o.H(x), 1.0, 0.02);
    EXPECT_NEAR(q[i].k1 * q[i].k2 / o.K(x), 1.0, 0.04);
  }
}

TEST(Curvature, QuadricFitAgreesWithMeshOnSphere) {
  const auto m = curvature_fields(icosphere(2.0, 4));
  const auto q = quadric_fit(m);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_NEAR(q[i].k1, 0.5, 0.01);
    EXPECT_NEAR(q[i].k2, 0.5, 0.01);
    EXPECT_NEAR(q[i].dir1.dot(m.normal[i]), 0.0, 1e-12);
    EXPECT_NEAR(q[i].dir1.dot(q[i].dir2), 0.0, 1e-12);
  }
}

TEST(Curvature, PrincipalCurvaturesRespectRemarkBound) {
  const auto m = curvature_fields(ellipsoid_mesh(1.4, 1.0, 0.8, 3));
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_NEAR(m.k1[i] + m.k2[i], m.H[i], 1e-12);
    EXPECT_GE(m.k1[i], m.k2[i]);
    const double s = m.k1[i] * m.k1[i] + m.k2[i] * m.k2[i];
    EXPECT_LE(std::abs(2 * m.k1[i] * m.k2[i]) / s, 1.0 + 1e-12);
    // The discriminant clamp only absorbs discretization noise.
    EXPECT_GT(0.25 * m.H[i] * m.H[i] - m.K[i], -0.01 * m.H[i] * m.H[i]);
  }
}

TEST(Curvature, IsotropicAnisotropicMeanCurvatureIsH) {
  auto m = curvature_fields(ellipsoid_mesh(1.2, 1.0, 0.9, 3));
  const auto hf = anisotropic_mean_curvature(m, SurfaceTension::isotropic());
  for (std::size_t i = 0; i < hf.size(); ++i) EXPECT_NEAR(hf[i], m.H[i], 1e-9 * std::abs(m.H[i]));
}

TEST(Curvature, AxialAnisotropicMeanCurvatureOnSphere) {
  // f = |x| + c x3^2/|x| on a sphere of radius a: H_f = (2 + c (2 - 4 nu3^2)) / a.
  const double a = 1.5, c = 0.3;
  auto m = curvature_fields(icosphere(a, 4));
  anisotropic_mean_curvature(m, SurfaceTension::axial(c));
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const double nu3 = m.vertices[i][2] / a;
    const double expected = (2 + c * (2 - 4 * nu3 * nu3)) / a;
    EXPECT_NEAR(m.Hf[i], expected, 0.01 * expected);
  }
}

TEST(Curvature, AnisotropicNeedsHessianAndFields) {
  auto raw = icosphere(1.0, 1);
  EXPECT_THROW(anisotropic_mean_curvature(raw, SurfaceTension::isotropic()), Error);
  auto m = curvature_fields(raw);
  EXPECT_THROW(anisotropic_mean_curvature(m, SurfaceTension::p_norm(1.0)), Error);
}

TEST(Curvature, MultiplierOnSpheres) {
  EXPECT_NEAR(multiplier_mu(icosphere(1.0, 5), SurfaceTension::isotropic(), RadialPotential::zero()), 2.0, 2e-3);
  for (double a : {0.5, 2.0}) {
    const double mu = multiplier_mu(icosphere(a, 5), SurfaceTension::isotropic(), RadialPotential::quadratic());
    EXPECT_NEAR(mu, 2.0 / a + a * a, 2e-3 * (2.0 / a + a * a)) << "a=" << a;
  }
}

TEST(Curvature, MultiplierRejectsFlatMesh) {
  SurfaceMesh flat;
  flat.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  flat.triangles = {{0, 1, 2}, {1, 3, 2}, {0, 2, 1}, {1, 2, 3}};
  EXPECT_THROW(multiplier_mu(flat, SurfaceTension::isotropic(), RadialPotential::zero()), Error);
}

TEST(Curvature, QCoefficientForms) {
  EXPECT_NEAR(q_coefficient(0.1, -1.0), 0.0045454545454545, 1e-12);
  EXPECT_NEAR(q_minus_one(0.1), 0.01 / 2.2, 1e-15);
  for (double eps = -0.5; eps <= 2.0; eps += 0.125) {
    EXPECT_NEAR(q_coefficient(eps, -1.0), q_minus_one(eps), 1e-12) << eps;
    for (double alpha : {-3.0, -1.0, -0.5, -0.1})
      EXPECT_NEAR(q_coefficient(eps, alpha), q_coefficient_expanded(eps, alpha), 1e-12) << eps << " " << alpha;
  }
}

TEST(Curvature, CertificateOnSphereIsConvex) {
  const auto m = curvature_fields(icosphere(2.0, 3));
  const auto c = curvature_certificate(m, RadialPotential::linear(), -1.0);
  EXPECT_TRUE(c.convex);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_NEAR(c.omega[i], 0.5, 0.01);
    // On a sphere the radial potential is constant along the surface.
    EXPECT_LT(c.gradient_norm[i], 0.02);
  }
  EXPECT_LE(c.remark_ratio_max, 1.0 + 1e-12);
  EXPECT_LT(c.identity_residual_max, 1e-12);
  EXPECT_NEAR(c.q_value, q_minus_one(summarize(c.epsilon).mean), 1e-12);
}

TEST(Curvature, TorusIsNotConvex) {
  const auto m = curvature_fields(torus_mesh(2.0, 0.5, 96, 32));
  EXPECT_GT(summarize(m.H).min, 0.0);
  EXPECT_LT(summarize(m.K).min, 0.0);
  const auto c = curvature_certificate(m, RadialPotential::linear(), -1.0);
  EXPECT_FALSE(c.convex);
}

TEST(Curvature, CertificateInputErrors) {
  const auto m = curvature_fields(icosphere(1.0, 2));
  EXPECT_THROW(curvature_certificate(m, RadialPotential::linear(), 0.0), Error);
  EXPECT_THROW(curvature_certificate(m, RadialPotential::linear(), 0.5), Error);
  auto inverted = m;
  for (auto& h : inverted.H) h = -h;
  try {
    curvature_certificate(inverted, RadialPotential::linear(), -1.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("H^alpha undefined"), std::string::npos);
  }
}

TEST(Curvature, NonManifoldMeshListsEdges) {
  auto m = icosphere(1.0, 1);
  m.triangles.push_back(m.triangles.front());
  try {
    curvature_fields(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("non-manifold"), std::string::npos);
    const auto& t = m.triangles.front();
    const std::string edge = "(" + std::to_string(std::min(t[0], t[1])) + "," + std::to_string(std::max(t[0], t[1])) + ")";
    EXPECT_NE(msg.find(edge), std::string::npos) << msg;
  }
}

TEST(Curvature, OffRoundTrip) {
  const auto m = ellipsoid_mesh(1.3, 1.0, 0.6, 2);
  const auto path = temp_path("roundtrip.off");
  write_off(m, path);
  const auto r = read_mesh(path);
  ASSERT_EQ(r.vertices.size(), m.vertices.size());
  ASSERT_EQ(r.triangles, m.triangles);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(r.vertices[i], m.vertices[i]);
  std::remove(path.c_str());
}

TEST(Curvature, StlRoundTrip) {
  const auto m = icosphere(1.0, 2);
  const auto path = temp_path("roundtrip.stl");
  write_stl(m, path);
  const auto r = read_mesh(path);
  EXPECT_EQ(r.vertices.size(), m.vertices.size());
  EXPECT_EQ(r.triangles.size(), m.triangles.size());
  EXPECT_NEAR(r.enclosed_volume(), m.enclosed_volume(), 1e-6);
  EXPECT_NO_THROW(r.validate());
  std::remove(path.c_str());
}

TEST(Curvature, ReadRejectsUnknownFormat) {
  EXPECT_THROW(read_mesh("surface.obj"), Error);
  EXPECT_THROW(read_mesh("/nonexistent/x.off"), Error);
}

TEST(Curvature, ParallelFieldsMatchSerial) {
  const auto a = curvature_fields(ellipsoid_mesh(1.2, 1.0, 0.8, 3), 1);
  const auto b = curvature_fields(ellipsoid_mesh(1.2, 1.0, 0.8, 3), 4);
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.H[i], b.H[i]);
    EXPECT_EQ(a.dir1[i], b.dir1[i]);
  }
}
