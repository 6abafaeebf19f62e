#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "almlab/energy.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

// Closed triangulated surface in R^3. Mean curvature uses the sum convention
// H = k1 + k2, so a sphere of radius a has H = 2 / a.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // Per-vertex fields filled by curvature_fields.
  std::vector<double> H, A2, K, area;
  std::vector<double> k1, k2;        // principal curvatures from H and K (k1 >= k2)
  std::vector<Vec3> normal;          // outward unit vertex normal
  std::vector<Vec3> dir1, dir2;      // principal directions from the quadric fit
  std::vector<double> Hf;            // filled by anisotropic_mean_curvature

  // Throws Error listing offending edges unless every edge is shared by
  // exactly two consistently oriented triangles.
  void validate() const;
  int euler_characteristic() const;
  double enclosed_volume() const;  // divergence theorem; negative for inward orientation
  double max_edge_length() const;
  double surface_area() const;
};

// Reverses triangle orientation when the enclosed volume is negative.
SurfaceMesh oriented_outward(SurfaceMesh m);

// K by angle defect over mixed Voronoi areas, H from the cotangent
// mean-curvature normal, |A|^2 = H^2 - 2K, principal directions from a
// quadric fit over the two-ring. Validates and orients the mesh first.
SurfaceMesh curvature_fields(SurfaceMesh m, unsigned threads = 1);

struct QuadricFit {
  double k1 = 0.0, k2 = 0.0;  // fitted principal curvatures, k1 >= k2
  Vec3 dir1, dir2;
};
// Independent estimator: least-squares height quadric over the two-ring in
// the tangent frame of the vertex normal.
std::vector<QuadricFit> quadric_fit(const SurfaceMesh& m);

// H_f = trace(D^2 f(nu) A) in the principal frame, A = diag(k1, k2).
// Needs curvature fields and a tension with a Hessian.
std::vector<double> anisotropic_mean_curvature(SurfaceMesh& m, const SurfaceTension& f);

// mu = [2 F + int g <x, nu>] / (3 |E|) with F and the boundary integral
// evaluated over the mesh triangles.
double multiplier_mu(const SurfaceMesh& m, const SurfaceTension& f, const RadialPotential& g);

// Sum of K times area: 2 pi chi for angle-defect curvature.
double total_gauss_curvature(const SurfaceMesh& m);

// Coefficient of |grad H|^2 in the maximum-principle estimate.
double q_coefficient(double eps, double alpha);
// The same coefficient in its unsimplified two-bracket form.
double q_coefficient_expanded(double eps, double alpha);
// Closed form at alpha = -1: eps^2 / (2 (1 + eps)).
double q_minus_one(double eps);

struct FieldSummary {
  double min = 0.0, max = 0.0, mean = 0.0;
};
FieldSummary summarize(const std::vector<double>& values);

struct CurvatureCertificate {
  double alpha = -1.0;
  std::vector<double> omega;          // |A|^2 / H^2
  std::vector<double> epsilon;        // omega - 1
  std::vector<double> v;              // H^alpha (H^2 - |A|^2)
  std::vector<double> gradient_norm;  // |grad_Sigma g|
  std::vector<double> q;              // q(epsilon, alpha) per vertex
  double q_value = 0.0;               // q at the mean epsilon
  double q_minus_one_value = 0.0;     // eps^2 / (2 (1 + eps)) at the mean epsilon
  double tolerance = 0.0;             // C * max edge length, C = 1
  double remark_ratio_max = 0.0;      // max |2K| / (k1^2 + k2^2)
  double identity_residual_max = 0.0; // max |2K - (H^2 - |A|^2)|
  // Fractions of vertices with sigma(H) <= |grad g|^2 for the two candidate sigmas.
  double sigma_tlog_fraction = 0.0;   // sigma(t) = t log(1/t), t < 1
  double sigma_sqrt_fraction = 0.0;   // sigma(t) = sqrt(t)
  bool convex = false;                // min v >= -tolerance
};

// Requires alpha < 0 and H > 0 everywhere ("H^alpha undefined" otherwise).
CurvatureCertificate curvature_certificate(const SurfaceMesh& m, const RadialPotential& g, double alpha);

// Surface gradient of the vertex values of g, from per-triangle linear
// interpolation averaged onto vertices with area weights.
std::vector<double> surface_gradient_norm(const SurfaceMesh& m, const std::vector<double>& values);

// Generators.
SurfaceMesh icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());
SurfaceMesh ellipsoid_mesh(double a, double b, double c, int subdivisions);
SurfaceMesh torus_mesh(double R, double r, int n_major, int n_minor);
// Mesh of the boundary of a spatial radial profile through its direction grid.
SurfaceMesh mesh_from_profile(const RadialProfile& p, int subdivisions = 4);

// Mesh IO (OFF text and binary STL).
SurfaceMesh read_mesh(const std::string& path);
SurfaceMesh read_off(const std::string& path);
SurfaceMesh read_stl(const std::string& path);
void write_off(const SurfaceMesh& m, const std::string& path);
void write_stl(const SurfaceMesh& m, const std::string& path);

// Per-vertex CSV: index, x, y, z, H, A2, K, Hf, omega, v.
void write_vertex_csv(const SurfaceMesh& m, const CurvatureCertificate* cert, const std::string& path);

}  // namespace almlab
