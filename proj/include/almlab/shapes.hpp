#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace almlab {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class Encoding { polygon, grid, radial };

std::string to_string(Encoding e);

// One-dimensional polygon encoding: a finite union of intervals (lo, hi).
struct IntervalSet {
  std::vector<std::pair<double, double>> intervals;
};

// Planar polygon encoding. Counter-clockwise loops bound material and
// clockwise loops are holes, so the signed shoelace sum is the area.
struct PolygonLoops {
  std::vector<std::vector<Vec2>> loops;
};

// Placement of an axis-aligned lattice: cell (i, j, k) covers
// origin + [i, i+1) x [j, j+1) x [k, k+1) scaled by `cell`.
struct GridFrame {
  int dim = 2;
  double cell = 1.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<int, 3> size{1, 1, 1};

  std::size_t cell_count() const {
    return static_cast<std::size_t>(size[0]) * size[1] * size[2];
  }
  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * size[1] + j) * size[0] + i;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Vec center(std::size_t idx) const;
  double cell_volume() const;

  // Smallest frame with the given cell size whose cells cover the box
  // [-half_width, half_width]^dim and are symmetric about the origin.
  static GridFrame centered(int dim, double cell, double half_width);
};

// Indicator array over a frame; cells stores 0/1, x index fastest.
struct Grid {
  GridFrame frame;
  std::vector<std::uint8_t> cells;

  std::size_t occupied() const;
};

// Star-shaped set {center + r sigma : 0 <= r < radius(sigma)}.
//
// In the plane the radii are samples at theta_j = 2 pi j / N and the profile
// between samples is their trigonometric interpolant. In R^3 the radii live on
// a Gauss-Legendre grid in cos(theta) times a uniform grid in phi, stored with
// phi fastest; between nodes the profile is interpolated bilinearly.
class RadialProfile {
 public:
  // Planar profile.
  RadialProfile(Vec center, std::vector<double> radii);
  // Spatial profile on an n_theta x n_phi direction grid.
  RadialProfile(Vec center, int n_theta, int n_phi, std::vector<double> radii);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  const std::vector<double>& radii() const { return radii_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }

  // Planar interpolant and its derivative at an arbitrary angle.
  double radius_at(double theta) const;
  double derivative_at(double theta) const;
  // Interpolant resampled at 2 pi j / m (planar only).
  std::vector<double> resample(int m) const;
  // Exact derivative of the interpolant at the sample angles (planar only).
  std::vector<double> sample_derivatives() const;
  // Radius in a given direction (any dimension; fast table lookup).
  double radius_toward(const Vec& direction) const;
  // Dense planar resample backing radius_toward, at 2 pi j / size.
  const std::vector<double>& dense_samples() const { return table_; }

  // Spatial grid nodes.
  double theta_node(int i) const { return thetas_[i]; }
  double theta_weight(int i) const { return mu_weights_[i]; }
  double phi_node(int j) const;

  RadialProfile with_center(Vec center) const;
  RadialProfile scaled(double factor) const;

 private:
  void build_planar();
  void build_spatial();

  Vec center_;
  std::vector<double> radii_;
  int n_theta_ = 0;
  int n_phi_ = 0;
  // Planar: half spectrum of the samples (real, imaginary parts).
  std::vector<double> spec_re_, spec_im_;
  std::vector<double> table_;  // dense resample used by radius_toward
  // Spatial: theta nodes and Gauss weights in mu = cos(theta).
  std::vector<double> thetas_, mu_weights_;
};

// A finite-perimeter set in one of three encodings. Values are immutable;
// constructors validate the encoding invariants and throw almlab::Error.
class ShapeSet {
 public:
  using Rep = std::variant<IntervalSet, PolygonLoops, Grid, RadialProfile>;

  explicit ShapeSet(IntervalSet s);
  explicit ShapeSet(PolygonLoops p);
  explicit ShapeSet(Grid g);
  explicit ShapeSet(RadialProfile r);

  Encoding encoding() const;
  int dimension() const { return dim_; }
  // Radius of a ball about the origin containing the set.
  double bounding_radius() const { return bounding_radius_; }
  const Rep& rep() const { return rep_; }

  const IntervalSet* intervals() const { return std::get_if<IntervalSet>(&rep_); }
  const PolygonLoops* polygon() const { return std::get_if<PolygonLoops>(&rep_); }
  const Grid* grid() const { return std::get_if<Grid>(&rep_); }
  const RadialProfile* radial() const { return std::get_if<RadialProfile>(&rep_); }

 private:
  void finish();

  Rep rep_;
  int dim_ = 0;
  double bounding_radius_ = 0.0;
};

struct Ball {
  Vec center;
  double radius = 1.0;

  int dim() const { return static_cast<int>(center.size()); }
  double mass() const;
  // Ball of the given mass centred at `center` (origin when empty).
  static Ball with_mass(int dim, double mass, Vec center = Vec());
};

struct BoundarySample {
  Vec point;
  Vec normal;  // outward unit normal
  double weight = 0.0;
};

double mass(const ShapeSet& s);

// |S Δ T|. Polygons are clipped exactly, grids on one lattice are XORed cell
// by cell, and mixed encodings are rasterised onto the finer lattice.
double symmetric_difference_mass(const ShapeSet& s, const ShapeSet& t);
double symmetric_difference_mass(const ShapeSet& s, const Ball& b);
double intersection_mass(const ShapeSet& s, const Ball& b);

// Reduced-boundary quadrature: weights sum to the perimeter estimate.
std::vector<BoundarySample> boundary_samples(const ShapeSet& s);
double perimeter(const ShapeSet& s);

bool contains(const ShapeSet& s, const Vec& x);

ShapeSet translate(const ShapeSet& s, const Vec& shift);
ShapeSet scale(const ShapeSet& s, double factor);

// Cell-centre rasterisation onto an arbitrary frame.
Grid rasterize(const ShapeSet& s, const GridFrame& frame);

// Cell size with cell * perimeter < 1e-3 * mass, capped to keep grids small.
double default_cell_size(const ShapeSet& s);

// Planar polygon approximating the set (radial profiles are resampled with
// at least `min_vertices` vertices).
PolygonLoops polygonize(const ShapeSet& s, int min_vertices = 4096);

// Integral of phi(|x|) over S ∩ {inner <= |x| <= outer}. Every radial
// quantity (potential energy, gaps, moments, ring masses) goes through here.
double integrate_radial(const ShapeSet& s, const std::function<double(double)>& phi,
                        double inner = 0.0, double outer = 1e300);

// Convex single-loop polygon test (used where convexity is a precondition).
bool is_convex_polygon(const ShapeSet& s, double tol = 1e-12);

}  // namespace almlab
