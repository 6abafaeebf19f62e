#pragma once

#include <vector>

#include "almlab/energy.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

struct SymmetrizationPlan {
  std::vector<Vec> directions;  // unit vectors, cycled
  int max_iterations = 200;
  double stop_asymmetry = 0.02;

  void validate() const;

  // Cyclic quasi-uniform lattice directions (eight in the plane, thirteen in
  // space), optionally followed by `random_extra` random lattice directions
  // drawn with `seed`. Lattice directions keep grid symmetrization exact.
  static SymmetrizationPlan standard(int dim, int max_iterations = 200, double stop_asymmetry = 0.02,
                                     int random_extra = 0, unsigned seed = 0);
};

// Steiner symmetrization in the hyperplane through the origin with normal w.
// Polygons (and planar radial profiles, after polygonization) are handled
// exactly by slab decomposition; grids recentre the occupied-cell count of
// every lattice line parallel to w, which needs w parallel to a small
// integer vector. Odd half-cell placements resolve toward -w.
ShapeSet steiner_symmetrize(const ShapeSet& s, const Vec& w);

struct DescentRecord {
  int iteration = 0;  // 0 is the input set
  EnergyBreakdown energy;
  double asymmetry = 0.0;  // |S Δ B_a| / m against the centred ball of equal mass
  double mass = 0.0;
};

// Iterated symmetrization along the plan's directions. Stops after
// max_iterations steps or once the asymmetry drops below stop_asymmetry
// (checked after every step).
std::vector<DescentRecord> symmetrization_descent(const ShapeSet& s, const SymmetrizationPlan& plan,
                                                  const SurfaceTension& f, const RadialPotential& g);

// Primitive integer vector parallel to w with entries up to `max_entry`;
// throws when none matches to 1e-9.
std::vector<int> lattice_direction(const Vec& w, int max_entry = 16);

}  // namespace almlab
