#pragma once

// Constructors for the shapes used by experiments and tests.

#include <vector>

#include "almlab/shapes.hpp"

namespace almlab {

ShapeSet interval(double lo, double hi);

ShapeSet rectangle(double width, double height, Vec2 center = Vec2::Zero());
ShapeSet unit_square(Vec2 center = Vec2::Zero());
// Unit square [0,1]^2 with its top-right quarter removed.
ShapeSet l_shape();
ShapeSet regular_polygon(int sides, double circumradius, Vec2 center = Vec2::Zero());

// Radial profiles sampled about `center`.
ShapeSet disk(double radius, int samples = 512, Vec2 center = Vec2::Zero());
ShapeSet ellipse(double semi_x, double semi_y, int samples = 512);
// Ball of radius a centred at z, encoded as a profile about the origin
// (requires |z| < a so the origin stays inside).
ShapeSet offset_disk(double radius, const Vec2& z, int samples = 1024);
ShapeSet sphere(double radius, int n_theta = 32, int n_phi = 64, Vec center = Vec());
ShapeSet offset_ball3(double radius, const Vec& z, int n_theta = 48, int n_phi = 96);
// r(theta) = base (1 + sum amp_k cos(k theta + phase_k)), k = 1, 2, ...
ShapeSet perturbed_disk(double base, const std::vector<double>& amp, const std::vector<double>& phase,
                        int samples = 1024);

// Cell-centre rasterisation of a centred ball on a lattice symmetric about the origin.
ShapeSet grid_ball(int dim, double radius, double cell);
ShapeSet grid_of(const ShapeSet& s, double cell, double margin = 0.0);

}  // namespace almlab
