#pragma once

#include <string>

#include "almlab/energy.hpp"
#include "almlab/shapes.hpp"

namespace almlab {

// Shape files are JSON objects {encoding, dimension, payload}:
//   polygon, dimension 1: payload {"intervals": [[lo, hi], ...]}
//   polygon, dimension 2: payload {"loops": [[[x, y], ...], ...]}
//   radial:  payload {"center": [...], "radii": [...]} plus "n_theta" and
//            "n_phi" in dimension 3
//   grid:    payload {"cell": h, "origin": [...], "size": [...]} plus either
//            "cells": [0/1, ...] (x fastest) or "sidecar": "file.grd"
// The sidecar layout is little-endian: the bytes "GRD1", uint32 ndim,
// uint32 size per axis, then one uint8 per cell with x fastest. Relative
// sidecar paths resolve against the JSON file's directory.
ShapeSet read_shape(const std::string& path);
// Grids with more than `inline_limit` cells go to a sidecar next to `path`.
void write_shape(const ShapeSet& s, const std::string& path, std::size_t inline_limit = 4096);
std::string shape_to_json(const ShapeSet& s);
ShapeSet shape_from_json(const std::string& text);

void write_grid_sidecar(const Grid& g, const std::string& path);
// Reads the cell array and checks it against the expected frame.
std::vector<std::uint8_t> read_grid_sidecar(const std::string& path, const GridFrame& frame);

// Catalogue specs "name" or "name:p1,p2,...":
//   tensions: isotropic, p-norm:p (p may be inf), axial:c,
//             crystalline:n1x,n1y[,n1z],c1;n2x,...
//   potentials: zero, linear, quadratic, power:alpha[,coeff],
//               table:t0,h0;t1,h1;...
SurfaceTension tension_from_spec(const std::string& spec, int dim = 2);
RadialPotential potential_from_spec(const std::string& spec);

}  // namespace almlab
