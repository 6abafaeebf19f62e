#pragma once

// Boost.Geometry adapters for the planar polygon encoding.

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "almlab/shapes.hpp"

namespace almlab::detail {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false, false>;  // CCW, open rings
using BMulti = bg::model::multi_polygon<BPolygon>;

double signed_area(const std::vector<Vec2>& loop);

// Groups counter-clockwise loops with the clockwise holes they contain.
BMulti to_boost(const PolygonLoops& p);
PolygonLoops from_boost(const BMulti& m);

bool point_in_loops(const PolygonLoops& p, const Vec2& x);

// Area of the polygon intersected with a disc; exact up to rounding.
double disc_intersection_area(const PolygonLoops& p, const Vec2& center, double radius);

}  // namespace almlab::detail
