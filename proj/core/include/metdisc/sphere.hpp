#pragma once

#include <span>

namespace metdisc {

enum class SphereMetric { geodesic, chordal };

// Closed-form geometry of the unit spheres S^1 (points in R^2) and S^2 (points
// in R^3) with normalised surface measure. All radii here are geodesic angles.
namespace sphere {

// Great-circle angle in [0, pi], computed as atan2(|x ^ y|, x . y).
double angle(std::span<const double> x, std::span<const double> y);

double chord(std::span<const double> x, std::span<const double> y);

// Converts a radius measured in `metric` into the equivalent geodesic radius,
// clamped to [0, pi].
double geodesic_radius(SphereMetric metric, double r);

// Measure of the closed cap of geodesic radius rg on S^d.
double cap_volume(int d, double rg);

// Measure of the intersection of two closed caps of geodesic radius rg whose
// centres are s apart.
double cap_intersection(int d, double rg, double s);

}  // namespace sphere
}  // namespace metdisc
