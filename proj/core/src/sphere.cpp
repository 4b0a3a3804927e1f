#include "metdisc/sphere.hpp"

#include "metdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace metdisc::sphere {
namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Lens area on S^2 for rg <= pi/2, normalised by 4 pi. Gauss-Bonnet on the
// lens: area = 2 (pi - gamma) - 4 phi cos(rg), with phi the half-angle of each
// boundary arc seen from its centre and gamma the angle between the circles.
double lens_s2(double rg, double s) {
  if (s >= 2.0 * rg) return 0.0;
  if (s <= 0.0) return cap_volume(2, rg);
  const double sr = std::sin(rg), cr = std::cos(rg);
  const double cos_phi = clamp_unit(cr * std::tan(0.5 * s) / sr);
  const double phi = std::acos(cos_phi);
  const double cos_gamma = clamp_unit((std::cos(s) - cr * cr) / (sr * sr));
  const double gamma = std::acos(cos_gamma);
  const double area = 2.0 * (kPi - gamma) - 4.0 * phi * cr;
  return std::clamp(area / (4.0 * kPi), 0.0, cap_volume(2, rg));
}

}  // namespace

double angle(std::span<const double> x, std::span<const double> y) {
  if (x.size() == 2 && y.size() == 2) {
    const double cross = x[0] * y[1] - x[1] * y[0];
    const double dot = x[0] * y[0] + x[1] * y[1];
    return std::atan2(std::abs(cross), dot);
  }
  if (x.size() == 3 && y.size() == 3) {
    const double c0 = x[1] * y[2] - x[2] * y[1];
    const double c1 = x[2] * y[0] - x[0] * y[2];
    const double c2 = x[0] * y[1] - x[1] * y[0];
    const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    return std::atan2(std::sqrt(c0 * c0 + c1 * c1 + c2 * c2), dot);
  }
  throw DomainError("sphere::angle: points must both lie in R^2 or R^3");
}

double chord(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

double geodesic_radius(SphereMetric metric, double r) {
  if (r <= 0.0) return 0.0;
  if (metric == SphereMetric::geodesic) return std::min(r, kPi);
  return r >= 2.0 ? kPi : 2.0 * std::asin(0.5 * r);
}

double cap_volume(int d, double rg) {
  if (rg <= 0.0) return 0.0;
  if (rg >= kPi) return 1.0;
  if (d == 1) return rg / kPi;
  if (d == 2) return 0.5 * (1.0 - std::cos(rg));
  throw ConfigError("cap_volume: only S^1 and S^2 are supported");
}

double cap_intersection(int d, double rg, double s) {
  s = std::clamp(s, 0.0, kPi);
  if (rg <= 0.0) return 0.0;
  if (rg >= kPi) return 1.0;
  if (d == 1) {
    const double overlap = std::max(0.0, 2.0 * rg - s) + std::max(0.0, 2.0 * rg + s - 2.0 * kPi);
    return overlap / (2.0 * kPi);
  }
  if (d == 2) {
    if (rg <= 0.5 * kPi) return lens_s2(rg, s);
    // Complements are open caps of radius pi - rg around the antipodes, which
    // are still s apart.
    return 2.0 * cap_volume(2, rg) - 1.0 + lens_s2(kPi - rg, s);
  }
  throw ConfigError("cap_intersection: only S^1 and S^2 are supported");
}

}  // namespace metdisc::sphere
