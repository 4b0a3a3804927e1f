#pragma once

#include "metdisc/radial_measure.hpp"
#include "metdisc/report.hpp"
#include "metdisc/spaces.hpp"
#include "metdisc/stats.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace metdisc {

enum class MetricKind { base, chordal, sdm_xi, sdm_r };

// Which metric a distance sum or mean refers to.
struct MetricSelector {
  MetricKind kind = MetricKind::base;
  std::shared_ptr<const RadialMeasure> xi;  // sdm_xi
  double r = 0.0;                           // sdm_r

  static MetricSelector base() { return {}; }
  static MetricSelector chordal() { return {MetricKind::chordal, nullptr, 0.0}; }
  static MetricSelector sdm(std::shared_ptr<const RadialMeasure> xi) { return {MetricKind::sdm_xi, std::move(xi), 0.0}; }
  static MetricSelector sdm_radius(double r) { return {MetricKind::sdm_r, nullptr, r}; }

  std::string name() const;
};

// Whether metric_value can evaluate the selector without Monte Carlo.
bool has_deterministic_metric(const SpaceDescriptor& space, const MetricSelector& metric);

// Metric value for one pair: closed form, exact enumeration or radial
// quadrature (sdm on spheres). Throws ConfigError when only Monte Carlo applies.
double metric_value(const SpaceDescriptor& space, const MetricSelector& metric, const Point& x, const Point& y);

// Sum over all ordered pairs; the diagonal contributes zero.
double pair_sum(const PointSet& points, const MetricSelector& metric, const SpaceDescriptor& space);

// pair_sum with a Monte Carlo fallback for sdm metrics on spaces without
// closed-form balls: one common sample of budget points y is shared by all pairs.
MeanEstimate pair_sum_estimate(const PointSet& points, const MetricSelector& metric, const SpaceDescriptor& space,
                               std::size_t budget = 100000, std::uint64_t seed = 0);

struct MeanOptions {
  std::size_t budget = 1000000;
  std::uint64_t seed = 0;
  // Forces a method; only monte_carlo is always available.
  std::optional<Method> force;
};

// <rho>: closed form > exact enumeration > quadrature > Monte Carlo.
MeanEstimate mean_metric(const SpaceDescriptor& space, const MetricSelector& metric, const MeanOptions& opts = {});

// theta^Delta_r(y1, y2): exact on finite spaces, cap geometry on spheres,
// interval geometry on the uniform unit interval, Monte Carlo otherwise.
MeanEstimate sdm_r(const SpaceDescriptor& space, const Point& y1, const Point& y2, double r,
                   std::size_t budget = 100000, std::uint64_t seed = 0);

// theta^Delta(xi, y1, y2) = 1/2 int |sigma(theta(y1, y)) - sigma(theta(y2, y))| dmu(y):
// exact on finite spaces, Monte Carlo over y otherwise.
MeanEstimate sdm_xi(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                    std::size_t budget = 100000, std::uint64_t seed = 0);

// theta^Delta(xi, y1, y2) = int theta^Delta_r(y1, y2) dxi(r): atom sums, or
// adaptive quadrature in r over closed-form theta^Delta_r (abs tol `tol`).
// Falls back to a common Monte Carlo sample of y when balls have no closed form.
MeanEstimate sdm_xi_direct(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                           double tol = 1e-10, std::size_t budget = 100000, std::uint64_t seed = 0);

// <theta^Delta_r> = int (v_r(y) - v_r(y)^2) dmu(y).
MeanEstimate mean_sdm_r(const SpaceDescriptor& space, double r, std::size_t budget = 100000,
                        std::uint64_t seed = 0);

// <theta^Delta(xi)> = int <theta^Delta_r> dxi(r).
MeanEstimate mean_sdm_xi(const SpaceDescriptor& space, const RadialMeasure& xi, std::size_t budget = 100000,
                         std::uint64_t seed = 0, double tol = 1e-10);

// theta^Delta(xi, y1, y2) <= c0(xi) theta(y1, y2) / 2 on n_pairs random pairs
// (every pair on finite spaces).
VerificationReport check_lipschitz_comparison(const SpaceDescriptor& space, const RadialMeasure& xi,
                                              std::size_t n_pairs, std::uint64_t seed,
                                              std::size_t budget = 20000);

// theta^Delta_r(y1, y2) when a closed form exists (finite, sphere, uniform
// unit interval).
std::optional<double> closed_sdm_r(const SpaceDescriptor& space, const Point& y1, const Point& y2, double r);

// Radii where the closed-form theta^Delta_r(y1, y2) is not smooth.
std::vector<double> sdm_breakpoints(const SpaceDescriptor& space, const Point& y1, const Point& y2);

}  // namespace metdisc
