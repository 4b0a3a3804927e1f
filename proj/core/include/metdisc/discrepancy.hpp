#pragma once

#include "metdisc/radial_measure.hpp"
#include "metdisc/spaces.hpp"
#include "metdisc/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace metdisc {

struct DiscrepancyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_outer = 0;   // Monte Carlo centres y
  std::size_t n_radial = 0;  // radial quadrature nodes per centre (mean)
  Method method = Method::exact_enumeration;
};

struct DiscOptions {
  std::size_t n_outer = 100000;
  std::uint64_t seed = 0;
  double radial_tol = 1e-8;
  // Inner sample size for ball volumes on spaces without closed-form balls.
  std::size_t n_inner = 256;
};

// #(B_r(center) cap D) - N mu(B_r(center)). Ball volumes without a closed
// form are estimated with a fixed budget of 10^6 points.
double local_disc(const SpaceDescriptor& space, const PointSet& points, const Point& center, double r);

// lambda_r[D] = int Lambda[B_r(y), D]^2 dmu(y).
DiscrepancyEstimate quad_disc_r(const SpaceDescriptor& space, const PointSet& points, double r,
                                const DiscOptions& opts = {});

// lambda[xi, D] = int lambda_r[D] dxi(r). One sample of centres is shared by
// every radius.
DiscrepancyEstimate quad_disc_xi(const SpaceDescriptor& space, const PointSet& points, const RadialMeasure& xi,
                                 const DiscOptions& opts = {});

enum class KernelPath { automatic, enumeration, shortcut };

KernelPath parse_kernel_path(std::string_view name);

// lambda_r(y1, y2) = int (chi(B_r(y), y1) - v_r(y)) (chi(B_r(y), y2) - v_r(y)) dmu(y).
// enumeration: exact sum on finite spaces; shortcut: <sdm_r> - sdm_r(y1, y2) on
// distance-invariant spaces; automatic picks one of these, else Monte Carlo.
MeanEstimate disc_kernel(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2,
                         KernelPath path = KernelPath::automatic, const DiscOptions& opts = {});

// lambda(xi, y1, y2) = int lambda_r(y1, y2) dxi(r).
MeanEstimate disc_kernel(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                         KernelPath path = KernelPath::automatic, const DiscOptions& opts = {});

// Sum of the kernel over all ordered pairs of D, diagonal included.
DiscrepancyEstimate quad_disc_r_kernel(const SpaceDescriptor& space, const PointSet& points, double r,
                                       KernelPath path = KernelPath::automatic, const DiscOptions& opts = {});
DiscrepancyEstimate quad_disc_xi_kernel(const SpaceDescriptor& space, const PointSet& points,
                                        const RadialMeasure& xi, KernelPath path = KernelPath::automatic,
                                        const DiscOptions& opts = {});

}  // namespace metdisc
