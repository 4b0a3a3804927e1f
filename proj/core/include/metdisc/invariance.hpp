#pragma once

#include "metdisc/discrepancy.hpp"
#include "metdisc/energy.hpp"
#include "metdisc/partition.hpp"
#include "metdisc/radial_measure.hpp"
#include "metdisc/report.hpp"
#include "metdisc/spaces.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace metdisc {

// A0_r = int v_r^2 dmu and A1_r(x) = 1/2 v_r(x) - int v_r(y) chi(B_r(x), y) dmu(y).
// Exact on finite spaces, closed form on spheres, Monte Carlo otherwise (or
// when forced). Every Monte Carlo call uses its own substream.
class ProofFunctionals {
 public:
  explicit ProofFunctionals(const SpaceDescriptor& space, std::size_t budget = 200000, std::uint64_t seed = 0,
                            bool force_mc = false);

  MeanEstimate a0(double r) const;
  MeanEstimate a1(double r, const Point& x) const;
  // sum_i A1_r(x_i) with independent estimates per point.
  MeanEstimate a1_sum(double r, const PointSet& xs) const;
  // Ball-volume profile on distance-invariant spaces.
  std::optional<double> v(double r) const;

 private:
  const SpaceDescriptor& space_;
  std::size_t budget_;
  std::uint64_t seed_;
  bool force_mc_;
};

// Ball volumes on a finite space are centre-independent; throws
// PreconditionError naming the first violating pair of centres otherwise.
void require_distance_invariant(const FiniteSpace& space);

// lambda[xi, D] + sdm[xi, D] - <sdm(xi)> N^2 on a finite distance-invariant
// space with atomic xi. The rational path must give exactly 0; the float
// path passes below 1e-12 N^2.
VerificationReport check_invariance_exact(const SpaceDescriptor& space, const RadialMeasure& xi,
                                          const PointSet& points, bool use_rational = true);

// lambda_r(y1, y2) + sdm_r(y1, y2) - (A0_r + A1_r(y1) + A1_r(y2)), in rationals.
VerificationReport check_kernel_identity(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2);

// lambda_r(y1, y2) + sdm_r(y1, y2) - <sdm_r>, in rationals; requires distance invariance.
VerificationReport check_kernel_shortcut(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2);

struct PointwiseOptions {
  std::size_t budget = 200000;
  std::uint64_t seed = 0;
  bool force_mc = false;
};

// lambda_r[X] + sdm_r[X] - (N^2 A0_r + 2N sum_i A1_r(x_i)). Rational on
// finite spaces, Monte Carlo with combined error elsewhere.
VerificationReport check_pointwise_identity(const SpaceDescriptor& space, double r, const PointSet& points,
                                            const PointwiseOptions& opts = {});
// The same integrated against xi (finite spaces, or distance-invariant spaces
// where A0 and A1 are closed form).
VerificationReport check_pointwise_identity(const SpaceDescriptor& space, const RadialMeasure& xi,
                                            const PointSet& points, const PointwiseOptions& opts = {});

struct ProbabilisticOptions {
  std::size_t n_samples = 200;
  std::size_t n_outer = 4000;  // centres per lambda evaluation
  double radial_tol = 1e-8;
  std::uint64_t seed = 0;
  // Rerun once with 4x the outer budget when the gate fails.
  bool rerun = true;
};

// Sample mean over Omega_N draws of lambda[xi, X] + sdm[xi, X] against
// <sdm(xi)> N^2.
VerificationReport check_probabilistic_invariance(const SpaceDescriptor& space, const SpacePartition& R,
                                                  const RadialMeasure& xi, const ProbabilisticOptions& opts = {});

struct StolarskyConstant {
  int d = 2;
  double c = 0.0;      // mean of sdm(xi_natural) / chordal over the pairs
  double alpha = 0.0;  // 1 / c
  double ratio_dispersion = 0.0;  // max |ratio - c|
  double tolerance = 0.0;
  double std_error = 0.0;
  std::size_t n_pairs = 0;
  // Monte Carlo survival-form estimate of c on the same pairs.
  double mc_c = 0.0;
  double mc_std_error = 0.0;
};

// Measures the proportionality constant between sdm(xi_natural) and the
// chordal metric on S^d. Throws ProportionalityError when the ratios scatter
// beyond 3 SE + 1e-9 |c|.
StolarskyConstant stolarsky_alpha(int d, std::size_t n_pairs = 100, std::size_t budget = 20000,
                                  std::uint64_t seed = 0);

// alpha lambda[xi_natural, D] + chordal[D] - <chordal> N^2 on S^d.
VerificationReport check_stolarsky(const SpaceDescriptor& space, const PointSet& points,
                                   const StolarskyConstant& alpha, const DiscOptions& opts = {});

struct BoundOptions {
  std::size_t n_samples = 200;
  std::uint64_t seed = 0;
  OccupancyPolicy policy = OccupancyPolicy::lexicographic;
  // Radial measure for the discrepancy-side checks; defaults to metric.xi.
  std::shared_ptr<const RadialMeasure> xi;
  // Draws used for the discrepancy side (at most n_samples); 0 means
  // n_samples. Each draw costs N^2 radial quadratures on spheres.
  std::size_t lambda_samples = 40;
  std::size_t budget = 100000;
  std::size_t spot_pairs = 1000;
};

// Partition, Omega_N draws and the bound checks:
//   expectation:  mean rho[X] >= <rho> N^2 - c0 Diam1 N
//   witness:      max rho[X] >= <rho> N^2 - d 2^(d-1) Lip c0 N^(1-1/d)
//   lambda_diam:  mean lambda[xi, X] <= (c0(xi) / 2) Diam1 N
//   lambda_stated / lambda_proof: mean lambda <= d 2^(d-3) (or 2^(d-2)) Lip c0(xi) N^(1-1/d)
// The first two are omitted for N = 1. Diam1 is the certified bound Lip times
// the cube-side average diameter.
std::vector<VerificationReport> bound_report(const SpaceDescriptor& space, const Chart& chart,
                                             const MetricSelector& metric, double c0, std::size_t N,
                                             const BoundOptions& opts = {});

// For a finite candidate family: the argmin of lambda[xi, .] and the argmax of
// sdm[xi, .] select the same candidates (exact rationals).
VerificationReport check_extremal_alignment(const SpaceDescriptor& space, const RadialMeasure& xi,
                                            const std::vector<PointSet>& candidates);

}  // namespace metdisc
