#pragma once

#include "metdisc/quadrature.hpp"
#include "metdisc/spaces.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace metdisc {

// Rightmost preimage sup{z in [0, 1] : F(z) = t} of a continuous
// non-decreasing F by bisection, to within tol in z.
double inverse_cdf(const Fn1& F, double t, double tol = 1e-14);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Splits [0, 1] into k = weights.size() intervals whose nu0-masses are
// proportional to the weights. F is the distribution function z -> nu0([0, z])
// and total = nu0([0, 1]). A zero total or zero weight sum gives [0, 1], {1}, ..., {1}.
std::vector<Interval> split_interval(const Fn1& F, double total, std::span<const std::int64_t> weights,
                                     double tol = 1e-14);

enum class OccupancyPolicy { lexicographic, balanced };

OccupancyPolicy parse_policy(std::string_view name);
std::string_view to_string(OccupancyPolicy p);

// 0/1 tensor on the k^d grid with exactly N ones. Multi-indices are 0-based
// and flattened row-major (first axis most significant).
struct OccupancyTensor {
  int k = 1;
  int d = 1;
  std::size_t N = 0;
  std::vector<std::uint8_t> bits;

  std::size_t cells() const { return bits.size(); }
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> index) const;
  // N(i_1, ..., i_q): ones whose index starts with the given prefix.
  std::size_t marginal(std::span<const int> prefix) const;
};

// Smallest k with k^d >= N.
int grid_size(std::size_t N, int d);

OccupancyTensor assign_occupancy(std::size_t N, int d, OccupancyPolicy policy = OccupancyPolicy::lexicographic);

struct Box {
  std::vector<int> index;  // 0-based (i_1, ..., i_d)
  std::vector<double> lo;
  std::vector<double> hi;
  double mass = 0.0;  // nu(box) by independent quadrature

  double diameter() const;
  double side_sum() const;
  // Half-open membership [lo, hi), closed at 1.
  bool contains(std::span<const double> z) const;
};

struct CubePartition {
  int d = 1;
  int k = 1;
  std::size_t N = 0;
  OccupancyPolicy policy = OccupancyPolicy::lexicographic;
  std::string density_name;
  double total_mass = 1.0;  // nu(I^d)
  OccupancyTensor occupancy;
  // stage[q][flat prefix of length q + 1] = Delta(i_1, ..., i_{q+1}).
  std::vector<std::vector<Interval>> stage;
  std::vector<Box> boxes;  // occupied cells only, in row-major order
  double tol = 1e-9;

  // Interval lengths ell(i_1, ..., i_j).
  double length(std::span<const int> prefix) const;
  // Index of the occupied box containing z, if any.
  std::optional<std::size_t> locate(std::span<const double> z) const;
  // Box of the stage-q partition for a prefix of length q.
  Box stage_box(std::span<const int> prefix) const;
};

// Builds the recursive equal-measure partition of I^d for the density.
// Conditional distribution functions are tabulated per box by nested
// quadrature with absolute tolerance tol / 100.
CubePartition build_cube_partition(const Density& nu, std::size_t N,
                                   OccupancyPolicy policy = OccupancyPolicy::lexicographic,
                                   double tol = 1e-9);

struct DiameterSummary {
  double diam1 = 0.0;     // mean Euclidean box diameter
  double diam_inf = 0.0;  // max Euclidean box diameter
  double side_sum = 0.0;  // mean of the box side-length sums
  double proof_bound = 0.0;  // d k^(d-1) / N
  double lemma_bound = 0.0;  // d 2^(d-1) N^(-1/d)
};

DiameterSummary average_diameter(const CubePartition& P);

// nu(box) by nested quadrature, independent of the construction.
double box_mass(const Density& nu, std::span<const double> lo, std::span<const double> hi, double tol);

// Equal-measure partition of a space: chart cells f(box) or finite cells.
struct SpacePartition {
  std::shared_ptr<const SpaceDescriptor> space;
  std::shared_ptr<const Chart> chart;  // null for finite partitions
  CubePartition cube;
  std::vector<std::vector<std::size_t>> finite_cells;
  std::size_t N = 0;
  double lip_bound = 0.0;
  // Upper bound lip_bound * Diam_1 on chart partitions; the exact average
  // theta-diameter on finite partitions.
  double diam1_theta = 0.0;

  bool is_finite() const { return !finite_cells.empty(); }
  std::size_t size() const { return N; }
  double cell_mass(std::size_t i) const;
  // Cell index containing the point, via the chart inverse.
  std::optional<std::size_t> locate(const Point& p) const;
};

SpacePartition pushforward_partition(const Chart& chart, const CubePartition& P);

// Partition of a finite space into cells of equal mass 1/N (checked exactly).
SpacePartition finite_partition(const FiniteSpace& space, std::vector<std::vector<std::size_t>> cells,
                                std::string name = "finite");
// One point per cell; requires uniform weights.
SpacePartition trivial_finite_partition(const FiniteSpace& space, std::string name = "finite");

struct OmegaSample {
  PointSet points;
  std::vector<std::size_t> cells;  // cells[i] = index of the cell holding points[i]
  std::uint64_t seed = 0;
};

// One draw from the normalised restriction of mu to every cell.
OmegaSample sample_omega(const SpacePartition& R, std::uint64_t seed);

}  // namespace metdisc
