#pragma once

#include "metdisc/rational.hpp"
#include "metdisc/rng.hpp"
#include "metdisc/sphere.hpp"
#include "metdisc/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace metdisc {

// A point of a space: ambient coordinates for continuous spaces, a single
// label index for finite spaces.
struct Point {
  std::vector<double> x;

  Point() = default;
  explicit Point(std::vector<double> coords) : x(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : x(coords) {}

  static Point label(std::size_t index) { return Point(std::vector<double>{static_cast<double>(index)}); }
  std::size_t label_index() const;

  std::span<const double> coords() const { return x; }
  bool operator==(const Point&) const = default;
};

using PointSet = std::vector<Point>;

// Probability density on the unit cube I^d.
class Density {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Density(std::string name, int dim, Fn fn, double upper_bound,
          std::vector<std::vector<double>> breakpoints = {});

  static Density uniform(int dim);
  // prod_i (p + 1) z_i^p
  static Density power(int dim, double p);
  // Product of N(mean, sigma^2) truncated to [0, 1] on every axis.
  static Density truncated_gaussian(int dim, double mean, double sigma);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double operator()(std::span<const double> z) const { return fn_(z); }
  // Supremum of the density; the rejection samplers rely on it.
  double upper_bound() const { return upper_bound_; }
  // Per-axis coordinates where the density may be non-smooth.
  const std::vector<std::vector<double>>& breakpoints() const { return breakpoints_; }
  bool is_uniform() const { return uniform_; }

 private:
  std::string name_;
  int dim_;
  Fn fn_;
  double upper_bound_;
  std::vector<std::vector<double>> breakpoints_;
  bool uniform_ = false;
};

using MetricFn = std::function<double(const Point&, const Point&)>;

// Injective Lipschitz map f from O in I^d onto a metric-measure space, with
// the pulled-back density nu of the measure.
struct Chart {
  std::string name;
  int dim = 0;
  std::function<bool(std::span<const double>)> in_domain;
  std::function<Point(std::span<const double>)> forward;
  // Optional left inverse on f(O); used for membership tests.
  std::function<std::optional<std::vector<double>>(const Point&)> inverse;
  std::shared_ptr<const Density> nu;
  MetricFn metric;
  double diameter = 0.0;
  // sup of the operator norm of Df over O, from a dense grid.
  double local_lipschitz = 0.0;
  // Bound on theta(f(Z1), f(Z2)) / |Z1 - Z2| for Z1, Z2 in different
  // connected pieces of O; zero when O is connected.
  double cross_piece_bound = 0.0;
  // Lipschitz bound used in every diameter and bound report.
  double lip_bound = 0.0;
  // Non-empty for the built-in sphere charts.
  std::optional<std::pair<int, SphereMetric>> target_sphere;
  bool identity = false;
};

// Built-in charts: "circle" (S^1) and "sphere2" (S^2 by cube-face projection).
Chart builtin_chart(std::string_view name, SphereMetric metric = SphereMetric::geodesic);

// f = identity on I^d with the given density; the image space is the cube.
Chart identity_chart(const Density& density);

// Supremum over a grid of grid_per_axis^d cell centres of the operator norm of
// the finite-difference Jacobian of f (ambient Euclidean coordinates).
double estimate_local_lipschitz(const Chart& chart, int grid_per_axis);

// Finite metric space with rational weights.
class FiniteSpace {
 public:
  // dist is the full row-major |labels| x |labels| table.
  FiniteSpace(std::vector<std::string> labels, std::vector<double> dist, std::vector<Rational> weights);

  std::size_t size() const { return data_->labels.size(); }
  double dist(std::size_t i, std::size_t j) const { return data_->dist[i * size() + j]; }
  const Rational& weight_exact(std::size_t i) const { return data_->weights[i]; }
  double weight(std::size_t i) const { return data_->weights_d[i]; }
  const std::string& label(std::size_t i) const { return data_->labels[i]; }
  std::optional<std::size_t> find_label(std::string_view name) const;
  // Sorted distinct distances (the radii set T, including 0).
  const std::vector<double>& radii() const { return data_->radii; }
  double diameter() const { return data_->radii.back(); }
  bool uniform_weights() const { return data_->uniform; }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::vector<double> dist;
    std::vector<Rational> weights;
    std::vector<double> weights_d;
    std::vector<double> radii;
    bool uniform = false;
  };
  std::shared_ptr<const Data> data_;
};

// Binary Hamming cube {0,1}^n with the Hamming distance and uniform weights.
FiniteSpace hamming_space(int n);

struct CubeSpace {
  std::shared_ptr<const Density> density;
};

struct SphereSpace {
  int dim = 2;
  SphereMetric metric = SphereMetric::geodesic;
};

class SpaceDescriptor;

struct ChartSpace {
  std::shared_ptr<const Chart> chart;
  // Underlying space when the chart parametrises a built-in space; metric and
  // measure queries are delegated to it.
  std::shared_ptr<const SpaceDescriptor> target;
};

// Compact metric space with a probability measure.
class SpaceDescriptor {
 public:
  using Variant = std::variant<CubeSpace, SphereSpace, FiniteSpace, ChartSpace>;

  explicit SpaceDescriptor(Variant v, std::string name = {});

  static SpaceDescriptor cube(const Density& density);
  static SpaceDescriptor sphere(int dim, SphereMetric metric = SphereMetric::geodesic);
  static SpaceDescriptor finite(FiniteSpace space, std::string name = "finite");
  static SpaceDescriptor chart(const Chart& chart);

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }
  const std::string& name() const { return name_; }

  bool is_finite() const { return get_if<FiniteSpace>() != nullptr; }
  const FiniteSpace& finite_space() const;
  // Sphere this space is (or is charted onto), if any.
  std::optional<SphereSpace> as_sphere() const;

  // Diameter L in the space's own metric.
  double diameter() const;
  // Intrinsic dimension; 0 for finite spaces.
  int dimension() const;
  // Ball volumes are center-independent (spheres; finite spaces checked).
  bool distance_invariant() const;

 private:
  Variant v_;
  std::string name_;
};

void validate_point(const SpaceDescriptor& space, const Point& p);

// theta(x, y); validates both points.
double distance(const SpaceDescriptor& space, const Point& x, const Point& y);
// Same without validation, for inner loops over already-validated points.
double distance_unchecked(const SpaceDescriptor& space, const Point& x, const Point& y);

// Closed-form or exact mu(B_r(center)) for closed balls, when available.
std::optional<double> closed_ball_volume(const SpaceDescriptor& space, const Point& center, double r);

// mu of the closed ball {x : theta(x, center) <= r}. Exact on finite spaces and
// spheres; Monte Carlo with standard error elsewhere.
MeanEstimate ball_volume(const SpaceDescriptor& space, const Point& center, double r,
                         std::size_t budget = 100000, std::uint64_t seed = 0);

// i.i.d. draws from mu, deterministic given the seed.
PointSet sample_mu(const SpaceDescriptor& space, std::uint64_t seed, std::size_t n);
// One draw using the caller's generator.
Point sample_one(const SpaceDescriptor& space, Rng& rng);

// Draws Z from nu restricted to the box by rejection. Throws SamplerError when
// the acceptance rate falls below min_rate after a warm-up.
std::vector<double> sample_density_in_box(const Chart& chart, std::span<const double> lo,
                                          std::span<const double> hi, Rng& rng,
                                          double min_rate = 1e-4);

}  // namespace metdisc
