#include "metdisc/spaces.hpp"

#include "metdisc/errors.hpp"
#include "metdisc/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace metdisc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kSampleBlock = 1024;

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Standard normal from two uniforms (Box-Muller); avoids the
// implementation-defined std::normal_distribution.
double gaussian(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * rng.uniform());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

bool in_unit_cube(std::span<const double> z) {
  return std::all_of(z.begin(), z.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

// Rejection draw of Z ~ nu on the box [lo, hi).
std::vector<double> reject_in_box(const std::function<bool(std::span<const double>)>& in_domain,
                                  const Density& nu, std::span<const double> lo,
                                  std::span<const double> hi, Rng& rng, double min_rate) {
  const std::size_t d = lo.size();
  std::vector<double> z(d);
  const double bound = nu.upper_bound();
  const auto max_attempts = static_cast<std::size_t>(std::ceil(20.0 / min_rate));
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < d; ++i) z[i] = rng.uniform(lo[i], hi[i]);
    const double accept = rng.uniform();
    if (in_domain && !in_domain(z)) continue;
    if (nu.is_uniform() || accept * bound < nu(z)) return z;
  }
  std::ostringstream msg;
  msg << "rejection sampler: no acceptance in " << max_attempts << " attempts (rate below "
      << min_rate << ") for density '" << nu.name() << "' on box [";
  for (std::size_t i = 0; i < d; ++i) msg << (i ? ", " : "") << "[" << lo[i] << ", " << hi[i] << ")";
  msg << "], density bound " << bound;
  throw SamplerError(msg.str());
}

// Cube-face layout of the sphere2 chart. Row 0 (v < 1/3) carries the belt
// +X, +Y, -X; row 1 (v >= 2/3) the belt +Z, -Y, -Z. Consecutive faces in a
// row share an edge, so each row maps continuously onto its belt.
std::array<double, 3> face_point(int row, int j, double a, double b) {
  if (row == 0) {
    switch (j) {
      case 0: return {1.0, a, b};
      case 1: return {-a, 1.0, b};
      default: return {-1.0, -a, b};
    }
  }
  switch (j) {
    case 0: return {b, -a, 1.0};
    case 1: return {b, -1.0, -a};
    default: return {b, a, -1.0};
  }
}

constexpr double kRowGapLo = 1.0 / 3.0;
constexpr double kRowGapHi = 2.0 / 3.0;

bool sphere2_domain(std::span<const double> z) {
  if (z.size() != 2) return false;
  const double u = z[0], v = z[1];
  if (!(u >= 0.0 && u < 1.0 && v >= 0.0 && v < 1.0)) return false;
  return v < kRowGapLo || v >= kRowGapHi;
}

struct FaceCoords {
  int row, j;
  double a, b;
};

FaceCoords sphere2_face(std::span<const double> z) {
  const double u = z[0], v = z[1];
  const int j = std::min(2, static_cast<int>(std::floor(3.0 * u)));
  const int row = v < 0.5 ? 0 : 1;
  const double a = 6.0 * u - 2.0 * j - 1.0;
  const double b = row == 0 ? 6.0 * v - 1.0 : 6.0 * v - 5.0;
  return {row, j, a, b};
}

Point sphere2_forward(std::span<const double> z) {
  const FaceCoords f = sphere2_face(z);
  auto p = face_point(f.row, f.j, f.a, f.b);
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return Point{p[0] / n, p[1] / n, p[2] / n};
}

std::optional<std::vector<double>> sphere2_inverse(const Point& p) {
  if (p.x.size() != 3) return std::nullopt;
  const double x = p.x[0], y = p.x[1], zc = p.x[2];
  const double ax = std::abs(x), ay = std::abs(y), az = std::abs(zc);
  int row = 0, j = 0;
  double a = 0.0, b = 0.0;
  if (ax >= ay && ax >= az) {
    row = 0;
    j = x > 0 ? 0 : 2;
    a = x > 0 ? y / ax : -y / ax;
    b = zc / ax;
  } else if (ay >= az) {
    if (y > 0) {
      row = 0, j = 1;
      a = -x / ay;
      b = zc / ay;
    } else {
      row = 1, j = 1;
      b = x / ay;
      a = -zc / ay;
    }
  } else {
    row = 1;
    j = zc > 0 ? 0 : 2;
    b = x / az;
    a = zc > 0 ? -y / az : y / az;
  }
  a = std::clamp(a, -1.0, 1.0);
  b = std::clamp(b, -1.0, 1.0);
  const double u = std::min((a + 1.0 + 2.0 * j) / 6.0, std::nextafter(1.0, 0.0));
  double v = row == 0 ? (b + 1.0) / 6.0 : (b + 5.0) / 6.0;
  if (row == 0) v = std::min(v, std::nextafter(kRowGapLo, 0.0));
  else v = std::min(v, std::nextafter(1.0, 0.0));
  return std::vector<double>{u, v};
}

double sphere2_density(std::span<const double> z) {
  if (!sphere2_domain(z)) return 0.0;
  const FaceCoords f = sphere2_face(z);
  const double q = 1.0 + f.a * f.a + f.b * f.b;
  return (9.0 / kPi) / (q * std::sqrt(q));
}

MetricFn sphere_metric(SphereMetric metric) {
  if (metric == SphereMetric::geodesic)
    return [](const Point& a, const Point& b) { return sphere::angle(a.x, b.x); };
  return [](const Point& a, const Point& b) { return sphere::chord(a.x, b.x); };
}

double sphere_diameter(SphereMetric metric) { return metric == SphereMetric::geodesic ? kPi : 2.0; }

// Largest singular value of the m x d matrix given by its columns.
double operator_norm(const std::vector<std::vector<double>>& cols) {
  const std::size_t d = cols.size();
  std::vector<double> g(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < cols[i].size(); ++k) s += cols[i][k] * cols[j][k];
      g[i * d + j] = s;
    }
  if (d == 1) return std::sqrt(g[0]);
  if (d == 2) {
    const double tr = g[0] + g[3], det = g[0] * g[3] - g[1] * g[2];
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return std::sqrt(0.5 * tr + disc);
  }
  std::vector<double> v(d, 1.0), w(d);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      w[i] = 0.0;
      for (std::size_t j = 0; j < d; ++j) w[i] += g[i * d + j] * v[j];
    }
    double n = 0.0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return 0.0;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

}  // namespace

std::size_t Point::label_index() const {
  if (x.size() != 1 || x[0] < 0.0 || x[0] != std::floor(x[0]))
    throw DomainError("finite-space point must be a single non-negative integer label");
  return static_cast<std::size_t>(x[0]);
}

// ---------------------------------------------------------------- Density

Density::Density(std::string name, int dim, Fn fn, double upper_bound,
                 std::vector<std::vector<double>> breakpoints)
    : name_(std::move(name)),
      dim_(dim),
      fn_(std::move(fn)),
      upper_bound_(upper_bound),
      breakpoints_(std::move(breakpoints)) {
  if (dim_ < 1) throw ConfigError("density dimension must be >= 1");
  if (!(upper_bound_ > 0.0) || !std::isfinite(upper_bound_))
    throw ConfigError("density '" + name_ + "' needs a finite positive upper bound");
}

Density Density::uniform(int dim) {
  Density d("uniform", dim, [](std::span<const double>) { return 1.0; }, 1.0);
  d.uniform_ = true;
  return d;
}

Density Density::power(int dim, double p) {
  if (!(p >= 0.0)) throw ConfigError("power density needs exponent p >= 0");
  auto fn = [p](std::span<const double> z) {
    double v = 1.0;
    for (double zi : z) v *= (p + 1.0) * std::pow(zi, p);
    return v;
  };
  std::ostringstream name;
  name << "power(" << p << ")";
  return Density(name.str(), dim, fn, std::pow(p + 1.0, dim));
}

Density Density::truncated_gaussian(int dim, double mean, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("truncated gaussian needs sigma > 0");
  const double z = normal_cdf((1.0 - mean) / sigma) - normal_cdf(-mean / sigma);
  if (!(z > 0.0)) throw ConfigError("truncated gaussian has no mass on [0, 1]");
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi) * z);
  auto fn = [mean, sigma, norm](std::span<const double> x) {
    double v = 1.0;
    for (double xi : x) {
      const double t = (xi - mean) / sigma;
      v *= norm * std::exp(-0.5 * t * t);
    }
    return v;
  };
  const double peak_x = std::clamp(mean, 0.0, 1.0);
  const double peak_t = (peak_x - mean) / sigma;
  const double peak = norm * std::exp(-0.5 * peak_t * peak_t);
  std::ostringstream name;
  name << "truncated_gaussian(" << mean << "," << sigma << ")";
  return Density(name.str(), dim, fn, std::pow(peak, dim));
}

// ---------------------------------------------------------------- charts

Chart builtin_chart(std::string_view name, SphereMetric metric) {
  Chart c;
  c.name = std::string(name);
  c.metric = sphere_metric(metric);
  c.diameter = sphere_diameter(metric);
  if (name == "circle") {
    c.dim = 1;
    c.in_domain = [](std::span<const double> z) { return z.size() == 1 && z[0] >= 0.0 && z[0] < 1.0; };
    c.forward = [](std::span<const double> z) {
      return Point{std::cos(2.0 * kPi * z[0]), std::sin(2.0 * kPi * z[0])};
    };
    c.inverse = [](const Point& p) -> std::optional<std::vector<double>> {
      if (p.x.size() != 2) return std::nullopt;
      double u = std::atan2(p.x[1], p.x[0]) / (2.0 * kPi);
      if (u < 0.0) u += 1.0;
      if (u >= 1.0) u = 0.0;
      return std::vector<double>{u};
    };
    auto nu = Density::uniform(1);
    c.nu = std::make_shared<const Density>(nu);
    // Arc length is 2 pi |u - v| for short arcs; chords are shorter still.
    c.local_lipschitz = 2.0 * kPi;
    c.lip_bound = 2.0 * kPi;
    c.target_sphere = std::make_pair(1, metric);
    return c;
  }
  if (name == "sphere2") {
    c.dim = 2;
    c.in_domain = sphere2_domain;
    c.forward = sphere2_forward;
    c.inverse = sphere2_inverse;
    c.nu = std::make_shared<const Density>(
        Density("sphere2_faces", 2, sphere2_density, 9.0 / kPi,
                {{1.0 / 3.0, 2.0 / 3.0}, {kRowGapLo, kRowGapHi}}));
    c.target_sphere = std::make_pair(2, metric);
    c.local_lipschitz = estimate_local_lipschitz(c, 256);
    // Points in different rows are at least the gap apart in I^2.
    c.cross_piece_bound = c.diameter / (kRowGapHi - kRowGapLo);
    c.lip_bound = std::max(1.05 * c.local_lipschitz, c.cross_piece_bound);
    return c;
  }
  throw ConfigError("unknown built-in chart '" + std::string(name) + "' (expected circle or sphere2)");
}

Chart identity_chart(const Density& density) {
  Chart c;
  c.name = "identity";
  c.dim = density.dim();
  c.in_domain = [](std::span<const double> z) { return in_unit_cube(z); };
  c.forward = [](std::span<const double> z) { return Point(std::vector<double>(z.begin(), z.end())); };
  c.inverse = [](const Point& p) -> std::optional<std::vector<double>> {
    if (!in_unit_cube(p.x)) return std::nullopt;
    return p.x;
  };
  c.nu = std::make_shared<const Density>(density);
  c.metric = [](const Point& a, const Point& b) { return euclid(a.x, b.x); };
  c.diameter = std::sqrt(static_cast<double>(c.dim));
  c.local_lipschitz = 1.0;
  c.lip_bound = 1.0;
  c.identity = true;
  return c;
}

double estimate_local_lipschitz(const Chart& chart, int grid_per_axis) {
  const int d = chart.dim;
  const double cell = 1.0 / grid_per_axis;
  const double h = 1e-7;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid_per_axis);
  double best = 0.0;
  std::vector<double> z(d), zh(d);
  std::vector<std::vector<double>> cols(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int i = 0; i < d; ++i) {
      z[i] = (static_cast<double>(rem % grid_per_axis) + 0.5) * cell;
      rem /= grid_per_axis;
    }
    if (!chart.in_domain(z)) continue;
    const Point p0 = chart.forward(z);
    bool ok = true;
    for (int k = 0; k < d && ok; ++k) {
      zh = z;
      zh[k] += h;
      double step = h;
      if (!chart.in_domain(zh)) {
        zh[k] = z[k] - h;
        step = -h;
        if (!chart.in_domain(zh)) ok = false;
      }
      if (!ok) break;
      const Point p1 = chart.forward(zh);
      cols[k].resize(p0.x.size());
      for (std::size_t m = 0; m < p0.x.size(); ++m) cols[k][m] = (p1.x[m] - p0.x[m]) / step;
    }
    if (ok) best = std::max(best, operator_norm(cols));
  }
  return best;
}

// ---------------------------------------------------------------- finite

FiniteSpace::FiniteSpace(std::vector<std::string> labels, std::vector<double> dist,
                         std::vector<Rational> weights) {
  const std::size_t n = labels.size();
  if (n == 0) throw ConfigError("finite space needs at least one point");
  if (dist.size() != n * n) throw ConfigError("distance table must be |labels| x |labels|");
  if (weights.size() != n) throw ConfigError("weights must have one entry per label");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i * n + i] != 0.0) throw ConfigError("distance table must have a zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = dist[i * n + j];
      if (!std::isfinite(dij) || dij < 0.0) throw ConfigError("distances must be finite and non-negative");
      if (dij != dist[j * n + i]) throw ConfigError("distance table must be symmetric");
      if (i != j && dij == 0.0) throw ConfigError("distinct labels at distance zero");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (dist[i * n + k] > dist[i * n + j] + dist[j * n + k] + 1e-12)
          throw ConfigError("triangle inequality fails for labels " + labels[i] + ", " + labels[j] +
                            ", " + labels[k]);
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w < 0) throw InputError("weights must be non-negative");
    sum += w;
  }
  if (std::abs(to_double(sum) - 1.0) > 1e-12)
    throw ConfigError("weights must sum to 1 (got " + to_string(sum) + ")");

  auto data = std::make_shared<Data>();
  data->labels = std::move(labels);
  data->dist = std::move(dist);
  data->weights = std::move(weights);
  for (auto& w : data->weights) w /= sum;
  for (const auto& w : data->weights) data->weights_d.push_back(to_double(w));
  data->uniform = std::all_of(data->weights.begin(), data->weights.end(),
                              [&](const Rational& w) { return w == data->weights.front(); });
  std::vector<double> radii(data->dist);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  data->radii = std::move(radii);
  data_ = std::move(data);
}

std::optional<std::size_t> FiniteSpace::find_label(std::string_view name) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (data_->labels[i] == name) return i;
  return std::nullopt;
}

FiniteSpace hamming_space(int n) {
  if (n < 1 || n > 10) throw ConfigError("hamming dimension must be in [1, 10]");
  const std::size_t m = std::size_t{1} << n;
  std::vector<std::string> labels(m);
  std::vector<double> dist(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    std::string s(n, '0');
    for (int b = 0; b < n; ++b)
      if (i >> (n - 1 - b) & 1U) s[b] = '1';
    labels[i] = s;
    for (std::size_t j = 0; j < m; ++j) dist[i * m + j] = std::popcount(i ^ j);
  }
  std::vector<Rational> w(m, Rational(1, static_cast<long long>(m)));
  return FiniteSpace(std::move(labels), std::move(dist), std::move(w));
}

// ---------------------------------------------------------------- descriptor

SpaceDescriptor::SpaceDescriptor(Variant v, std::string name) : v_(std::move(v)), name_(std::move(name)) {}

SpaceDescriptor SpaceDescriptor::cube(const Density& density) {
  return SpaceDescriptor(CubeSpace{std::make_shared<const Density>(density)}, "cube");
}

SpaceDescriptor SpaceDescriptor::sphere(int dim, SphereMetric metric) {
  if (dim != 1 && dim != 2) throw ConfigError("only S^1 and S^2 are supported");
  return SpaceDescriptor(SphereSpace{dim, metric}, dim == 1 ? "sphere1" : "sphere2");
}

SpaceDescriptor SpaceDescriptor::finite(FiniteSpace space, std::string name) {
  return SpaceDescriptor(std::move(space), std::move(name));
}

SpaceDescriptor SpaceDescriptor::chart(const Chart& chart) {
  ChartSpace cs{std::make_shared<const Chart>(chart), nullptr};
  if (chart.target_sphere)
    cs.target = std::make_shared<const SpaceDescriptor>(
        sphere(chart.target_sphere->first, chart.target_sphere->second));
  else if (chart.identity)
    cs.target = std::make_shared<const SpaceDescriptor>(cube(*chart.nu));
  return SpaceDescriptor(std::move(cs), "chart:" + chart.name);
}

const FiniteSpace& SpaceDescriptor::finite_space() const {
  const auto* f = get_if<FiniteSpace>();
  if (!f) throw ConfigError("space '" + name_ + "' is not finite");
  return *f;
}

std::optional<SphereSpace> SpaceDescriptor::as_sphere() const {
  if (const auto* s = get_if<SphereSpace>()) return *s;
  if (const auto* c = get_if<ChartSpace>(); c && c->target) return c->target->as_sphere();
  return std::nullopt;
}

double SpaceDescriptor::diameter() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CubeSpace>) return std::sqrt(static_cast<double>(s.density->dim()));
        else if constexpr (std::is_same_v<T, SphereSpace>) return sphere_diameter(s.metric);
        else if constexpr (std::is_same_v<T, FiniteSpace>) return s.diameter();
        else return s.target ? s.target->diameter() : s.chart->diameter;
      },
      v_);
}

int SpaceDescriptor::dimension() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CubeSpace>) return s.density->dim();
        else if constexpr (std::is_same_v<T, SphereSpace>) return s.dim;
        else if constexpr (std::is_same_v<T, FiniteSpace>) return 0;
        else return s.chart->dim;
      },
      v_);
}

bool SpaceDescriptor::distance_invariant() const {
  if (as_sphere()) return true;
  const auto* f = get_if<FiniteSpace>();
  if (!f) return false;
  const std::size_t n = f->size();
  for (double r : f->radii()) {
    Rational first = 0;
    for (std::size_t c = 0; c < n; ++c) {
      Rational v = 0;
      for (std::size_t y = 0; y < n; ++y)
        if (f->dist(c, y) <= r) v += f->weight_exact(y);
      if (c == 0) first = v;
      else if (v != first) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- queries

void validate_point(const SpaceDescriptor& space, const Point& p) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CubeSpace>) {
          if (p.x.size() != static_cast<std::size_t>(s.density->dim()) || !in_unit_cube(p.x))
            throw DomainError("point outside the unit cube");
        } else if constexpr (std::is_same_v<T, SphereSpace>) {
          if (p.x.size() != static_cast<std::size_t>(s.dim + 1))
            throw DomainError("sphere point has the wrong number of coordinates");
          double n2 = 0.0;
          for (double v : p.x) n2 += v * v;
          if (!(std::abs(std::sqrt(n2) - 1.0) <= 1e-9)) throw DomainError("point is not on the unit sphere");
        } else if constexpr (std::is_same_v<T, FiniteSpace>) {
          if (p.label_index() >= s.size()) throw DomainError("label index out of range");
        } else {
          if (s.target) {
            validate_point(*s.target, p);
          } else if (s.chart->inverse && !s.chart->inverse(p)) {
            throw DomainError("point is not in the image of chart '" + s.chart->name + "'");
          }
        }
      },
      space.variant());
}

double distance_unchecked(const SpaceDescriptor& space, const Point& x, const Point& y) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CubeSpace>) return euclid(x.x, y.x);
        else if constexpr (std::is_same_v<T, SphereSpace>)
          return s.metric == SphereMetric::geodesic ? sphere::angle(x.x, y.x) : sphere::chord(x.x, y.x);
        else if constexpr (std::is_same_v<T, FiniteSpace>)
          return s.dist(static_cast<std::size_t>(x.x[0]), static_cast<std::size_t>(y.x[0]));
        else return s.target ? distance_unchecked(*s.target, x, y) : s.chart->metric(x, y);
      },
      space.variant());
}

double distance(const SpaceDescriptor& space, const Point& x, const Point& y) {
  validate_point(space, x);
  validate_point(space, y);
  return distance_unchecked(space, x, y);
}

std::optional<double> closed_ball_volume(const SpaceDescriptor& space, const Point& center, double r) {
  if (r < 0.0) throw RangeError("ball radius must be non-negative");
  if (const auto* f = space.get_if<FiniteSpace>()) {
    const std::size_t c = center.label_index();
    double v = 0.0;
    for (std::size_t y = 0; y < f->size(); ++y)
      if (f->dist(c, y) <= r) v += f->weight(y);
    return std::min(v, 1.0);
  }
  if (r >= space.diameter()) return 1.0;
  if (auto s = space.as_sphere()) return sphere::cap_volume(s->dim, sphere::geodesic_radius(s->metric, r));
  if (const auto* c = space.get_if<CubeSpace>(); c && c->density->is_uniform() && c->density->dim() == 1) {
    const double lo = std::max(0.0, center.x[0] - r), hi = std::min(1.0, center.x[0] + r);
    return std::max(0.0, hi - lo);
  }
  if (const auto* c = space.get_if<ChartSpace>(); c && c->target) return closed_ball_volume(*c->target, center, r);
  return std::nullopt;
}

MeanEstimate ball_volume(const SpaceDescriptor& space, const Point& center, double r, std::size_t budget,
                         std::uint64_t seed) {
  validate_point(space, center);
  if (auto v = closed_ball_volume(space, center, r)) {
    const Method m = space.is_finite() ? Method::exact_enumeration : Method::closed_form;
    return {*v, 0.0, 0, m};
  }
  const std::size_t blocks = (budget + kSampleBlock - 1) / kSampleBlock;
  std::vector<RunningStats> stats(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(seed, 0x62616c6cULL, b);
    const std::size_t count = std::min(kSampleBlock, budget - b * kSampleBlock);
    for (std::size_t i = 0; i < count; ++i) {
      const Point y = sample_one(space, rng);
      stats[b].add(distance_unchecked(space, center, y) <= r ? 1.0 : 0.0);
    }
  });
  RunningStats all;
  for (const auto& s : stats) all.merge(s);
  return {all.mean(), all.std_error(), all.count(), Method::monte_carlo};
}

Point sample_one(const SpaceDescriptor& space, Rng& rng) {
  return std::visit(
      [&](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CubeSpace>) {
          const int d = s.density->dim();
          std::vector<double> lo(d, 0.0), hi(d, 1.0);
          return Point(reject_in_box(nullptr, *s.density, lo, hi, rng, 1e-4));
        } else if constexpr (std::is_same_v<T, SphereSpace>) {
          if (s.dim == 1) {
            const double t = 2.0 * kPi * rng.uniform();
            return Point{std::cos(t), std::sin(t)};
          }
          for (;;) {
            const double a = gaussian(rng), b = gaussian(rng), c = gaussian(rng);
            const double n = std::sqrt(a * a + b * b + c * c);
            if (n > 1e-12) return Point{a / n, b / n, c / n};
          }
        } else if constexpr (std::is_same_v<T, FiniteSpace>) {
          const double u = rng.uniform();
          double acc = 0.0;
          for (std::size_t i = 0; i < s.size(); ++i) {
            acc += s.weight(i);
            if (u < acc) return Point::label(i);
          }
          for (std::size_t i = s.size(); i-- > 0;)
            if (s.weight(i) > 0.0) return Point::label(i);
          return Point::label(0);
        } else {
          if (s.target) return sample_one(*s.target, rng);
          const int d = s.chart->dim;
          std::vector<double> lo(d, 0.0), hi(d, 1.0);
          return s.chart->forward(reject_in_box(s.chart->in_domain, *s.chart->nu, lo, hi, rng, 1e-4));
        }
      },
      space.variant());
}

PointSet sample_mu(const SpaceDescriptor& space, std::uint64_t seed, std::size_t n) {
  if (n < 1) throw InputError("sample size must be >= 1");
  PointSet out(n);
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(seed, 0x6d75ULL, b);
    const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) out[i] = sample_one(space, rng);
  });
  return out;
}

std::vector<double> sample_density_in_box(const Chart& chart, std::span<const double> lo,
                                          std::span<const double> hi, Rng& rng, double min_rate) {
  return reject_in_box(chart.in_domain, *chart.nu, lo, hi, rng, min_rate);
}

}  // namespace metdisc
