#include "metdisc/energy.hpp"

#include "metdisc/errors.hpp"
#include "metdisc/finite_exact.hpp"
#include "metdisc/montecarlo.hpp"
#include "metdisc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace metdisc {
namespace {

constexpr double kPi = std::numbers::pi;

// Stream tags for the Monte Carlo paths.
constexpr std::uint64_t kStreamPairs = 0x7061697273ULL;
constexpr std::uint64_t kStreamSdm = 0x73646dULL;
constexpr std::uint64_t kStreamMean = 0x6d65616eULL;
constexpr std::uint64_t kStreamLip = 0x6c6970ULL;

const CubeSpace* uniform_interval(const SpaceDescriptor& space) {
  const auto* c = space.get_if<CubeSpace>();
  if (c && c->density->dim() == 1 && c->density->is_uniform()) return c;
  if (const auto* ch = space.get_if<ChartSpace>(); ch && ch->target) return uniform_interval(*ch->target);
  return nullptr;
}

struct Span1 {
  double lo, hi;
};

Span1 clip_ball(double c, double r) { return {std::max(0.0, c - r), std::min(1.0, c + r)}; }

double integrate_xi(const RadialMeasure& xi, const Fn1& f, double tol, std::vector<double> breakpoints) {
  return xi.integrate(f, tol, std::move(breakpoints)).value;
}

void require_xi(const RadialMeasure& xi) {
  if (!xi.has_density() && !xi.has_atoms())
    throw ConfigError("radial measure '" + xi.name() + "' has neither a density nor atoms");
}

double chordal_mean(int d) { return d == 1 ? 4.0 / kPi : 4.0 / 3.0; }

}  // namespace

std::string MetricSelector::name() const {
  switch (kind) {
    case MetricKind::base: return "base";
    case MetricKind::chordal: return "chordal";
    case MetricKind::sdm_xi: return "sdm_xi(" + (xi ? xi->name() : std::string("?")) + ")";
    case MetricKind::sdm_r: {
      std::ostringstream s;
      s << "sdm_r(" << r << ")";
      return s.str();
    }
  }
  return "unknown";
}

std::optional<double> closed_sdm_r(const SpaceDescriptor& space, const Point& y1, const Point& y2, double r) {
  if (const auto* f = space.get_if<FiniteSpace>()) {
    const std::size_t a = y1.label_index(), b = y2.label_index();
    double s = 0.0;
    for (std::size_t y = 0; y < f->size(); ++y)
      if ((f->dist(a, y) <= r) != (f->dist(b, y) <= r)) s += f->weight(y);
    return 0.5 * s;
  }
  if (auto sp = space.as_sphere()) {
    const double rg = sphere::geodesic_radius(sp->metric, r);
    const double s = sphere::angle(y1.x, y2.x);
    const double v = sphere::cap_volume(sp->dim, rg);
    return std::max(0.0, v - sphere::cap_intersection(sp->dim, rg, s));
  }
  if (uniform_interval(space)) {
    const auto a = clip_ball(y1.x[0], r), b = clip_ball(y2.x[0], r);
    const double overlap = std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
    return 0.5 * ((a.hi - a.lo) + (b.hi - b.lo) - 2.0 * overlap);
  }
  return std::nullopt;
}

std::vector<double> sdm_breakpoints(const SpaceDescriptor& space, const Point& y1, const Point& y2) {
  std::vector<double> out;
  if (const auto* f = space.get_if<FiniteSpace>()) return f->radii();
  if (auto sp = space.as_sphere()) {
    const double s = sphere::angle(y1.x, y2.x);
    for (double g : {0.5 * s, 0.5 * kPi, kPi - 0.5 * s})
      out.push_back(sp->metric == SphereMetric::geodesic ? g : 2.0 * std::sin(0.5 * g));
  } else if (uniform_interval(space)) {
    const double a = y1.x[0], b = y2.x[0];
    out = {0.5 * std::abs(a - b), a, 1.0 - a, b, 1.0 - b};
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_deterministic_metric(const SpaceDescriptor& space, const MetricSelector& metric) {
  switch (metric.kind) {
    case MetricKind::base: return true;
    case MetricKind::chordal: return space.as_sphere().has_value();
    case MetricKind::sdm_r:
    case MetricKind::sdm_xi:
      return space.is_finite() || space.as_sphere().has_value() || uniform_interval(space) != nullptr;
  }
  return false;
}

double metric_value(const SpaceDescriptor& space, const MetricSelector& metric, const Point& x, const Point& y) {
  switch (metric.kind) {
    case MetricKind::base: return distance_unchecked(space, x, y);
    case MetricKind::chordal:
      if (!space.as_sphere()) throw ConfigError("chordal metric is only defined on spheres");
      return sphere::chord(x.x, y.x);
    case MetricKind::sdm_r:
      if (auto v = closed_sdm_r(space, x, y, metric.r)) return *v;
      break;
    case MetricKind::sdm_xi:
      if (!metric.xi) throw ConfigError("sdm metric without a radial measure");
      if (has_deterministic_metric(space, metric)) return sdm_xi_direct(space, *metric.xi, x, y).value;
      break;
  }
  throw ConfigError("metric " + metric.name() + " has no deterministic evaluation on space '" + space.name() + "'");
}

double pair_sum(const PointSet& points, const MetricSelector& metric, const SpaceDescriptor& space) {
  const std::size_t n = points.size();
  for (const auto& p : points) validate_point(space, p);
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) s += metric_value(space, metric, points[i], points[j]);
    rows[i] = s;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return 2.0 * total;
}

MeanEstimate pair_sum_estimate(const PointSet& points, const MetricSelector& metric, const SpaceDescriptor& space,
                               std::size_t budget, std::uint64_t seed) {
  if (has_deterministic_metric(space, metric)) {
    const Method m = metric.kind == MetricKind::sdm_xi && !space.is_finite() ? Method::quadrature
                     : space.is_finite()                                     ? Method::exact_enumeration
                                                                             : Method::closed_form;
    return {pair_sum(points, metric, space), 0.0, 0, m};
  }
  for (const auto& p : points) validate_point(space, p);
  // For each y: sum over ordered pairs of 1/2 |g(x_i, y) - g(x_j, y)|, with
  // g the ball indicator (sdm_r) or sigma(theta) (sdm_xi).
  const std::size_t n = points.size();
  return mc_mean(budget, seed, kStreamPairs, [&](Rng& rng) {
    const Point y = sample_one(space, rng);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = distance_unchecked(space, points[i], y);
      g[i] = metric.kind == MetricKind::sdm_r ? (t <= metric.r ? 1.0 : 0.0) : metric.xi->survival(t);
    }
    std::sort(g.begin(), g.end());
    // sum_{i<j} (g_j - g_i) over sorted values, doubled for ordered pairs, halved.
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += g[j] * (2.0 * static_cast<double>(j) - static_cast<double>(n - 1));
    return s;
  });
}

MeanEstimate sdm_r(const SpaceDescriptor& space, const Point& y1, const Point& y2, double r, std::size_t budget,
                   std::uint64_t seed) {
  validate_point(space, y1);
  validate_point(space, y2);
  if (r < 0.0) throw RangeError("radius must be non-negative");
  if (auto v = closed_sdm_r(space, y1, y2, r))
    return {*v, 0.0, 0, space.is_finite() ? Method::exact_enumeration : Method::closed_form};
  return mc_mean(budget, seed, kStreamSdm, [&](Rng& rng) {
    const Point y = sample_one(space, rng);
    const bool a = distance_unchecked(space, y1, y) <= r;
    const bool b = distance_unchecked(space, y2, y) <= r;
    return a != b ? 0.5 : 0.0;
  });
}

MeanEstimate sdm_xi(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                    std::size_t budget, std::uint64_t seed) {
  validate_point(space, y1);
  validate_point(space, y2);
  require_xi(xi);
  if (const auto* f = space.get_if<FiniteSpace>()) {
    const std::size_t a = y1.label_index(), b = y2.label_index();
    double s = 0.0;
    for (std::size_t y = 0; y < f->size(); ++y)
      s += f->weight(y) * std::abs(xi.survival(f->dist(a, y)) - xi.survival(f->dist(b, y)));
    return {0.5 * s, 0.0, 0, Method::exact_enumeration};
  }
  if (y1 == y2) return {0.0, 0.0, 0, Method::closed_form};
  return mc_mean(budget, seed, kStreamSdm + 1, [&](Rng& rng) {
    const Point y = sample_one(space, rng);
    return 0.5 * std::abs(xi.survival(distance_unchecked(space, y1, y)) - xi.survival(distance_unchecked(space, y2, y)));
  });
}

MeanEstimate sdm_xi_direct(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                           double tol, std::size_t budget, std::uint64_t seed) {
  validate_point(space, y1);
  validate_point(space, y2);
  require_xi(xi);
  if (y1 == y2) return {0.0, 0.0, 0, Method::closed_form};
  if (!closed_sdm_r(space, y1, y2, 0.0)) return sdm_xi(space, xi, y1, y2, budget, seed);
  const double v = integrate_xi(
      xi, [&](double r) { return *closed_sdm_r(space, y1, y2, r); }, tol, sdm_breakpoints(space, y1, y2));
  const Method m = space.is_finite() && !xi.has_density() ? Method::exact_enumeration : Method::quadrature;
  return {v, 0.0, 0, m};
}

MeanEstimate mean_sdm_r(const SpaceDescriptor& space, double r, std::size_t budget, std::uint64_t seed) {
  if (r < 0.0) throw RangeError("radius must be non-negative");
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    return {eng.mean_sdm_r(r), 0.0, 0, Method::exact_enumeration};
  }
  if (auto sp = space.as_sphere()) {
    const double v = sphere::cap_volume(sp->dim, sphere::geodesic_radius(sp->metric, r));
    return {v - v * v, 0.0, 0, Method::closed_form};
  }
  const Point probe = sample_mu(space, seed, 1).front();
  if (closed_ball_volume(space, probe, r)) {
    return mc_mean(budget, seed, kStreamMean, [&](Rng& rng) {
      const Point y = sample_one(space, rng);
      const double v = *closed_ball_volume(space, y, r);
      return v - v * v;
    });
  }
  return mc_mean(budget, seed, kStreamMean + 1, [&](Rng& rng) {
    const Point y1 = sample_one(space, rng), y2 = sample_one(space, rng), y = sample_one(space, rng);
    return (distance_unchecked(space, y1, y) <= r) != (distance_unchecked(space, y2, y) <= r) ? 0.5 : 0.0;
  });
}

MeanEstimate mean_sdm_xi(const SpaceDescriptor& space, const RadialMeasure& xi, std::size_t budget,
                         std::uint64_t seed, double tol) {
  require_xi(xi);
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    const double v = integrate_xi(xi, [&](double r) { return eng.mean_sdm_r(r); }, tol, f->radii());
    return {v, 0.0, 0, xi.has_density() ? Method::quadrature : Method::exact_enumeration};
  }
  if (auto sp = space.as_sphere()) {
    const double v = integrate_xi(
        xi,
        [&](double r) {
          const double vr = sphere::cap_volume(sp->dim, sphere::geodesic_radius(sp->metric, r));
          return vr - vr * vr;
        },
        tol, {});
    return {v, 0.0, 0, Method::quadrature};
  }
  return mc_mean(budget, seed, kStreamMean + 2, [&](Rng& rng) {
    const Point y1 = sample_one(space, rng), y2 = sample_one(space, rng), y = sample_one(space, rng);
    return 0.5 * std::abs(xi.survival(distance_unchecked(space, y1, y)) - xi.survival(distance_unchecked(space, y2, y)));
  });
}

MeanEstimate mean_metric(const SpaceDescriptor& space, const MetricSelector& metric, const MeanOptions& opts) {
  if (metric.kind == MetricKind::chordal && !space.as_sphere())
    throw ConfigError("chordal metric is only defined on spheres");
  if ((metric.kind == MetricKind::sdm_xi) && !metric.xi) throw ConfigError("sdm metric without a radial measure");
  const bool force_mc = opts.force && *opts.force == Method::monte_carlo;
  if (opts.force && !force_mc) throw ConfigError("only monte_carlo can be forced for mean_metric");
  if (opts.budget < 1000 && (force_mc || !has_deterministic_metric(space, metric)))
    throw InputError("Monte Carlo mean needs a budget of at least 1000 pairs");

  if (!force_mc) {
    switch (metric.kind) {
      case MetricKind::base:
        if (auto sp = space.as_sphere())
          return {sp->metric == SphereMetric::geodesic ? kPi / 2.0 : chordal_mean(sp->dim), 0.0, 0,
                  Method::closed_form};
        if (const auto* f = space.get_if<FiniteSpace>()) {
          FiniteEngine<double> eng(*f);
          return {eng.mean_distance(), 0.0, 0, Method::exact_enumeration};
        }
        if (uniform_interval(space)) return {1.0 / 3.0, 0.0, 0, Method::closed_form};
        break;
      case MetricKind::chordal: return {chordal_mean(space.as_sphere()->dim), 0.0, 0, Method::closed_form};
      case MetricKind::sdm_r: return mean_sdm_r(space, metric.r, opts.budget, opts.seed);
      case MetricKind::sdm_xi: return mean_sdm_xi(space, *metric.xi, opts.budget, opts.seed);
    }
  }
  return mc_mean(opts.budget, opts.seed, kStreamMean + 3, [&](Rng& rng) {
    const Point y1 = sample_one(space, rng), y2 = sample_one(space, rng);
    switch (metric.kind) {
      case MetricKind::base: return distance_unchecked(space, y1, y2);
      case MetricKind::chordal: return sphere::chord(y1.x, y2.x);
      case MetricKind::sdm_r:
        if (auto v = closed_sdm_r(space, y1, y2, metric.r)) return *v;
        {
          const Point y = sample_one(space, rng);
          return (distance_unchecked(space, y1, y) <= metric.r) != (distance_unchecked(space, y2, y) <= metric.r)
                     ? 0.5
                     : 0.0;
        }
      case MetricKind::sdm_xi: {
        const Point y = sample_one(space, rng);
        return 0.5 * std::abs(metric.xi->survival(distance_unchecked(space, y1, y)) -
                              metric.xi->survival(distance_unchecked(space, y2, y)));
      }
    }
    return 0.0;
  });
}

VerificationReport check_lipschitz_comparison(const SpaceDescriptor& space, const RadialMeasure& xi,
                                              std::size_t n_pairs, std::uint64_t seed, std::size_t budget) {
  if (!xi.c0()) throw ConfigError("radial measure '" + xi.name() + "' has no Lipschitz constant c0");
  require_xi(xi);
  const double c0 = *xi.c0();
  std::vector<std::pair<Point, Point>> pairs;
  if (const auto* f = space.get_if<FiniteSpace>()) {
    for (std::size_t i = 0; i < f->size(); ++i)
      for (std::size_t j = 0; j < f->size(); ++j) pairs.emplace_back(Point::label(i), Point::label(j));
  } else {
    const PointSet pts = sample_mu(space, substream_seed(seed, kStreamLip), 2 * n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) pairs.emplace_back(pts[2 * i], pts[2 * i + 1]);
  }
  std::vector<double> excess(pairs.size()), ratio(pairs.size(), 0.0), se(pairs.size(), 0.0);
  const bool deterministic = has_deterministic_metric(space, MetricSelector::sdm(nullptr));
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [a, b] = pairs[i];
    const MeanEstimate v = deterministic ? sdm_xi_direct(space, xi, a, b)
                                         : sdm_xi(space, xi, a, b, budget, substream_seed(seed, kStreamLip, i + 1));
    const double bound = 0.5 * c0 * distance_unchecked(space, a, b);
    excess[i] = v.value - bound - 3.0 * v.std_error;
    se[i] = v.std_error;
    if (bound > 0.0) ratio[i] = v.value / bound;
  });
  VerificationReport r;
  r.name = "lipschitz_comparison";
  r.kind = "upper_bound";
  r.lhs = pairs.empty() ? 0.0 : *std::max_element(excess.begin(), excess.end());
  r.rhs = 0.0;
  r.tolerance = space.is_finite() ? 1e-12 : 1e-9;
  r.std_error = 0.0;
  r.space = space.name();
  r.xi = xi.name();
  r.seed = seed;
  r.values["c0"] = c0;
  r.values["pairs"] = static_cast<double>(pairs.size());
  r.values["max_ratio"] = ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
  r.values["max_pair_std_error"] = se.empty() ? 0.0 : *std::max_element(se.begin(), se.end());
  r.notes["statement"] = "max over pairs of sdm_xi - c0*theta/2 - 3*SE";
  return r.finalize();
}

}  // namespace metdisc
