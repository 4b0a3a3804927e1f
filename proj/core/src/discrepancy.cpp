#include "metdisc/discrepancy.hpp"

#include "metdisc/energy.hpp"
#include "metdisc/errors.hpp"
#include "metdisc/finite_exact.hpp"
#include "metdisc/montecarlo.hpp"
#include "metdisc/sphere.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>

namespace metdisc {
namespace {

constexpr std::uint64_t kStreamOuter = 0x6f75746572ULL;
constexpr std::uint64_t kStreamKernel = 0x6b65726eULL;

using VolumeFn = std::function<double(const Point&, double)>;

// v_r(y) in closed form, when the space has one.
std::optional<VolumeFn> closed_volume(const SpaceDescriptor& space) {
  if (auto sp = space.as_sphere()) {
    return VolumeFn([d = sp->dim, m = sp->metric](const Point&, double r) {
      return sphere::cap_volume(d, sphere::geodesic_radius(m, r));
    });
  }
  const PointSet probe = sample_mu(space, 0, 1);
  if (closed_ball_volume(space, probe.front(), 0.5 * space.diameter())) {
    return VolumeFn([&space](const Point& y, double r) { return *closed_ball_volume(space, y, r); });
  }
  return std::nullopt;
}

std::vector<double> sorted_distances(const SpaceDescriptor& space, const PointSet& points, const Point& y) {
  std::vector<double> d(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d[i] = distance_unchecked(space, points[i], y);
  std::sort(d.begin(), d.end());
  return d;
}

double count_within(const std::vector<double>& sorted, double r) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
}

// Unbiased estimate of (c - N v)^2 from an inner sample of size M giving v_hat.
double corrected_square(double c, double N, double v_hat, double M) {
  const double e = c - N * v_hat;
  return e * e - N * N * v_hat * (1.0 - v_hat) / (M - 1.0);
}

DiscrepancyEstimate from_mean(const MeanEstimate& m, std::size_t n_radial) {
  return {m.value, m.std_error, m.n_samples, n_radial, m.method};
}

void validate_all(const SpaceDescriptor& space, const PointSet& points) {
  for (const auto& p : points) validate_point(space, p);
}

void check_outer(const DiscOptions& opts) {
  if (opts.n_outer < 1000) throw InputError("Monte Carlo discrepancy needs at least 1000 outer points");
  if (opts.n_inner < 2) throw InputError("inner ball-volume sample needs at least 2 points");
}

void require_xi(const RadialMeasure& xi) {
  if (!xi.has_density() && !xi.has_atoms())
    throw ConfigError("radial measure '" + xi.name() + "' has neither a density nor atoms");
}

}  // namespace

KernelPath parse_kernel_path(std::string_view name) {
  if (name == "automatic" || name == "auto") return KernelPath::automatic;
  if (name == "enumeration") return KernelPath::enumeration;
  if (name == "shortcut") return KernelPath::shortcut;
  throw ConfigError("unknown kernel path '" + std::string(name) + "'");
}

double local_disc(const SpaceDescriptor& space, const PointSet& points, const Point& center, double r) {
  validate_all(space, points);
  validate_point(space, center);
  double count = 0.0;
  for (const auto& p : points)
    if (distance_unchecked(space, p, center) <= r) count += 1.0;
  double v = 0.0;
  if (auto c = closed_ball_volume(space, center, r)) v = *c;
  else v = ball_volume(space, center, r, 1000000, 0).value;
  return count - static_cast<double>(points.size()) * v;
}

DiscrepancyEstimate quad_disc_r(const SpaceDescriptor& space, const PointSet& points, double r,
                                const DiscOptions& opts) {
  validate_all(space, points);
  if (points.empty()) return {0.0, 0.0, 0, 0, Method::exact_enumeration};
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    const auto labels = labels_of(points);
    return {eng.quad_disc_r(labels, r), 0.0, f->size(), 0, Method::exact_enumeration};
  }
  check_outer(opts);
  const double N = static_cast<double>(points.size());
  if (auto vol = closed_volume(space)) {
    return from_mean(mc_mean(opts.n_outer, opts.seed, kStreamOuter,
                             [&](Rng& rng) {
                               const Point y = sample_one(space, rng);
                               double c = 0.0;
                               for (const auto& p : points)
                                 if (distance_unchecked(space, p, y) <= r) c += 1.0;
                               const double e = c - N * (*vol)(y, r);
                               return e * e;
                             }),
                     0);
  }
  const double M = static_cast<double>(opts.n_inner);
  return from_mean(mc_mean(opts.n_outer, opts.seed, kStreamOuter + 1,
                           [&](Rng& rng) {
                             const Point y = sample_one(space, rng);
                             double c = 0.0, inside = 0.0;
                             for (const auto& p : points)
                               if (distance_unchecked(space, p, y) <= r) c += 1.0;
                             for (std::size_t j = 0; j < opts.n_inner; ++j)
                               if (distance_unchecked(space, sample_one(space, rng), y) <= r) inside += 1.0;
                             return corrected_square(c, N, inside / M, M);
                           }),
                   0);
}

DiscrepancyEstimate quad_disc_xi(const SpaceDescriptor& space, const PointSet& points, const RadialMeasure& xi,
                                 const DiscOptions& opts) {
  require_xi(xi);
  validate_all(space, points);
  if (points.empty()) return {0.0, 0.0, 0, 0, Method::exact_enumeration};
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    const auto labels = labels_of(points);
    if (!xi.has_density())
      return {eng.quad_disc_xi(labels, FiniteEngine<double>::atoms_of(xi)), 0.0, f->size(), xi.atoms().size(),
              Method::exact_enumeration};
    const QuadResult q = xi.integrate([&](double r) { return eng.quad_disc_r(labels, r); }, opts.radial_tol,
                                      f->radii());
    return {q.value, 0.0, f->size(), q.evaluations, Method::quadrature};
  }
  check_outer(opts);
  const double N = static_cast<double>(points.size());
  std::atomic<std::size_t> nodes{0};
  MeanEstimate m;
  if (auto vol = closed_volume(space)) {
    m = mc_mean(opts.n_outer, opts.seed, kStreamOuter + 2, [&](Rng& rng) {
      const Point y = sample_one(space, rng);
      const auto d = sorted_distances(space, points, y);
      const QuadResult q = xi.integrate(
          [&](double r) {
            const double e = count_within(d, r) - N * (*vol)(y, r);
            return e * e;
          },
          opts.radial_tol, d);
      nodes.fetch_add(q.evaluations, std::memory_order_relaxed);
      return q.value;
    });
  } else {
    // Integrand is piecewise constant in r between the distances to D and to
    // the inner sample, so the radial integral is an exact finite sum.
    const double M = static_cast<double>(opts.n_inner);
    m = mc_mean(opts.n_outer, opts.seed, kStreamOuter + 3, [&](Rng& rng) {
      const Point y = sample_one(space, rng);
      const auto d = sorted_distances(space, points, y);
      std::vector<double> e(opts.n_inner);
      for (auto& t : e) t = distance_unchecked(space, sample_one(space, rng), y);
      std::sort(e.begin(), e.end());
      auto g = [&](double r) { return corrected_square(count_within(d, r), N, count_within(e, r) / M, M); };
      double s = 0.0;
      for (const auto& a : xi.atoms()) s += a.mass_d * g(a.radius);
      if (xi.has_density()) {
        std::vector<double> t{xi.lower_support(), xi.upper_support()};
        for (double b : d) t.push_back(b);
        for (double b : e) t.push_back(b);
        std::sort(t.begin(), t.end());
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
          const double a = std::max(t[k], xi.lower_support()), b = std::min(t[k + 1], xi.upper_support());
          if (b > a) s += g(a) * (xi.survival(a) - xi.survival(b));
        }
        nodes.fetch_add(t.size(), std::memory_order_relaxed);
      }
      return s;
    });
  }
  const std::size_t n_radial = m.n_samples ? nodes.load() / m.n_samples : 0;
  return from_mean(m, n_radial);
}

MeanEstimate disc_kernel(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2, KernelPath path,
                         const DiscOptions& opts) {
  validate_point(space, y1);
  validate_point(space, y2);
  const auto* f = space.get_if<FiniteSpace>();
  if (path == KernelPath::automatic) path = f ? KernelPath::enumeration
                                        : space.distance_invariant() ? KernelPath::shortcut
                                                                     : KernelPath::automatic;
  if (path == KernelPath::enumeration) {
    if (!f) throw ConfigError("kernel enumeration needs a finite space");
    FiniteEngine<double> eng(*f);
    return {eng.kernel_r(r, y1.label_index(), y2.label_index()), 0.0, f->size(), Method::exact_enumeration};
  }
  if (path == KernelPath::shortcut) {
    if (!space.distance_invariant())
      throw ConfigError("kernel shortcut requested on space '" + space.name() + "', which is not distance-invariant");
    const MeanEstimate mean = mean_sdm_r(space, r);
    const double s = *closed_sdm_r(space, y1, y2, r);
    return {mean.value - s, 0.0, 0, f ? Method::exact_enumeration : Method::closed_form};
  }
  check_outer(opts);
  auto vol = closed_volume(space);
  const double M = static_cast<double>(opts.n_inner);
  return mc_mean(opts.n_outer, opts.seed, kStreamKernel, [&](Rng& rng) {
    const Point y = sample_one(space, rng);
    const double a = distance_unchecked(space, y1, y) <= r ? 1.0 : 0.0;
    const double b = distance_unchecked(space, y2, y) <= r ? 1.0 : 0.0;
    if (vol) {
      const double v = (*vol)(y, r);
      return (a - v) * (b - v);
    }
    double inside = 0.0;
    for (std::size_t j = 0; j < opts.n_inner; ++j)
      if (distance_unchecked(space, sample_one(space, rng), y) <= r) inside += 1.0;
    const double v = inside / M;
    return (a - v) * (b - v) - v * (1.0 - v) / (M - 1.0);
  });
}

MeanEstimate disc_kernel(const SpaceDescriptor& space, const RadialMeasure& xi, const Point& y1, const Point& y2,
                         KernelPath path, const DiscOptions& opts) {
  require_xi(xi);
  validate_point(space, y1);
  validate_point(space, y2);
  const auto* f = space.get_if<FiniteSpace>();
  if (path == KernelPath::automatic) {
    if (f) path = KernelPath::enumeration;
    else if (space.distance_invariant()) path = KernelPath::shortcut;
    else throw ConfigError("no radial kernel evaluation on space '" + space.name() + "'; use the integral path");
  }
  if (path == KernelPath::enumeration) {
    if (!f) throw ConfigError("kernel enumeration needs a finite space");
    FiniteEngine<double> eng(*f);
    const std::size_t a = y1.label_index(), b = y2.label_index();
    if (!xi.has_density())
      return {eng.kernel_xi(FiniteEngine<double>::atoms_of(xi), a, b), 0.0, f->size(), Method::exact_enumeration};
    const QuadResult q = xi.integrate([&](double r) { return eng.kernel_r(r, a, b); }, opts.radial_tol, f->radii());
    return {q.value, 0.0, f->size(), Method::quadrature};
  }
  if (!space.distance_invariant())
    throw ConfigError("kernel shortcut requested on space '" + space.name() + "', which is not distance-invariant");
  const MeanEstimate mean = mean_sdm_xi(space, xi, 100000, opts.seed, 1e-10);
  const MeanEstimate s = sdm_xi_direct(space, xi, y1, y2);
  return {mean.value - s.value, std::hypot(mean.std_error, s.std_error), 0,
          f && !xi.has_density() ? Method::exact_enumeration : Method::quadrature};
}

DiscrepancyEstimate quad_disc_r_kernel(const SpaceDescriptor& space, const PointSet& points, double r,
                                       KernelPath path, const DiscOptions&) {
  validate_all(space, points);
  const double N = static_cast<double>(points.size());
  const auto* f = space.get_if<FiniteSpace>();
  if (path == KernelPath::shortcut || (path == KernelPath::automatic && !f && space.distance_invariant())) {
    if (!space.distance_invariant())
      throw ConfigError("kernel shortcut requested on space '" + space.name() + "', which is not distance-invariant");
    const double mean = mean_sdm_r(space, r).value;
    const double sum = pair_sum(points, MetricSelector::sdm_radius(r), space);
    return {N * N * mean - sum, 0.0, 0, 0, f ? Method::exact_enumeration : Method::closed_form};
  }
  if (!f) throw ConfigError("kernel sum needs a finite or distance-invariant space");
  FiniteEngine<double> eng(*f);
  return {eng.quad_disc_r_kernel(labels_of(points), r), 0.0, f->size(), 0, Method::exact_enumeration};
}

DiscrepancyEstimate quad_disc_xi_kernel(const SpaceDescriptor& space, const PointSet& points,
                                        const RadialMeasure& xi, KernelPath path, const DiscOptions& opts) {
  require_xi(xi);
  validate_all(space, points);
  const double N = static_cast<double>(points.size());
  const auto* f = space.get_if<FiniteSpace>();
  if (path == KernelPath::shortcut || (path == KernelPath::automatic && !f && space.distance_invariant())) {
    if (!space.distance_invariant())
      throw ConfigError("kernel shortcut requested on space '" + space.name() + "', which is not distance-invariant");
    const MeanEstimate mean = mean_sdm_xi(space, xi, 100000, opts.seed, 1e-10);
    const MeanEstimate sum = pair_sum_estimate(points, MetricSelector::sdm(std::make_shared<RadialMeasure>(xi)), space,
                                               opts.n_outer, opts.seed);
    return {N * N * mean.value - sum.value, std::hypot(N * N * mean.std_error, sum.std_error), sum.n_samples, 0,
            sum.method};
  }
  if (!f) throw ConfigError("kernel sum needs a finite or distance-invariant space");
  FiniteEngine<double> eng(*f);
  const auto labels = labels_of(points);
  const auto atoms = FiniteEngine<double>::atoms_of(xi);
  if (!xi.has_density()) {
    double s = 0.0;
    for (auto a : labels)
      for (auto b : labels) s += eng.kernel_xi(atoms, a, b);
    return {s, 0.0, f->size(), atoms.size(), Method::exact_enumeration};
  }
  const QuadResult q = xi.integrate([&](double r) { return eng.quad_disc_r_kernel(labels, r); }, opts.radial_tol,
                                    f->radii());
  return {q.value, 0.0, f->size(), q.evaluations, Method::quadrature};
}

}  // namespace metdisc
