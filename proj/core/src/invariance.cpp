#include "metdisc/invariance.hpp"

#include "metdisc/errors.hpp"
#include "metdisc/finite_exact.hpp"
#include "metdisc/montecarlo.hpp"
#include "metdisc/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace metdisc {
namespace {

constexpr std::uint64_t kStreamA0 = 0x613030ULL;
constexpr std::uint64_t kStreamA1 = 0x613031ULL;
constexpr std::uint64_t kStreamLambda = 0x6c616d62ULL;
constexpr std::uint64_t kStreamOmega = 0x6f6d6567ULL;
constexpr std::uint64_t kStreamPairs = 0x7061697273ULL;
constexpr std::uint64_t kStreamSpot = 0x73706f74ULL;

const FiniteSpace& finite_of(const SpaceDescriptor& space, const char* what) {
  const auto* f = space.get_if<FiniteSpace>();
  if (!f) throw ConfigError(std::string(what) + " needs a finite space");
  return *f;
}

std::vector<FiniteEngine<Rational>::Atom> rational_atoms(const RadialMeasure& xi) {
  if (xi.has_density() || !xi.has_atoms())
    throw ConfigError("exact evaluation needs an atomic radial measure, got '" + xi.name() + "'");
  return FiniteEngine<Rational>::atoms_of(xi);
}

VerificationReport exact_report(std::string name, const Rational& lhs, const Rational& rhs) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = to_double(lhs);
  r.rhs = to_double(rhs);
  r.exact = true;
  const Rational res = lhs - rhs;
  r.exact_residual = to_string(res);
  r.finalize();
  r.residual = to_double(res);
  r.pass = res == 0;
  return r;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

double power_term(int d, double exponent_shift, double lip, double c, std::size_t N) {
  // d 2^(d - shift) Lip c N^(1 - 1/d)
  return d * std::ldexp(1.0, d - static_cast<int>(exponent_shift)) * lip * c *
         std::pow(static_cast<double>(N), 1.0 - 1.0 / d);
}

}  // namespace

// ------------------------------------------------------------ functionals

ProofFunctionals::ProofFunctionals(const SpaceDescriptor& space, std::size_t budget, std::uint64_t seed,
                                   bool force_mc)
    : space_(space), budget_(budget), seed_(seed), force_mc_(force_mc) {}

std::optional<double> ProofFunctionals::v(double r) const {
  if (auto sp = space_.as_sphere()) return sphere::cap_volume(sp->dim, sphere::geodesic_radius(sp->metric, r));
  if (const auto* f = space_.get_if<FiniteSpace>(); f && space_.distance_invariant()) {
    FiniteEngine<double> eng(*f);
    return eng.ball_volume(0, r);
  }
  return std::nullopt;
}

MeanEstimate ProofFunctionals::a0(double r) const {
  if (const auto* f = space_.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    return {eng.a0(r), 0.0, 0, Method::exact_enumeration};
  }
  if (!force_mc_) {
    if (auto vr = v(r)) return {*vr * *vr, 0.0, 0, Method::closed_form};
  }
  return mc_mean(budget_, seed_, kStreamA0, [&](Rng& rng) {
    const Point y = sample_one(space_, rng), z1 = sample_one(space_, rng), z2 = sample_one(space_, rng);
    return distance_unchecked(space_, y, z1) <= r && distance_unchecked(space_, y, z2) <= r ? 1.0 : 0.0;
  });
}

MeanEstimate ProofFunctionals::a1(double r, const Point& x) const {
  validate_point(space_, x);
  if (const auto* f = space_.get_if<FiniteSpace>()) {
    FiniteEngine<double> eng(*f);
    return {eng.a1(r, x.label_index()), 0.0, 0, Method::exact_enumeration};
  }
  if (!force_mc_) {
    if (auto vr = v(r)) return {0.5 * *vr - *vr * *vr, 0.0, 0, Method::closed_form};
  }
  return mc_mean(budget_, seed_, kStreamA1, [&](Rng& rng) {
    const Point y = sample_one(space_, rng), z = sample_one(space_, rng), w = sample_one(space_, rng);
    const double half_v = distance_unchecked(space_, x, w) <= r ? 0.5 : 0.0;
    const double cross = distance_unchecked(space_, x, y) <= r && distance_unchecked(space_, y, z) <= r ? 1.0 : 0.0;
    return half_v - cross;
  });
}

MeanEstimate ProofFunctionals::a1_sum(double r, const PointSet& xs) const {
  MeanEstimate out{0.0, 0.0, 0, Method::closed_form};
  double var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const ProofFunctionals sub(space_, budget_, substream_seed(seed_, kStreamA1, i + 1), force_mc_);
    const MeanEstimate e = sub.a1(r, xs[i]);
    out.value += e.value;
    var += e.std_error * e.std_error;
    out.n_samples += e.n_samples;
    out.method = e.method;
  }
  out.std_error = std::sqrt(var);
  return out;
}

// ------------------------------------------------------------ exact checks

void require_distance_invariant(const FiniteSpace& f) {
  for (double r : f.radii()) {
    Rational first = 0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      Rational v = 0;
      for (std::size_t y = 0; y < f.size(); ++y)
        if (f.dist(c, y) <= r) v += f.weight_exact(y);
      if (c == 0) {
        first = v;
      } else if (v != first) {
        std::ostringstream s;
        s << "space is not distance-invariant: ball volumes at r = " << r << " differ between centres '"
          << f.label(0) << "' (" << to_string(first) << ") and '" << f.label(c) << "' (" << to_string(v) << ")";
        throw PreconditionError(s.str());
      }
    }
  }
}

VerificationReport check_invariance_exact(const SpaceDescriptor& space, const RadialMeasure& xi,
                                          const PointSet& points, bool use_rational) {
  const FiniteSpace& f = finite_of(space, "exact invariance");
  require_distance_invariant(f);
  for (const auto& p : points) validate_point(space, p);
  const auto labels = labels_of(points);
  const std::size_t N = points.size();
  VerificationReport rep;
  if (use_rational) {
    FiniteEngine<Rational> eng(f);
    const auto atoms = rational_atoms(xi);
    const Rational lambda = eng.quad_disc_xi(labels, atoms);
    const Rational sdm = eng.sdm_xi_sum(labels, atoms);
    const Rational nn = Rational(static_cast<long long>(N * N));
    const Rational rhs = eng.mean_sdm_xi(atoms) * nn;
    rep = exact_report("invariance_exact", lambda + sdm, rhs);
    rep.values["lambda"] = to_double(lambda);
    rep.values["sdm_sum"] = to_double(sdm);
  } else {
    FiniteEngine<double> eng(f);
    const auto atoms = FiniteEngine<double>::atoms_of(xi);
    if (xi.has_density()) throw ConfigError("exact evaluation needs an atomic radial measure, got '" + xi.name() + "'");
    const double lambda = eng.quad_disc_xi(labels, atoms);
    const double sdm = eng.sdm_xi_sum(labels, atoms);
    const double nn = static_cast<double>(N * N);
    rep = equality_report("invariance_exact", lambda + sdm, eng.mean_sdm_xi(atoms) * nn, 1e-12 * std::max(nn, 1.0),
                          0.0);
    rep.values["lambda"] = lambda;
    rep.values["sdm_sum"] = sdm;
  }
  rep.space = space.name();
  rep.xi = xi.name();
  rep.N = N;
  rep.notes["arithmetic"] = use_rational ? "rational" : "double";
  return rep;
}

VerificationReport check_kernel_identity(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2) {
  const FiniteSpace& f = finite_of(space, "kernel identity");
  validate_point(space, y1);
  validate_point(space, y2);
  FiniteEngine<Rational> eng(f);
  const std::size_t a = y1.label_index(), b = y2.label_index();
  auto rep = exact_report("kernel_identity", eng.kernel_r(r, a, b) + eng.sdm_r(r, a, b),
                          eng.a0(r) + eng.a1(r, a) + eng.a1(r, b));
  rep.space = space.name();
  rep.values["r"] = r;
  return rep;
}

VerificationReport check_kernel_shortcut(const SpaceDescriptor& space, double r, const Point& y1, const Point& y2) {
  const FiniteSpace& f = finite_of(space, "kernel shortcut");
  require_distance_invariant(f);
  validate_point(space, y1);
  validate_point(space, y2);
  FiniteEngine<Rational> eng(f);
  const std::size_t a = y1.label_index(), b = y2.label_index();
  auto rep = exact_report("kernel_shortcut", eng.kernel_r(r, a, b) + eng.sdm_r(r, a, b), eng.mean_sdm_r(r));
  rep.space = space.name();
  rep.values["r"] = r;
  return rep;
}

// ------------------------------------------------------------ pointwise

VerificationReport check_pointwise_identity(const SpaceDescriptor& space, double r, const PointSet& points,
                                            const PointwiseOptions& opts) {
  for (const auto& p : points) validate_point(space, p);
  const std::size_t N = points.size();
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<Rational> eng(*f);
    const auto labels = labels_of(points);
    const Rational n = Rational(static_cast<long long>(N));
    Rational a1 = 0;
    for (auto x : labels) a1 += eng.a1(r, x);
    auto rep = exact_report("pointwise_identity", eng.quad_disc_r(labels, r) + eng.sdm_r_sum(labels, r),
                            n * n * eng.a0(r) + 2 * n * a1);
    rep.space = space.name();
    rep.N = N;
    rep.values["r"] = r;
    return rep;
  }
  const double n = static_cast<double>(N);
  DiscOptions d;
  d.n_outer = opts.budget;
  d.seed = substream_seed(opts.seed, kStreamLambda);
  const DiscrepancyEstimate lambda = quad_disc_r(space, points, r, d);
  const MeanEstimate sdm = pair_sum_estimate(points, MetricSelector::sdm_radius(r), space, opts.budget,
                                             substream_seed(opts.seed, kStreamPairs));
  const ProofFunctionals pf(space, opts.budget, opts.seed, opts.force_mc);
  const MeanEstimate a0 = pf.a0(r);
  const MeanEstimate a1 = pf.a1_sum(r, points);
  const double se = std::sqrt(lambda.std_error * lambda.std_error + sdm.std_error * sdm.std_error +
                              std::pow(n * n * a0.std_error, 2) + std::pow(2.0 * n * a1.std_error, 2));
  auto rep = equality_report("pointwise_identity", lambda.value + sdm.value, n * n * a0.value + 2.0 * n * a1.value,
                             1e-9 * std::max(1.0, n * n), se);
  rep.space = space.name();
  rep.N = N;
  rep.seed = opts.seed;
  rep.values["r"] = r;
  rep.values["lambda"] = lambda.value;
  rep.values["sdm_sum"] = sdm.value;
  rep.values["a0"] = a0.value;
  rep.values["a1_sum"] = a1.value;
  rep.notes["functionals"] = std::string(to_string(a0.method));
  return rep;
}

VerificationReport check_pointwise_identity(const SpaceDescriptor& space, const RadialMeasure& xi,
                                            const PointSet& points, const PointwiseOptions& opts) {
  for (const auto& p : points) validate_point(space, p);
  const std::size_t N = points.size();
  if (const auto* f = space.get_if<FiniteSpace>()) {
    FiniteEngine<Rational> eng(*f);
    const auto atoms = rational_atoms(xi);
    const auto labels = labels_of(points);
    const Rational n = Rational(static_cast<long long>(N));
    Rational lhs = 0, rhs = 0;
    for (const auto& at : atoms) {
      Rational a1 = 0;
      for (auto x : labels) a1 += eng.a1(at.radius, x);
      lhs += at.mass * (eng.quad_disc_r(labels, at.radius) + eng.sdm_r_sum(labels, at.radius));
      rhs += at.mass * (n * n * eng.a0(at.radius) + 2 * n * a1);
    }
    auto rep = exact_report("pointwise_identity_xi", lhs, rhs);
    rep.space = space.name();
    rep.xi = xi.name();
    rep.N = N;
    return rep;
  }
  const ProofFunctionals pf(space, opts.budget, opts.seed, false);
  if (!pf.v(0.0)) throw ConfigError("radial pointwise identity needs a finite or distance-invariant space");
  const double n = static_cast<double>(N);
  const double a0 = xi.integrate([&](double r) { return std::pow(*pf.v(r), 2); }, 1e-10).value;
  const double a1 = xi.integrate([&](double r) {
                          const double v = *pf.v(r);
                          return 0.5 * v - v * v;
                        },
                        1e-10)
                        .value;
  DiscOptions d;
  d.n_outer = opts.budget;
  d.seed = substream_seed(opts.seed, kStreamLambda);
  const DiscrepancyEstimate lambda = quad_disc_xi(space, points, xi, d);
  const MeanEstimate sdm = pair_sum_estimate(points, MetricSelector::sdm(std::make_shared<RadialMeasure>(xi)), space,
                                             opts.budget, substream_seed(opts.seed, kStreamPairs));
  auto rep = equality_report("pointwise_identity_xi", lambda.value + sdm.value, n * n * a0 + 2.0 * n * n * a1,
                             1e-8 * std::max(1.0, n * n), std::hypot(lambda.std_error, sdm.std_error));
  rep.space = space.name();
  rep.xi = xi.name();
  rep.N = N;
  rep.seed = opts.seed;
  return rep;
}

// ------------------------------------------------------------ probabilistic

VerificationReport check_probabilistic_invariance(const SpaceDescriptor& space, const SpacePartition& R,
                                                  const RadialMeasure& xi, const ProbabilisticOptions& opts) {
  if (opts.n_samples < 50) throw InputError("probabilistic invariance needs at least 50 samples");
  const std::size_t N = R.size();
  const double nn = static_cast<double>(N) * static_cast<double>(N);
  const auto xi_ptr = std::make_shared<RadialMeasure>(xi);
  const MeanEstimate mean = mean_sdm_xi(space, xi, 1000000, opts.seed, 1e-10);
  RunningStats stats, lambda_stats, sdm_stats;
  for (std::size_t k = 0; k < opts.n_samples; ++k) {
    const OmegaSample w = sample_omega(R, substream_seed(opts.seed, kStreamOmega, k));
    DiscOptions d;
    d.n_outer = opts.n_outer;
    d.radial_tol = opts.radial_tol;
    d.seed = substream_seed(opts.seed, kStreamLambda, k);
    const DiscrepancyEstimate lambda = quad_disc_xi(space, w.points, xi, d);
    const MeanEstimate sdm = pair_sum_estimate(w.points, MetricSelector::sdm(xi_ptr), space, opts.n_outer,
                                               substream_seed(opts.seed, kStreamPairs, k));
    stats.add(lambda.value + sdm.value);
    lambda_stats.add(lambda.value);
    sdm_stats.add(sdm.value);
  }
  auto rep = equality_report("probabilistic_invariance", stats.mean(), mean.value * nn, 1e-8 * nn,
                             std::hypot(stats.std_error(), nn * mean.std_error));
  rep.space = space.name();
  rep.xi = xi.name();
  rep.N = N;
  rep.seed = opts.seed;
  rep.values["n_samples"] = static_cast<double>(opts.n_samples);
  rep.values["n_outer"] = static_cast<double>(opts.n_outer);
  rep.values["mean_lambda"] = lambda_stats.mean();
  rep.values["mean_sdm_sum"] = sdm_stats.mean();
  rep.values["mean_sdm"] = mean.value;
  if (!rep.pass && opts.rerun) {
    ProbabilisticOptions again = opts;
    again.n_outer *= 4;
    again.seed = substream_seed(opts.seed, 0x7265ULL);
    again.rerun = false;
    auto second = check_probabilistic_invariance(space, R, xi, again);
    second.notes["rerun"] = "first run residual " + fmt(rep.residual) + " with std_error " + fmt(rep.std_error);
    return second;
  }
  return rep;
}

// ------------------------------------------------------------ Stolarsky

StolarskyConstant stolarsky_alpha(int d, std::size_t n_pairs, std::size_t budget, std::uint64_t seed) {
  if (d != 1 && d != 2) throw ConfigError("Stolarsky constant is available for S^1 and S^2 only");
  if (n_pairs < 2) throw InputError("need at least two pairs");
  const SpaceDescriptor space = SpaceDescriptor::sphere(d, SphereMetric::geodesic);
  const RadialMeasure xi = RadialMeasure::natural();
  std::vector<std::pair<Point, Point>> pairs;
  Rng rng(seed, kStreamPairs);
  while (pairs.size() < n_pairs) {
    Point a = sample_one(space, rng), b = sample_one(space, rng);
    if (sphere::chord(a.x, b.x) > 1e-6) pairs.emplace_back(std::move(a), std::move(b));
  }
  std::vector<double> ratio(n_pairs), mc_ratio(n_pairs), mc_se(n_pairs);
  parallel_for(n_pairs, [&](std::size_t i) {
    const auto& [a, b] = pairs[i];
    const double tau = sphere::chord(a.x, b.x);
    ratio[i] = sdm_xi_direct(space, xi, a, b, 1e-12).value / tau;
    const MeanEstimate mc = sdm_xi(space, xi, a, b, budget, substream_seed(seed, kStreamA0, i));
    mc_ratio[i] = mc.value / tau;
    mc_se[i] = mc.std_error / tau;
  });
  RunningStats s, m;
  double mc_var = 0.0;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    s.add(ratio[i]);
    m.add(mc_ratio[i]);
    mc_var += mc_se[i] * mc_se[i];
  }
  StolarskyConstant out;
  out.d = d;
  out.n_pairs = n_pairs;
  out.c = s.mean();
  out.std_error = s.std_error();
  for (double r : ratio) out.ratio_dispersion = std::max(out.ratio_dispersion, std::abs(r - out.c));
  out.tolerance = 3.0 * out.std_error + 1e-9 * std::abs(out.c);
  out.mc_c = m.mean();
  out.mc_std_error = std::sqrt(mc_var) / static_cast<double>(n_pairs);
  if (!(out.c > 0.0) || out.ratio_dispersion > out.tolerance) {
    std::ostringstream msg;
    msg << "sdm(natural)/chordal ratio is not constant on S^" << d << ": dispersion " << out.ratio_dispersion
        << " exceeds " << out.tolerance;
    throw ProportionalityError(msg.str());
  }
  out.alpha = 1.0 / out.c;
  return out;
}

VerificationReport check_stolarsky(const SpaceDescriptor& space, const PointSet& points,
                                   const StolarskyConstant& alpha, const DiscOptions& opts) {
  const auto sp = space.as_sphere();
  if (!sp) throw ConfigError("Stolarsky identity needs a sphere");
  if (sp->dim != alpha.d) throw ConfigError("Stolarsky constant was measured on a different sphere");
  const SpaceDescriptor geo = SpaceDescriptor::sphere(sp->dim, SphereMetric::geodesic);
  for (const auto& p : points) validate_point(geo, p);
  const double n = static_cast<double>(points.size());
  const RadialMeasure xi = RadialMeasure::natural();
  const DiscrepancyEstimate lambda = quad_disc_xi(geo, points, xi, opts);
  const double tau = pair_sum(points, MetricSelector::chordal(), geo);
  const double mean_tau = mean_metric(geo, MetricSelector::chordal()).value;
  const double rhs = mean_tau * n * n;
  auto rep = equality_report("stolarsky", alpha.alpha * lambda.value + tau, rhs, 1e-9 * std::max(rhs, 1.0),
                             alpha.alpha * lambda.std_error);
  rep.space = geo.name();
  rep.xi = xi.name();
  rep.N = points.size();
  rep.seed = opts.seed;
  rep.values["alpha"] = alpha.alpha;
  rep.values["lambda"] = lambda.value;
  rep.values["lambda_std_error"] = lambda.std_error;
  rep.values["chordal_sum"] = tau;
  rep.values["relative_residual"] = rhs > 0.0 ? std::abs(rep.residual) / rhs : std::abs(rep.residual);
  return rep;
}

// ------------------------------------------------------------ bounds

std::vector<VerificationReport> bound_report(const SpaceDescriptor& space, const Chart& chart,
                                             const MetricSelector& metric, double c0, std::size_t N,
                                             const BoundOptions& opts) {
  if (N == 0) throw InputError("bound report needs N >= 1");
  if (opts.n_samples == 0) throw InputError("bound report needs at least one sample");
  if (!(c0 > 0.0)) throw InputError("comparison constant c0 must be positive");
  const int d = chart.dim;
  const double n = static_cast<double>(N);

  // rho <= c0 theta on random pairs.
  {
    const PointSet pts = sample_mu(space, substream_seed(opts.seed, kStreamSpot), 2 * opts.spot_pairs);
    for (std::size_t i = 0; i < opts.spot_pairs; ++i) {
      const Point &a = pts[2 * i], &b = pts[2 * i + 1];
      double rho = 0.0, se = 0.0;
      if (has_deterministic_metric(space, metric)) {
        rho = metric_value(space, metric, a, b);
      } else {
        const MeanEstimate e = metric.kind == MetricKind::sdm_r
                                   ? sdm_r(space, a, b, metric.r, opts.budget, opts.seed + i)
                                   : sdm_xi(space, *metric.xi, a, b, opts.budget, opts.seed + i);
        rho = e.value;
        se = e.std_error;
      }
      const double theta = distance_unchecked(space, a, b);
      if (rho > c0 * theta + 3.0 * se + 1e-12) {
        std::ostringstream msg;
        msg << "metric " << metric.name() << " violates rho <= c0 theta on a sampled pair: rho = " << rho
            << ", c0 theta = " << c0 * theta;
        throw PreconditionError(msg.str());
      }
    }
  }

  const CubePartition P = build_cube_partition(*chart.nu, N, opts.policy);
  const SpacePartition R = pushforward_partition(chart, P);
  const double diam1 = R.diam1_theta;
  const double lip = R.lip_bound;

  auto xi = opts.xi ? opts.xi : metric.xi;
  const std::size_t lambda_draws = xi ? (opts.lambda_samples ? std::min(opts.lambda_samples, opts.n_samples)
                                                             : opts.n_samples)
                                      : 0;
  const double xi_mean = xi ? mean_sdm_xi(space, *xi, 1000000, opts.seed, 1e-10).value : 0.0;
  const auto xi_sel = xi ? MetricSelector::sdm(xi) : MetricSelector::base();

  RunningStats rho_stats, lambda_stats;
  double best = -1.0, best_se = 0.0;
  for (std::size_t k = 0; k < opts.n_samples; ++k) {
    const OmegaSample w = sample_omega(R, substream_seed(opts.seed, kStreamOmega, k));
    const MeanEstimate rho = pair_sum_estimate(w.points, metric, space, opts.budget,
                                               substream_seed(opts.seed, kStreamPairs, k));
    rho_stats.add(rho.value);
    if (rho.value > best) {
      best = rho.value;
      best_se = rho.std_error;
    }
    if (k < lambda_draws) {
      double lambda = 0.0;
      if (space.distance_invariant()) {
        const MeanEstimate s =
            metric.kind == MetricKind::sdm_xi && metric.xi == xi
                ? rho
                : pair_sum_estimate(w.points, xi_sel, space, opts.budget, substream_seed(opts.seed, kStreamA0, k));
        lambda = xi_mean * n * n - s.value;
      } else {
        DiscOptions dopt;
        dopt.n_outer = opts.budget;
        dopt.seed = substream_seed(opts.seed, kStreamLambda, k);
        lambda = quad_disc_xi(space, w.points, *xi, dopt).value;
      }
      lambda_stats.add(lambda);
    }
  }

  std::vector<VerificationReport> out;
  auto stamp = [&](VerificationReport r) {
    r.space = space.name();
    r.xi = xi ? xi->name() : std::string();
    r.N = N;
    r.seed = opts.seed;
    r.values["d"] = d;
    r.values["lip_bound"] = lip;
    r.values["diam1_theta"] = diam1;
    r.values["samples"] = static_cast<double>(opts.n_samples);
    r.notes["metric"] = metric.name();
    out.push_back(r.finalize());
  };

  if (N > 1) {
    const MeanEstimate mean = mean_metric(space, metric, {opts.budget * 10, opts.seed, std::nullopt});
    const double scale = mean.value * n * n;
    VerificationReport a = upper_bound_report("expectation_lower_bound", scale - c0 * diam1 * n, rho_stats.mean(),
                                              1e-9 * scale, std::hypot(rho_stats.std_error(), n * n * mean.std_error));
    a.values["mean_rho"] = mean.value;
    a.values["c0"] = c0;
    stamp(a);
    const double C = power_term(d, 1, lip, c0, N);
    VerificationReport b = upper_bound_report("witness_lower_bound", scale - C, best, 1e-9 * scale,
                                              std::hypot(best_se, n * n * mean.std_error));
    b.values["constant"] = d * std::ldexp(1.0, d - 1) * lip;
    b.values["mean_rho"] = mean.value;
    b.notes["meaning"] = "best observed configuration certifies the supremum from below";
    stamp(b);
  }
  if (xi) {
    if (!xi->c0()) throw ConfigError("radial measure '" + xi->name() + "' has no Lipschitz constant c0");
    const double c0xi = *xi->c0();
    const double se = lambda_stats.std_error();
    VerificationReport c1 =
        upper_bound_report("lambda_diameter_bound", lambda_stats.mean(), 0.5 * c0xi * diam1 * n, 1e-9, se);
    c1.values["c0_xi"] = c0xi;
    c1.values["lambda_samples"] = static_cast<double>(lambda_draws);
    stamp(c1);
    VerificationReport c2 =
        upper_bound_report("lambda_stated_bound", lambda_stats.mean(), power_term(d, 3, lip, c0xi, N), 1e-9, se);
    c2.values["c0_xi"] = c0xi;
    c2.notes["constant"] = "d 2^(d-3) Lip c0(xi)";
    stamp(c2);
    VerificationReport c3 =
        upper_bound_report("lambda_proof_bound", lambda_stats.mean(), power_term(d, 2, lip, c0xi, N), 1e-9, se);
    c3.values["c0_xi"] = c0xi;
    c3.notes["constant"] = "d 2^(d-2) Lip c0(xi)";
    stamp(c3);
  }
  return out;
}

VerificationReport check_extremal_alignment(const SpaceDescriptor& space, const RadialMeasure& xi,
                                            const std::vector<PointSet>& candidates) {
  const FiniteSpace& f = finite_of(space, "extremal alignment");
  if (candidates.empty()) throw InputError("candidate family is empty");
  FiniteEngine<Rational> eng(f);
  const auto atoms = rational_atoms(xi);
  std::vector<Rational> lambda, sdm;
  for (const auto& c : candidates) {
    if (c.size() != candidates.front().size()) throw InputError("candidates must all have the same size");
    const auto labels = labels_of(c);
    lambda.push_back(eng.quad_disc_xi(labels, atoms));
    sdm.push_back(eng.sdm_xi_sum(labels, atoms));
  }
  const Rational lo = *std::min_element(lambda.begin(), lambda.end());
  const Rational hi = *std::max_element(sdm.begin(), sdm.end());
  long long mismatches = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if ((lambda[i] == lo) != (sdm[i] == hi)) ++mismatches;
  auto rep = exact_report("extremal_alignment", Rational(mismatches), Rational(0));
  rep.space = space.name();
  rep.xi = xi.name();
  rep.N = candidates.front().size();
  rep.values["min_lambda"] = to_double(lo);
  rep.values["max_sdm_sum"] = to_double(hi);
  rep.values["candidates"] = static_cast<double>(candidates.size());
  return rep;
}

}  // namespace metdisc
