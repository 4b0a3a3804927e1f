// metdisc command-line tool: partitions, point sets, energies,
// discrepancies, verification suites and scaling tables.

#include "metdisc/discrepancy.hpp"
#include "metdisc/energy.hpp"
#include "metdisc/errors.hpp"
#include "metdisc/invariance.hpp"
#include "metdisc/io.hpp"
#include "metdisc/parallel.hpp"
#include "metdisc/partition.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace metdisc;

constexpr int kExitGateFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string space = "cube";
  int dim = 2;
  std::string density = "uniform";
  double p = 2.0;
  double mean = 0.5;
  double sigma = 0.25;
  std::string metric = "geodesic";
  std::string xi;
  std::string policy = "lexicographic";
  std::vector<std::size_t> n;
  std::uint64_t seed = 0;
  double budget = 1.0;
  std::size_t workers = 0;
  std::string out;
  std::string points;
  std::string mode = "omega";
  std::string energy_metric = "base";
  double r = -1.0;
  double c0 = 1.0;
  std::string suite;
  std::size_t samples = 0;
};

json density_json(const Options& o) {
  json d{{"name", o.density}};
  if (o.density == "power") d["p"] = o.p;
  if (o.density == "truncated_gaussian" || o.density == "gaussian") {
    d["mean"] = o.mean;
    d["sigma"] = o.sigma;
  }
  return d;
}

SphereMetric sphere_metric(const Options& o) {
  if (o.metric == "geodesic") return SphereMetric::geodesic;
  if (o.metric == "chordal") return SphereMetric::chordal;
  throw ConfigError("--metric must be geodesic or chordal");
}

std::size_t scaled(const Options& o, double base) {
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::llround(base * o.budget)));
}

std::size_t first_n(const Options& o) {
  if (o.n.empty()) throw ConfigError("--n is required");
  return o.n.front();
}

json run_config(const std::string& command, const Options& o, const SpaceBundle& b) {
  return {{"schema", schema_tag("run")},
          {"command", command},
          {"space", b.spec},
          {"xi", o.xi},
          {"n", o.n},
          {"policy", o.policy},
          {"seed", o.seed},
          {"budget", o.budget},
          {"energy_metric", o.energy_metric},
          {"r", o.r},
          {"c0", o.c0},
          {"suite", o.suite},
          {"samples", o.samples},
          {"mode", o.mode},
          {"points", o.points}};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Equal-mass finite partition grouping consecutive labels; needs uniform
// weights and N dividing the number of labels.
SpacePartition finite_block_partition(const FiniteSpace& f, std::size_t N, const std::string& name) {
  if (N == 0 || f.size() % N != 0)
    throw ConfigError("finite partitions need N dividing the number of points (" + std::to_string(f.size()) + ")");
  const std::size_t per = f.size() / N;
  std::vector<std::vector<std::size_t>> cells(N);
  for (std::size_t i = 0; i < f.size(); ++i) cells[i / per].push_back(i);
  return finite_partition(f, std::move(cells), name);
}

SpacePartition make_partition(const SpaceBundle& b, std::size_t N, OccupancyPolicy policy) {
  if (b.space->is_finite()) return finite_block_partition(b.space->finite_space(), N, b.space->name());
  if (!b.chart) throw ConfigError("space has no chart to partition");
  return pushforward_partition(*b.chart, build_cube_partition(*b.chart->nu, N, policy));
}

PointSet load_or_sample(const Options& o, const SpaceBundle& b) {
  if (!o.points.empty()) {
    std::ifstream in(o.points);
    if (!in) throw ConfigError("cannot open points file '" + o.points + "'");
    return read_points_csv(in, *b.space);
  }
  const std::size_t N = first_n(o);
  if (o.mode == "iid") return sample_mu(*b.space, o.seed, N);
  if (o.mode != "omega") throw ConfigError("--mode must be omega or iid");
  return sample_omega(make_partition(b, N, parse_policy(o.policy)), o.seed).points;
}

MetricSelector metric_selector(const Options& o, const SpaceBundle& b) {
  if (o.energy_metric == "base") return MetricSelector::base();
  if (o.energy_metric == "chordal") return MetricSelector::chordal();
  if (o.energy_metric == "sdm_r") {
    if (o.r < 0.0) throw ConfigError("--energy-metric sdm_r needs --r");
    return MetricSelector::sdm_radius(o.r);
  }
  if (o.energy_metric == "sdm") {
    if (o.xi.empty()) throw ConfigError("--energy-metric sdm needs --xi");
    return MetricSelector::sdm(radial_from_name(o.xi, *b.space));
  }
  throw ConfigError("unknown --energy-metric '" + o.energy_metric + "'");
}

std::shared_ptr<const RadialMeasure> default_xi(const Options& o, const SpaceBundle& b) {
  if (!o.xi.empty()) return radial_from_name(o.xi, *b.space);
  if (b.space->is_finite()) return radial_from_name("counting", *b.space);
  if (b.space->as_sphere()) return radial_from_name("natural", *b.space);
  return radial_from_name("lebesgue", *b.space);
}

// ------------------------------------------------------------ commands

int cmd_partition(const Options& o, const SpaceBundle& b) {
  const std::size_t N = first_n(o);
  if (b.space->is_finite()) throw ConfigError("partition builds chart partitions; finite spaces have none");
  const CubePartition P = build_cube_partition(*b.chart->nu, N, parse_policy(o.policy));
  const DiameterSummary diam = average_diameter(P);
  json j = to_json(P, diam);
  const SpacePartition R = pushforward_partition(*b.chart, P);
  j["chart"] = b.chart->name;
  j["lip_bound"] = R.lip_bound;
  j["diam1_theta_bound"] = R.diam1_theta;
  j["config"] = run_config("partition", o, b);
  Output out(o.out);
  out.stream() << std::setprecision(17) << j.dump(2) << "\n";
  return 0;
}

int cmd_sample(const Options& o, const SpaceBundle& b) {
  const std::size_t N = first_n(o);
  const json cfg = run_config("sample", o, b);
  Output out(o.out);
  if (o.mode == "iid") {
    write_points_csv(out.stream(), *b.space, sample_mu(*b.space, o.seed, N), nullptr, &cfg);
    return 0;
  }
  if (o.mode != "omega") throw ConfigError("--mode must be omega or iid");
  const OmegaSample w = sample_omega(make_partition(b, N, parse_policy(o.policy)), o.seed);
  write_points_csv(out.stream(), *b.space, w.points, &w.cells, &cfg);
  return 0;
}

int cmd_energy(const Options& o, const SpaceBundle& b) {
  const PointSet pts = load_or_sample(o, b);
  const MetricSelector m = metric_selector(o, b);
  const MeanEstimate sum = pair_sum_estimate(pts, m, *b.space, scaled(o, 100000), o.seed);
  const MeanEstimate mean = mean_metric(*b.space, m, {scaled(o, 1000000), o.seed, std::nullopt});
  const double n = static_cast<double>(pts.size());
  json j{{"schema", schema_tag("energy")},
         {"metric", m.name()},
         {"value", sum.value},
         {"std_error", sum.std_error},
         {"method", std::string(to_string(sum.method))},
         {"n", pts.size()},
         {"seed", o.seed},
         {"mean_metric", to_json(mean)},
         {"mean_times_n2", mean.value * n * n},
         {"config", run_config("energy", o, b)}};
  Output out(o.out);
  out.stream() << std::setprecision(17) << j.dump(2) << "\n";
  return 0;
}

int cmd_discrepancy(const Options& o, const SpaceBundle& b) {
  const PointSet pts = load_or_sample(o, b);
  DiscOptions d;
  d.n_outer = scaled(o, 100000);
  d.seed = o.seed;
  json j{{"schema", schema_tag("discrepancy")}, {"seed", o.seed}, {"n", pts.size()}};
  DiscrepancyEstimate e;
  if (o.r >= 0.0) {
    e = quad_disc_r(*b.space, pts, o.r, d);
    j["quantity"] = "lambda_r";
    j["r"] = o.r;
  } else {
    const auto xi = default_xi(o, b);
    e = quad_disc_xi(*b.space, pts, *xi, d);
    j["quantity"] = "lambda_xi";
    j["xi"] = xi->name();
    j["r"] = nullptr;
  }
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n_outer"] = e.n_outer;
  j["n_radial"] = e.n_radial;
  j["method"] = std::string(to_string(e.method));
  j["config"] = run_config("discrepancy", o, b);
  Output out(o.out);
  out.stream() << std::setprecision(17) << j.dump(2) << "\n";
  return 0;
}

// Random multiset of N labels.
PointSet random_labels(std::size_t size, std::size_t N, Rng& rng) {
  PointSet pts;
  for (std::size_t i = 0; i < N; ++i) pts.push_back(Point::label(rng.below(size)));
  return pts;
}

std::vector<VerificationReport> suite_invariance(const Options& o, const SpaceBundle& b) {
  if (!b.space->is_finite()) throw ConfigError("the invariance suite runs on finite spaces");
  const auto xi = default_xi(o, b);
  const std::size_t size = b.space->finite_space().size();
  const std::size_t count = o.samples ? o.samples : 100;
  std::vector<VerificationReport> out;
  Rng rng(o.seed, 0x696e76ULL);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t N = o.n.empty() ? 1 + rng.below(size) : o.n[k % o.n.size()];
    const PointSet pts = random_labels(size, N, rng);
    out.push_back(check_invariance_exact(*b.space, *xi, pts, true));
    out.push_back(check_invariance_exact(*b.space, *xi, pts, false));
  }
  return out;
}

std::vector<VerificationReport> suite_kernel(const Options&, const SpaceBundle& b) {
  if (!b.space->is_finite()) throw ConfigError("the kernel suite runs on finite spaces");
  const FiniteSpace& f = b.space->finite_space();
  const bool invariant = b.space->distance_invariant();
  std::vector<VerificationReport> out;
  for (double r : f.radii())
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) {
        out.push_back(check_kernel_identity(*b.space, r, Point::label(i), Point::label(j)));
        if (invariant) out.push_back(check_kernel_shortcut(*b.space, r, Point::label(i), Point::label(j)));
      }
  return out;
}

std::vector<VerificationReport> suite_pointwise(const Options& o, const SpaceBundle& b) {
  const std::size_t N = first_n(o);
  const SpacePartition R = make_partition(b, N, parse_policy(o.policy));
  const std::size_t count = o.samples ? o.samples : 50;
  std::vector<VerificationReport> out;
  std::vector<double> radii;
  if (b.space->is_finite()) radii = b.space->finite_space().radii();
  else radii = {o.r >= 0.0 ? o.r : 0.5 * b.space->diameter()};
  for (std::size_t k = 0; k < count; ++k) {
    const OmegaSample w = sample_omega(R, substream_seed(o.seed, 0x707477ULL, k));
    for (double r : radii) {
      PointwiseOptions p;
      p.budget = scaled(o, 100000);
      p.seed = substream_seed(o.seed, 0x7077ULL, k);
      auto rep = check_pointwise_identity(*b.space, r, w.points, p);
      rep.seed = o.seed;
      out.push_back(rep);
    }
  }
  return out;
}

std::vector<VerificationReport> suite_probabilistic(const Options& o, const SpaceBundle& b) {
  const std::size_t N = first_n(o);
  const SpacePartition R = make_partition(b, N, parse_policy(o.policy));
  ProbabilisticOptions p;
  p.n_samples = o.samples ? o.samples : 200;
  p.n_outer = scaled(o, 4000);
  p.seed = o.seed;
  return {check_probabilistic_invariance(*b.space, R, *default_xi(o, b), p)};
}

std::vector<VerificationReport> suite_stolarsky(const Options& o, const SpaceBundle& b) {
  const auto sp = b.space->as_sphere();
  if (!sp) throw ConfigError("the stolarsky suite runs on spheres");
  const StolarskyConstant alpha = stolarsky_alpha(sp->dim, 100, scaled(o, 20000), o.seed);
  const std::size_t N = o.n.empty() ? 50 : o.n.front();
  const std::size_t count = o.samples ? o.samples : 20;
  const SpaceDescriptor geo = SpaceDescriptor::sphere(sp->dim, SphereMetric::geodesic);
  std::vector<VerificationReport> out;
  for (std::size_t k = 0; k < count; ++k) {
    DiscOptions d;
    d.n_outer = scaled(o, 100000);
    d.seed = substream_seed(o.seed, 0x7374ULL, k);
    auto rep = check_stolarsky(geo, sample_mu(geo, substream_seed(o.seed, 0x707473ULL, k), N), alpha, d);
    rep.values["alpha_dispersion"] = alpha.ratio_dispersion;
    out.push_back(rep);
  }
  return out;
}

std::vector<VerificationReport> suite_bounds(const Options& o, const SpaceBundle& b) {
  if (!b.chart) throw ConfigError("the bounds suite needs a chart space");
  std::vector<VerificationReport> out;
  BoundOptions bo;
  bo.n_samples = o.samples ? o.samples : 200;
  bo.seed = o.seed;
  bo.policy = parse_policy(o.policy);
  bo.budget = scaled(o, 100000);
  if (!o.xi.empty() || b.space->as_sphere()) bo.xi = default_xi(o, b);
  const MetricSelector m = metric_selector(o, b);
  for (std::size_t N : o.n.empty() ? std::vector<std::size_t>{16, 64, 256} : o.n) {
    auto reps = bound_report(*b.space, *b.chart, m, o.c0, N, bo);
    out.insert(out.end(), reps.begin(), reps.end());
  }
  return out;
}

int cmd_verify(const Options& o, const SpaceBundle& b) {
  std::vector<VerificationReport> reports;
  if (o.suite == "invariance") reports = suite_invariance(o, b);
  else if (o.suite == "kernel") reports = suite_kernel(o, b);
  else if (o.suite == "pointwise") reports = suite_pointwise(o, b);
  else if (o.suite == "probabilistic") reports = suite_probabilistic(o, b);
  else if (o.suite == "stolarsky") reports = suite_stolarsky(o, b);
  else if (o.suite == "bounds") reports = suite_bounds(o, b);
  else throw ConfigError("unknown --suite '" + o.suite + "'");
  Output out(o.out);
  const json cfg = run_config("verify", o, b);
  out.stream() << json{{"schema", schema_tag("verify")}, {"config", cfg}}.dump() << "\n";
  bool ok = true;
  for (const auto& r : reports) {
    out.stream() << std::setprecision(17) << to_json(r).dump() << "\n";
    ok = ok && r.pass;
  }
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.pass ? 1 : 0;
  std::cerr << o.suite << ": " << passed << "/" << reports.size() << " checks passed\n";
  return ok ? 0 : kExitGateFailed;
}

int cmd_bench(const Options& o, const SpaceBundle& b) {
  if (!b.chart) throw ConfigError("bench needs a chart space");
  const MetricSelector m = metric_selector(o, b);
  const std::vector<std::size_t> grid = o.n.empty() ? std::vector<std::size_t>{4, 8, 16, 32, 64, 128, 256} : o.n;
  const std::size_t draws = o.samples ? o.samples : 10;
  const MeanEstimate mean = mean_metric(*b.space, m, {scaled(o, 1000000), o.seed, std::nullopt});
  const int d = b.chart->dim;
  const double lip = b.chart->lip_bound;
  Output out(o.out);
  auto& s = out.stream();
  s << "# schema: " << schema_tag("bench") << "\n";
  s << "# config: " << run_config("bench", o, b).dump() << "\n";
  s << "N,k,n_pow,diam1,diam1_bound,diam1_theta,mean_rho_n2,mean_pair_sum,deficit,deficit_over_n_pow,"
       "c_witness,c_lambda_stated,c_lambda_proof\n";
  s << std::setprecision(12);
  for (std::size_t N : grid) {
    const CubePartition P = build_cube_partition(*b.chart->nu, N, parse_policy(o.policy));
    const DiameterSummary diam = average_diameter(P);
    const SpacePartition R = pushforward_partition(*b.chart, P);
    RunningStats st;
    for (std::size_t k = 0; k < draws; ++k) {
      const OmegaSample w = sample_omega(R, substream_seed(o.seed, 0x62656e6368ULL, k));
      st.add(pair_sum_estimate(w.points, m, *b.space, scaled(o, 100000), o.seed + k).value);
    }
    const double n = static_cast<double>(N);
    const double n_pow = std::pow(n, 1.0 - 1.0 / d);
    const double expected = mean.value * n * n;
    const double deficit = expected - st.mean();
    s << N << "," << P.k << "," << n_pow << "," << diam.diam1 << "," << diam.lemma_bound << "," << R.diam1_theta
      << "," << expected << "," << st.mean() << "," << deficit << "," << deficit / n_pow << ","
      << d * std::ldexp(1.0, d - 1) * lip * o.c0 << "," << d * std::ldexp(1.0, d - 3) * lip << ","
      << d * std::ldexp(1.0, d - 2) * lip << "\n";
  }
  return 0;
}

void add_space_options(CLI::App* app, Options& o) {
  app->add_option("--space", o.space, "cube, circle, sphere1, sphere2, hamming<n> or a space JSON file");
  app->add_option("--dim", o.dim, "cube dimension");
  app->add_option("--density", o.density, "uniform, power or truncated_gaussian");
  app->add_option("--p", o.p, "power density exponent");
  app->add_option("--mean", o.mean, "truncated gaussian mean");
  app->add_option("--sigma", o.sigma, "truncated gaussian sigma");
  app->add_option("--metric", o.metric, "sphere metric: geodesic or chordal");
  app->add_option("--xi", o.xi, "radial measure: counting, natural, lebesgue[:lo:hi]");
  app->add_option("--policy", o.policy, "occupancy policy: lexicographic or balanced");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metdisc: equal-measure partitions, distance energies and ball discrepancies"};
  app.require_subcommand(1);
  Options o;

  auto* partition = app.add_subcommand("partition", "build an equal-measure partition");
  auto* sample = app.add_subcommand("sample", "write a point set as CSV");
  auto* energy = app.add_subcommand("energy", "distance energy of a point set");
  auto* discrepancy = app.add_subcommand("discrepancy", "quadratic ball discrepancy of a point set");
  auto* verify = app.add_subcommand("verify", "run a verification suite (JSON lines)");
  auto* bench = app.add_subcommand("bench", "scaling table over an N grid (CSV)");
  for (auto* sc : {partition, sample, energy, discrepancy, verify, bench}) {
    add_space_options(sc, o);
    sc->add_option("--n", o.n, "number of points (repeatable where a grid is accepted)");
    sc->add_option("--budget", o.budget, "multiplier for every Monte Carlo sample count")
        ->check(CLI::PositiveNumber);
    sc->add_option("--workers", o.workers, "worker threads (default: METDISC_WORKERS or hardware)");
  }
  for (auto* sc : {sample, energy, discrepancy})
    sc->add_option("--mode", o.mode, "omega (one point per partition cell) or iid");
  for (auto* sc : {energy, discrepancy}) sc->add_option("--points", o.points, "point-set CSV to evaluate");
  for (auto* sc : {energy, verify, bench}) {
    sc->add_option("--energy-metric", o.energy_metric, "base, chordal, sdm or sdm_r");
    sc->add_option("--c0", o.c0, "comparison constant with rho <= c0 theta");
  }
  for (auto* sc : {energy, discrepancy, verify}) sc->add_option("--r", o.r, "fixed radius");
  verify->add_option("--suite", o.suite, "invariance, kernel, pointwise, probabilistic, stolarsky or bounds")
      ->required();
  for (auto* sc : {verify, bench}) sc->add_option("--samples", o.samples, "number of random configurations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (o.workers > 0) set_default_workers(o.workers);
    const SpaceBundle b = space_from_name(o.space, o.dim, density_json(o), sphere_metric(o));
    if (partition->parsed()) return cmd_partition(o, b);
    if (sample->parsed()) return cmd_sample(o, b);
    if (energy->parsed()) return cmd_energy(o, b);
    if (discrepancy->parsed()) return cmd_discrepancy(o, b);
    if (verify->parsed()) return cmd_verify(o, b);
    if (bench->parsed()) return cmd_bench(o, b);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
