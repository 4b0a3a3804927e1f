#include "metdisc/errors.hpp"
#include "metdisc/invariance.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <string>

using namespace metdisc;
using oracle::pi;

namespace {

PointSet labels(const std::vector<unsigned>& ls) {
  PointSet p;
  for (unsigned l : ls) p.push_back(Point::label(l));
  return p;
}

std::vector<unsigned> random_labels(std::mt19937_64& g, unsigned size, std::size_t N) {
  std::vector<unsigned> out(N);
  for (auto& x : out) x = static_cast<unsigned>(g() % size);
  return out;
}

FiniteSpace path3() {
  return FiniteSpace({"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
}

}  // namespace

TEST_CASE("exact invariance on Hamming cubes") {
  std::mt19937_64 g(1);
  for (int n : {2, 3}) {
    const auto h = SpaceDescriptor::finite(hamming_space(n), "hamming");
    const auto xi = RadialMeasure::counting(h.finite_space().radii());
    const oracle::Hamming H{n};
    oracle::Q mean;
    for (int r = 0; r <= n; ++r) mean = mean + H.mean_sdm_r(r);
    for (int t = 0; t < 30; ++t) {
      const std::size_t N = n == 3 ? 5 : 1 + g() % 4;
      const auto ls = random_labels(g, H.size(), N);
      const auto rep = check_invariance_exact(h, xi, labels(ls));
      CHECK(rep.pass);
      CHECK(rep.exact);
      CHECK(rep.exact_residual == "0");
      // Oracle: lambda + sdm sum against <sdm> N^2, all in 64-bit rationals.
      oracle::Q lambda, sdm;
      for (int r = 0; r <= n; ++r) lambda = lambda + H.lambda_r(ls, r);
      for (unsigned a : ls)
        for (unsigned b : ls) sdm = sdm + H.sdm_counting(a, b);
      CHECK(lambda + sdm == mean * oracle::Q(static_cast<std::int64_t>(N * N)));
      CHECK(rep.rhs == doctest::Approx((mean * oracle::Q(static_cast<std::int64_t>(N * N))).value()));
      const auto fl = check_invariance_exact(h, xi, labels(ls), false);
      CHECK(fl.pass);
      CHECK(std::fabs(fl.residual) < 1e-12 * N * N);
    }
  }
  SUBCASE("single point") {
    const auto h = SpaceDescriptor::finite(hamming_space(2));
    const auto xi = RadialMeasure::counting(h.finite_space().radii());
    CHECK(check_invariance_exact(h, xi, labels({3})).exact_residual == "0");
  }
  SUBCASE("not distance invariant") {
    const auto s = SpaceDescriptor::finite(path3());
    const auto xi = RadialMeasure::counting(s.finite_space().radii());
    CHECK_THROWS_AS(check_invariance_exact(s, xi, labels({0, 1})), PreconditionError);
    try {
      require_distance_invariant(path3());
      FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
      const std::string msg = e.what();
      CHECK(msg.find('a') != std::string::npos);
      CHECK(msg.find('b') != std::string::npos);
    }
    CHECK_NOTHROW(require_distance_invariant(hamming_space(3)));
  }
}

TEST_CASE("kernel identities hold exactly on Hamming cubes") {
  for (int n : {2, 3}) {
    const auto h = SpaceDescriptor::finite(hamming_space(n));
    for (double r : h.finite_space().radii())
      for (std::size_t a = 0; a < (1u << n); ++a)
        for (std::size_t b = 0; b < (1u << n); ++b) {
          const auto k = check_kernel_identity(h, r, Point::label(a), Point::label(b));
          CHECK(k.exact_residual == "0");
          const auto s = check_kernel_shortcut(h, r, Point::label(a), Point::label(b));
          CHECK(s.exact_residual == "0");
        }
  }
  // The general identity also holds off distance-invariant spaces.
  const auto p = SpaceDescriptor::finite(path3());
  for (double r : {0.0, 1.0, 2.0})
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        CHECK(check_kernel_identity(p, r, Point::label(a), Point::label(b)).exact_residual == "0");
  CHECK_THROWS_AS(check_kernel_shortcut(p, 1.0, Point::label(0), Point::label(1)), PreconditionError);
}

TEST_CASE("proof functionals on distance-invariant spaces") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const ProofFunctionals F(s2);
  const ProofFunctionals M(s2, 200000, 21, true);
  for (double r : {0.4, 1.3, 2.7}) {
    const double v = (1 - std::cos(r)) / 2;
    REQUIRE(F.v(r));
    CHECK(*F.v(r) == doctest::Approx(v));
    CHECK(F.a0(r).value == doctest::Approx(v * v).epsilon(1e-13));
    CHECK(F.a1(r, Point{0, 0, 1}).value == doctest::Approx(0.5 * v - v * v).epsilon(1e-13));
    const auto a0 = M.a0(r);
    const auto a1 = M.a1(r, Point{0, 1, 0});
    CHECK(a0.method == Method::monte_carlo);
    CHECK(std::fabs(a0.value - v * v) < 3 * a0.std_error + 1e-12);
    CHECK(std::fabs(a1.value - (0.5 * v - v * v)) < 3 * a1.std_error + 1e-12);
  }
  const auto h = SpaceDescriptor::finite(hamming_space(3));
  const ProofFunctionals H(h);
  const oracle::Hamming O{3};
  for (int r = 0; r <= 3; ++r) {
    const double v = O.volume(0, r).value();
    CHECK(H.a0(r).value == doctest::Approx(v * v).epsilon(1e-15));
    CHECK(H.a1(r, Point::label(5)).value == doctest::Approx(0.5 * v - v * v).epsilon(1e-15));
  }
}

TEST_CASE("pointwise identity") {
  SUBCASE("Hamming, every configuration") {
    std::mt19937_64 g(7);
    const auto h = SpaceDescriptor::finite(hamming_space(2));
    const auto xi = RadialMeasure::counting(h.finite_space().radii());
    for (int t = 0; t < 20; ++t) {
      const PointSet p = labels(random_labels(g, 4, 1 + g() % 6));
      for (double r : {0.0, 1.0, 2.0}) CHECK(check_pointwise_identity(h, r, p).exact_residual == "0");
      CHECK(check_pointwise_identity(h, xi, p).exact_residual == "0");
    }
  }
  SUBCASE("non-invariant finite space") {
    const auto s = SpaceDescriptor::finite(path3());
    for (double r : {0.0, 1.0}) CHECK(check_pointwise_identity(s, r, labels({0, 0, 2})).exact_residual == "0");
  }
  SUBCASE("S2 with closed-form functionals") {
    const auto s2 = SpaceDescriptor::sphere(2);
    const auto rep = check_pointwise_identity(s2, 0.8, sample_mu(s2, 4, 6));
    CHECK(rep.pass);
  }
  SUBCASE("S1 with Monte Carlo functionals") {
    const auto s1 = SpaceDescriptor::sphere(1);
    PointwiseOptions o;
    o.force_mc = true;
    o.seed = 11;
    const auto rep = check_pointwise_identity(s1, 1.0, sample_mu(s1, 5, 4), o);
    CHECK(rep.std_error > 0.0);
    CHECK(rep.pass);
    CHECK(std::fabs(rep.residual) <= rep.tolerance + 3 * rep.std_error);
  }
}

TEST_CASE("probabilistic invariance") {
  SUBCASE("trivial finite partition is deterministic") {
    const auto h = SpaceDescriptor::finite(hamming_space(2));
    const auto xi = RadialMeasure::counting(h.finite_space().radii());
    const auto R = trivial_finite_partition(h.finite_space());
    ProbabilisticOptions o;
    o.n_samples = 50;
    const auto rep = check_probabilistic_invariance(h, R, xi, o);
    CHECK(rep.pass);
    CHECK(rep.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.std_error == 0.0);
  }
  SUBCASE("circle, Lebesgue measure") {
    const auto s1 = SpaceDescriptor::sphere(1);
    const Chart c = builtin_chart("circle");
    const auto R = pushforward_partition(c, build_cube_partition(*c.nu, 8));
    ProbabilisticOptions o;
    o.n_samples = 50;
    o.seed = 2;
    const auto rep = check_probabilistic_invariance(s1, R, RadialMeasure::lebesgue(0, pi), o);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(mean_sdm_xi(s1, RadialMeasure::lebesgue(0, pi)).value * 64));
  }
}

TEST_CASE("Stolarsky constant") {
  SUBCASE("circle") {
    const auto c = stolarsky_alpha(1, 50, 20000, 1);
    CHECK(c.alpha > 0.0);
    CHECK(c.ratio_dispersion <= c.tolerance);
    // Dense quadrature of 1/2 int |sigma(theta(y1, y)) - sigma(theta(y2, y))| dmu(y).
    const double a1 = 0.0, a2 = 2.0;
    const double sdm = oracle::simpson(
        [&](double t) {
          return 0.5 * std::fabs(std::cos(oracle::circle_gap(t, a1)) - std::cos(oracle::circle_gap(t, a2))) /
                 (2 * pi);
        },
        0, 2 * pi, 400000);
    const double tau = 2 * std::sin(1.0);
    CHECK(c.c == doctest::Approx(sdm / tau).epsilon(1e-4));
    CHECK(std::fabs(c.mc_c - c.c) < 3 * c.mc_std_error);
  }
  SUBCASE("sphere") {
    const auto c = stolarsky_alpha(2, 50, 20000, 2);
    CHECK(c.alpha > 0.0);
    CHECK(c.ratio_dispersion <= c.tolerance);
    // Midpoint rule over (polar, azimuth) for one pair.
    const std::vector<double> y1{0, 0, 1}, y2{std::sin(1.0), 0, std::cos(1.0)};
    const int m = 800;
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      const double th = pi * (i + 0.5) / m;
      for (int j = 0; j < m; ++j) {
        const double ph = 2 * pi * (j + 0.5) / m;
        const std::vector<double> y{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const double d = (y[0] * y1[0] + y[1] * y1[1] + y[2] * y1[2]) - (y[0] * y2[0] + y[1] * y2[1] + y[2] * y2[2]);
        s += 0.5 * std::fabs(d) * std::sin(th) * (pi / m) * (2 * pi / m) / (4 * pi);
      }
    }
    CHECK(c.c == doctest::Approx(s / oracle::chord(y1, y2)).epsilon(1e-4));
  }
  CHECK_THROWS(stolarsky_alpha(3));
}

TEST_CASE("Stolarsky identity") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const auto alpha = stolarsky_alpha(2, 50, 20000, 3);
  DiscOptions o;
  o.n_outer = 40000;
  o.seed = 4;
  SUBCASE("single point") {
    const auto rep = check_stolarsky(s2, {Point{0, 0, 1}}, alpha, o);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(4.0 / 3));
  }
  SUBCASE("antipodal pair") {
    const auto rep = check_stolarsky(s2, {Point{0, 0, 1}, Point{0, 0, -1}}, alpha, o);
    CHECK(rep.pass);
    CHECK(rep.values.count("relative_residual"));
  }
  SUBCASE("random set") {
    const auto rep = check_stolarsky(s2, sample_mu(s2, 8, 20), alpha, o);
    CHECK(rep.pass);
    CHECK(rep.values.at("relative_residual") < 0.01);
  }
}

TEST_CASE("bound reports") {
  SUBCASE("identity chart on the uniform square") {
    const Density nu = Density::uniform(2);
    const auto cube = SpaceDescriptor::cube(nu);
    BoundOptions o;
    o.n_samples = 20;
    o.budget = 20000;
    o.spot_pairs = 100;
    const auto reps = bound_report(cube, identity_chart(nu), MetricSelector::base(), 1.0, 16, o);
    REQUIRE(reps.size() == 2);
    for (const auto& r : reps) CHECK(r.pass);
    CHECK(reps[0].name == "expectation_lower_bound");
    CHECK(reps[1].name == "witness_lower_bound");
  }
  SUBCASE("sphere with the natural measure, N = 1") {
    const auto s2 = SpaceDescriptor::sphere(2, SphereMetric::chordal);
    const Chart c = builtin_chart("sphere2", SphereMetric::chordal);
    BoundOptions o;
    o.n_samples = 10;
    o.xi = std::make_shared<const RadialMeasure>(RadialMeasure::natural());
    o.budget = 20000;
    const auto reps = bound_report(s2, c, MetricSelector::base(), 1.0, 1, o);
    for (const auto& r : reps) {
      CHECK(r.name.rfind("lambda", 0) == 0);
      CHECK(r.pass);
    }
    CHECK(reps.size() == 3);
  }
  SUBCASE("sphere chordal, N = 16") {
    const auto s2 = SpaceDescriptor::sphere(2, SphereMetric::chordal);
    const Chart c = builtin_chart("sphere2", SphereMetric::chordal);
    BoundOptions o;
    o.n_samples = 30;
    o.xi = std::make_shared<const RadialMeasure>(RadialMeasure::natural());
    const auto reps = bound_report(s2, c, MetricSelector::base(), 1.0, 16, o);
    REQUIRE(reps.size() == 5);
    for (const auto& r : reps) CHECK(r.pass);
    CHECK(reps[2].rhs < reps[4].rhs);
  }
  SUBCASE("comparison constant too small") {
    const auto s2 = SpaceDescriptor::sphere(2, SphereMetric::chordal);
    const Chart c = builtin_chart("sphere2", SphereMetric::chordal);
    BoundOptions o;
    o.n_samples = 2;
    CHECK_THROWS_AS(bound_report(s2, c, MetricSelector::base(), 0.5, 4, o), PreconditionError);
  }
}

TEST_CASE("extremal alignment") {
  const auto h = SpaceDescriptor::finite(hamming_space(3));
  const auto xi = RadialMeasure::counting(h.finite_space().radii());
  std::mt19937_64 g(5);
  std::vector<PointSet> family;
  for (int i = 0; i < 30; ++i) family.push_back(labels(random_labels(g, 8, 4)));
  family.push_back(labels({0, 3, 5, 6}));  // a code with minimum distance 2
  family.push_back(labels({0, 0, 0, 0}));
  const auto rep = check_extremal_alignment(h, xi, family);
  CHECK(rep.pass);
  CHECK_THROWS_AS(check_extremal_alignment(h, xi, {}), InputError);
}
