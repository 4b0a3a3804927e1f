#include "metdisc/errors.hpp"
#include "metdisc/radial_measure.hpp"
#include "metdisc/spaces.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

using namespace metdisc;
using oracle::pi;

TEST_CASE("distance examples") {
  const auto s2 = SpaceDescriptor::sphere(2);
  CHECK(distance(s2, Point{0, 0, 1}, Point{0, 0, -1}) == doctest::Approx(pi).epsilon(1e-15));

  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  CHECK(distance(h2, Point::label(0), Point::label(3)) == 2.0);

  const auto cube = SpaceDescriptor::cube(Density::uniform(2));
  CHECK(distance(cube, Point{0, 0}, Point{1, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("distance rejects points outside the space") {
  const auto s2 = SpaceDescriptor::sphere(2);
  CHECK_THROWS_AS(distance(s2, Point{0, 0, 2}, Point{0, 0, 1}), DomainError);
  CHECK_THROWS_AS(distance(s2, Point{1, 0}, Point{0, 0, 1}), DomainError);
  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  CHECK_THROWS_AS(distance(h2, Point::label(4), Point::label(0)), DomainError);
  const auto cube = SpaceDescriptor::cube(Density::uniform(2));
  CHECK_THROWS_AS(distance(cube, Point{1.5, 0}, Point{0, 0}), DomainError);
}

TEST_CASE("diameters") {
  CHECK(SpaceDescriptor::sphere(2).diameter() == doctest::Approx(pi));
  CHECK(SpaceDescriptor::sphere(1, SphereMetric::chordal).diameter() == doctest::Approx(2.0));
  CHECK(SpaceDescriptor::cube(Density::uniform(3)).diameter() == doctest::Approx(std::sqrt(3.0)));
  CHECK(SpaceDescriptor::finite(hamming_space(3)).diameter() == 3.0);
}

TEST_CASE("distance is symmetric, vanishes on the diagonal and obeys the triangle inequality") {
  const SpaceDescriptor spaces[] = {
      SpaceDescriptor::sphere(1), SpaceDescriptor::sphere(2), SpaceDescriptor::sphere(2, SphereMetric::chordal),
      SpaceDescriptor::cube(Density::power(2, 2.0)), SpaceDescriptor::finite(hamming_space(3)),
      SpaceDescriptor::chart(builtin_chart("sphere2"))};
  for (const auto& s : spaces) {
    CAPTURE(s.name());
    const PointSet p = sample_mu(s, 11, 30000);
    int bad = 0;
    for (std::size_t i = 0; i + 2 < p.size(); i += 3) {
      const double ab = distance(s, p[i], p[i + 1]);
      const double bc = distance(s, p[i + 1], p[i + 2]);
      const double ac = distance(s, p[i], p[i + 2]);
      if (ac > ab + bc + 1e-12) ++bad;
      if (distance(s, p[i + 1], p[i]) != doctest::Approx(ab).epsilon(1e-14)) ++bad;
      if (ab > s.diameter() + 1e-12) ++bad;
    }
    CHECK(bad == 0);
    CHECK(distance(s, p[0], p[0]) <= 1e-15);
  }
}

TEST_CASE("ball volume on S2 matches the cap area") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const Point c{0.6, 0.0, 0.8};
  for (double r : {0.0, 0.3, 1.0, 2.0, pi}) {
    const auto v = ball_volume(s2, c, r);
    CHECK(v.std_error == 0.0);
    CHECK(v.value == doctest::Approx((1.0 - std::cos(r)) / 2.0).epsilon(1e-14));
  }
  // Monte Carlo oracle with an independent sampler.
  std::mt19937_64 g(5);
  const double r = 1.1;
  int hits = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) hits += std::acos(std::clamp(oracle::dot3(oracle::random_s2(g), c.x), -1.0, 1.0)) <= r;
  const double p = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::fabs(p - ball_volume(s2, c, r).value) < 3 * se);
}

TEST_CASE("ball volume on finite spaces and at the extremes") {
  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(ball_volume(h2, Point::label(c), 1.0).value == 0.75);
    CHECK(ball_volume(h2, Point::label(c), 0.0).value == 0.25);
    CHECK(ball_volume(h2, Point::label(c), 2.0).value == 1.0);
  }
  const auto s1 = SpaceDescriptor::sphere(1);
  CHECK(ball_volume(s1, Point{1, 0}, 0.0).value == 0.0);
  CHECK(ball_volume(s1, Point{1, 0}, pi).value == 1.0);
  CHECK(ball_volume(s1, Point{1, 0}, 1.0).value == doctest::Approx(1.0 / pi));

  const auto cube = SpaceDescriptor::cube(Density::power(2, 2.0));
  const auto full = ball_volume(cube, Point{0.2, 0.7}, std::sqrt(2.0));
  CHECK(full.value == doctest::Approx(1.0));
  CHECK(ball_volume(cube, Point{0.2, 0.7}, 0.0).value == 0.0);
}

TEST_CASE("ball volume is monotone in the radius") {
  const auto s2c = SpaceDescriptor::sphere(2, SphereMetric::chordal);
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.05 * i;
    const double v = ball_volume(s2c, Point{0, 1, 0}, r).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("ball volume on a non-uniform cube by Monte Carlo") {
  // Density 3z^2 on [0, 1]: mu([c - r, c + r]) = (c + r)^3 - (c - r)^3.
  const auto cube = SpaceDescriptor::cube(Density::power(1, 2.0));
  const auto v = ball_volume(cube, Point{0.6}, 0.2, 200000, 3);
  const double exact = std::pow(0.8, 3) - std::pow(0.4, 3);
  CHECK(v.std_error > 0.0);
  CHECK(std::fabs(v.value - exact) < 3 * v.std_error);
}

TEST_CASE("sample_mu") {
  SUBCASE("uniform interval mean") {
    const auto c = SpaceDescriptor::cube(Density::uniform(1));
    const PointSet p = sample_mu(c, 1, 100000);
    double s = 0, s2 = 0;
    for (const auto& x : p) s += x.x[0], s2 += x.x[0] * x.x[0];
    const double m = s / p.size();
    const double se = std::sqrt((s2 / p.size() - m * m) / p.size());
    CHECK(std::fabs(m - 0.5) < 3 * se);
  }
  SUBCASE("sphere third coordinate") {
    const auto s = SpaceDescriptor::sphere(2);
    const PointSet p = sample_mu(s, 2, 100000);
    double a = 0, a2 = 0;
    for (const auto& x : p) {
      a += x.x[2], a2 += x.x[2] * x.x[2];
      CHECK(std::fabs(x.x[0] * x.x[0] + x.x[1] * x.x[1] + x.x[2] * x.x[2] - 1.0) < 1e-12);
    }
    const double m = a / p.size();
    CHECK(std::fabs(m) < 3 * std::sqrt((a2 / p.size() - m * m) / p.size()));
  }
  SUBCASE("Hamming frequencies") {
    const auto h = SpaceDescriptor::finite(hamming_space(2));
    const std::size_t n = 40000;
    const PointSet p = sample_mu(h, 3, n);
    std::array<int, 4> count{};
    for (const auto& x : p) ++count[x.label_index()];
    const double se = std::sqrt(0.25 * 0.75 / n);
    for (int c : count) CHECK(std::fabs(static_cast<double>(c) / n - 0.25) < 3 * se);
  }
  SUBCASE("deterministic per seed") {
    const auto s = SpaceDescriptor::sphere(2);
    CHECK(sample_mu(s, 9, 100) == sample_mu(s, 9, 100));
    CHECK_FALSE(sample_mu(s, 9, 100) == sample_mu(s, 10, 100));
  }
}

TEST_CASE("circle chart") {
  const Chart c = builtin_chart("circle");
  const std::vector<double> q{0.25};
  const Point p = c.forward(q);
  CHECK(p.x[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.x[1] == doctest::Approx(1.0));
  CHECK(c.lip_bound == doctest::Approx(2 * pi).epsilon(1e-15));
  // Short arcs attain the bound.
  const std::vector<double> a{0.1}, b{0.1001};
  CHECK(c.metric(c.forward(a), c.forward(b)) / 0.0001 == doctest::Approx(2 * pi).epsilon(1e-6));
  CHECK_THROWS_AS(builtin_chart("torus"), ConfigError);
}

TEST_CASE("chart maps are Lipschitz with the recorded bound") {
  for (auto metric : {SphereMetric::geodesic, SphereMetric::chordal}) {
    for (std::string name : {"circle", "sphere2"}) {
      const Chart c = builtin_chart(name, metric);
      CAPTURE(name);
      std::mt19937_64 g(17);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      int pairs = 0, bad = 0;
      double worst = 0.0;
      while (pairs < 10000) {
        std::vector<double> z1(c.dim), z2(c.dim);
        for (auto& z : z1) z = u(g);
        for (auto& z : z2) z = u(g);
        if (!c.in_domain(z1) || !c.in_domain(z2)) continue;
        ++pairs;
        double e = 0.0;
        for (int i = 0; i < c.dim; ++i) e += (z1[i] - z2[i]) * (z1[i] - z2[i]);
        const double ratio = c.metric(c.forward(z1), c.forward(z2)) / std::sqrt(e);
        worst = std::max(worst, ratio);
        if (ratio > c.lip_bound * (1 + 1e-12)) ++bad;
      }
      CHECK(bad == 0);
      CHECK(worst <= c.lip_bound * (1 + 1e-12));
      if (name == "circle" && metric == SphereMetric::geodesic) CHECK(worst == doctest::Approx(2 * pi).epsilon(1e-3));
    }
  }
}

TEST_CASE("sphere2 chart density has unit mass and pushes forward to the surface measure") {
  const Chart c = builtin_chart("sphere2");
  // Midpoint rule on a fine grid; the density is smooth inside each face.
  const int m = 600;
  double mass = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const std::vector<double> z{(i + 0.5) / m, (j + 0.5) / m};
      if (c.in_domain(z)) mass += (*c.nu)(z);
    }
  CHECK(mass / (m * m) == doctest::Approx(1.0).epsilon(2e-3));

  // Rejection sampling from nu with an independent generator, then cap counts.
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> centre{0.0, 0.6, 0.8};
  const double radii[] = {0.4, 1.2, 2.5};
  std::array<int, 3> hits{};
  const int n = 100000;
  for (int k = 0; k < n;) {
    const std::vector<double> z{u(g), u(g)};
    if (!c.in_domain(z) || u(g) * c.nu->upper_bound() > (*c.nu)(z)) continue;
    ++k;
    const Point p = c.forward(z);
    CHECK(std::fabs(oracle::chord(p.x, {0, 0, 0}) - 1.0) < 1e-12);
    const double a = oracle::angle3(p.x, centre);
    for (int t = 0; t < 3; ++t) hits[t] += a <= radii[t];
  }
  for (int t = 0; t < 3; ++t) {
    const double v = (1.0 - std::cos(radii[t])) / 2.0;
    const double p = static_cast<double>(hits[t]) / n;
    CHECK(std::fabs(p - v) < 3 * std::sqrt(v * (1 - v) / n));
  }
}

TEST_CASE("sphere2 chart inverse round-trips") {
  const Chart c = builtin_chart("sphere2");
  std::mt19937_64 g(4);
  for (int i = 0; i < 2000; ++i) {
    const auto v = oracle::random_s2(g);
    const Point p{v[0], v[1], v[2]};
    const auto z = c.inverse(p);
    REQUIRE(z);
    CHECK(c.in_domain(*z));
    const Point back = c.forward(*z);
    CHECK(oracle::chord(back.x, p.x) < 1e-12);
  }
}

TEST_CASE("finite space validation") {
  CHECK_THROWS(FiniteSpace({"a", "b"}, {0, 1, 2, 0}, {Rational(1, 2), Rational(1, 2)}));  // asymmetric
  CHECK_THROWS(FiniteSpace({"a", "b", "c"}, {0, 1, 5, 1, 0, 1, 5, 1, 0},
                           {Rational(1, 3), Rational(1, 3), Rational(1, 3)}));  // triangle
  CHECK_THROWS(FiniteSpace({"a", "b"}, {0, 1, 1, 0}, {Rational(1, 2), Rational(1, 3)}));  // mass
  const FiniteSpace ok({"a", "b"}, {0, 1, 1, 0}, {Rational(1, 4), Rational(3, 4)});
  CHECK(ok.diameter() == 1.0);
  CHECK(ok.find_label("b") == std::optional<std::size_t>(1));
  const auto s = SpaceDescriptor::finite(ok);
  CHECK(ball_volume(s, Point::label(1), 0.0).value == 0.75);
}

TEST_CASE("distance invariance detection") {
  CHECK(SpaceDescriptor::finite(hamming_space(3)).distance_invariant());
  CHECK(SpaceDescriptor::sphere(2).distance_invariant());
  const FiniteSpace path({"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0},
                         {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK_FALSE(SpaceDescriptor::finite(path).distance_invariant());
  CHECK_FALSE(SpaceDescriptor::cube(Density::uniform(2)).distance_invariant());
}

TEST_CASE("radial measures") {
  SUBCASE("counting survival") {
    const std::vector<double> radii{0, 1, 2, 3};
    const auto xi = RadialMeasure::counting(radii);
    CHECK(xi.total_mass() == 4.0);
    CHECK(xi.survival(0.0) == 4.0);
    CHECK(xi.survival(1.0) == 3.0);
    CHECK(xi.survival(1.5) == 2.0);
    CHECK(xi.survival(3.0 + 1e-9) == 0.0);
    CHECK(xi.survival_exact(2.0) == Rational(2));
    REQUIRE(xi.c0());
    // sigma(a) - sigma(b) <= c0 (b - a) on T.
    for (double a : radii)
      for (double b : radii)
        if (a < b) CHECK(xi.survival(a) - xi.survival(b) <= *xi.c0() * (b - a) + 1e-12);
  }
  SUBCASE("natural measure") {
    const auto xi = RadialMeasure::natural();
    CHECK(xi.total_mass() == doctest::Approx(2.0));
    for (double r : {0.0, 0.5, 2.0, pi}) CHECK(xi.survival(r) == doctest::Approx(1.0 + std::cos(r)).epsilon(1e-14));
    CHECK(*xi.c0() == 1.0);
  }
  SUBCASE("survival from a density") {
    const auto xi = RadialMeasure::from_density("square", 0.0, pi, [](double r) { return r * r; });
    for (double a : {0.0, 0.4, 1.3})
      for (double b : {1.5, 2.2, pi}) {
        const double integral = oracle::simpson([](double r) { return r * r; }, a, b, 2000);
        CHECK(std::fabs(xi.survival(a) - xi.survival(b) - integral) < 1e-9);
      }
    CHECK(xi.survival(pi + 0.1) == 0.0);
  }
  SUBCASE("integrate mixes atoms and density") {
    const auto leb = RadialMeasure::lebesgue(0.0, 2.0);
    CHECK(leb.integrate([](double r) { return r; }, 1e-12).value == doctest::Approx(2.0));
    const std::vector<double> radii{0, 1, 2};
    const auto cnt = RadialMeasure::counting(radii);
    CHECK(cnt.integrate([](double r) { return r * r; }, 1e-12).value == 5.0);
  }
}
