#include "metdisc/discrepancy.hpp"
#include "metdisc/energy.hpp"
#include "metdisc/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

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

}  // namespace

TEST_CASE("local discrepancy") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const PointSet p = sample_mu(s2, 1, 7);
  CHECK(local_disc(s2, p, Point{0, 0, 1}, pi) == doctest::Approx(0.0).epsilon(1e-14));

  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  const PointSet all = labels({0, 1, 2, 3});
  for (unsigned c = 0; c < 4; ++c) CHECK(local_disc(h2, all, Point::label(c), 1.0) == 0.0);
  // Closed ball of radius 0 contains its centre: 1 - 1/4.
  CHECK(local_disc(h2, labels({2}), Point::label(2), 0.0) == 0.75);

  const Point x{0.6, 0.8, 0.0};
  CHECK(local_disc(s2, {x}, x, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));

  // Non-uniform cube: volume estimated internally; 3z^2 on [0, 1].
  const auto pc = SpaceDescriptor::cube(Density::power(1, 2.0));
  const double v = std::pow(0.7, 3) - std::pow(0.3, 3);
  CHECK(local_disc(pc, {Point{0.5}, Point{0.9}}, Point{0.5}, 0.2) == doctest::Approx(1.0 - 2 * v).epsilon(5e-3));
}

TEST_CASE("quadratic discrepancy on finite spaces") {
  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  for (double r : {0.0, 1.0, 2.0}) {
    const auto e = quad_disc_r(h2, labels({0, 1, 2, 3}), r);
    CHECK(e.value == 0.0);
    CHECK(e.method == Method::exact_enumeration);
  }
  CHECK(quad_disc_r(h2, {}, 1.0).value == 0.0);
  CHECK(quad_disc_r(SpaceDescriptor::sphere(2), {}, 1.0).value == 0.0);

  std::mt19937_64 g(4);
  for (int n : {2, 3}) {
    const auto h = SpaceDescriptor::finite(hamming_space(n));
    const oracle::Hamming H{n};
    const auto xi = RadialMeasure::counting(h.finite_space().radii());
    for (int t = 0; t < 20; ++t) {
      const auto ls = random_labels(g, H.size(), 1 + g() % (2 * H.size()));
      const PointSet p = labels(ls);
      oracle::Q total;
      for (int r = 0; r <= n; ++r) {
        const oracle::Q want = H.lambda_r(ls, r);
        total = total + want;
        CHECK(quad_disc_r(h, p, r).value == doctest::Approx(want.value()).epsilon(1e-14));
        // Summation consistency: the kernel sum reproduces lambda_r.
        CHECK(quad_disc_r_kernel(h, p, r, KernelPath::enumeration).value ==
              doctest::Approx(want.value()).epsilon(1e-13));
      }
      CHECK(quad_disc_xi(h, p, xi).value == doctest::Approx(total.value()).epsilon(1e-14));
      CHECK(quad_disc_xi(h, p, xi).value >= 0.0);
    }
    CHECK(quad_disc_xi(h, labels([&] {
                         std::vector<unsigned> v(H.size());
                         for (unsigned i = 0; i < H.size(); ++i) v[i] = i;
                         return v;
                       }()),
                       xi)
              .value == 0.0);
  }
}

TEST_CASE("antipodal pair on S1") {
  const auto s1 = SpaceDescriptor::sphere(1);
  const PointSet p{{1, 0}, {-1, 0}};
  for (double r : {0.5, 1.2}) {
    // Centres see one point with probability 2r/pi and none otherwise, and
    // N v = 2r/pi, so lambda = (2r/pi)(1 - 2r/pi).
    const double w = 2 * r / pi;
    const double want = w * (1 - w);
    DiscOptions o;
    o.n_outer = 100000;
    o.seed = 3;
    const auto e = quad_disc_r(s1, p, r, o);
    CHECK(e.method == Method::monte_carlo);
    CHECK(std::fabs(e.value - want) < 3 * e.std_error);
  }
  DiscOptions tiny;
  tiny.n_outer = 10;
  CHECK_THROWS_AS(quad_disc_r(s1, p, 0.5, tiny), InputError);
}

TEST_CASE("quadratic discrepancy without closed-form balls") {
  // Density 2z on [0, 1]: v(y) = F(min(y + r, 1)) - F(max(y - r, 0)), F(z) = z^2.
  const auto pc = SpaceDescriptor::cube(Density::power(1, 1.0));
  const PointSet p{{0.3}, {0.7}, {0.9}};
  const double r = 0.15;
  const int m = 400000;
  double want = 0.0;
  for (int i = 0; i < m; ++i) {
    const double y = (i + 0.5) / m;
    const double hi = std::min(y + r, 1.0), lo = std::max(y - r, 0.0);
    int c = 0;
    for (const auto& x : p) c += std::fabs(x.x[0] - y) <= r;
    const double l = c - 3.0 * (hi * hi - lo * lo);
    want += l * l * 2 * y / m;
  }
  DiscOptions o;
  o.n_outer = 20000;
  o.seed = 5;
  const auto e = quad_disc_r(pc, p, r, o);
  CHECK(e.std_error > 0.0);
  CHECK(std::fabs(e.value - want) < 3 * e.std_error);
}

TEST_CASE("integral and kernel paths agree on S2") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const auto xi = RadialMeasure::natural();
  const PointSet p = sample_mu(s2, 21, 10);
  DiscOptions o;
  o.n_outer = 20000;
  o.seed = 2;
  const auto integral = quad_disc_xi(s2, p, xi, o);
  const auto kernel = quad_disc_xi_kernel(s2, p, xi, KernelPath::shortcut, o);
  CHECK(integral.value >= -3 * integral.std_error);
  CHECK(kernel.value >= 0.0);
  CHECK(std::fabs(integral.value - kernel.value) < 3 * std::hypot(integral.std_error, kernel.std_error));
}

TEST_CASE("pair kernel") {
  const auto h2 = SpaceDescriptor::finite(hamming_space(2));
  const Point a = Point::label(0), b = Point::label(2);
  CHECK(disc_kernel(h2, 0.0, a, b).value == -1.0 / 16);
  CHECK(disc_kernel(h2, 0.0, a, a).value == 3.0 / 16);
  CHECK(disc_kernel(h2, 0.0, a, b, KernelPath::shortcut).value == -1.0 / 16);
  CHECK(disc_kernel(h2, 0.0, a, b, KernelPath::enumeration).value == -1.0 / 16);

  const oracle::Hamming H{3};
  const auto h3 = SpaceDescriptor::finite(hamming_space(3));
  for (int r = 0; r <= 3; ++r)
    for (unsigned x = 0; x < 8; ++x)
      for (unsigned y = 0; y < 8; ++y) {
        const double want = H.kernel_r(r, x, y).value();
        CHECK(disc_kernel(h3, r, Point::label(x), Point::label(y), KernelPath::enumeration).value == want);
        CHECK(disc_kernel(h3, r, Point::label(x), Point::label(y), KernelPath::shortcut).value ==
              doctest::Approx(want).epsilon(1e-15));
      }

  const auto s2 = SpaceDescriptor::sphere(2);
  const Point y{0, 0.6, 0.8};
  for (double r : {0.3, 1.0, 2.5}) {
    const double v = (1 - std::cos(r)) / 2;
    CHECK(disc_kernel(s2, r, y, y).value == doctest::Approx(v - v * v).epsilon(1e-14));
  }

  const auto cube = SpaceDescriptor::cube(Density::uniform(2));
  CHECK_THROWS_AS(disc_kernel(cube, 0.2, Point{0.1, 0.1}, Point{0.2, 0.2}, KernelPath::shortcut), ConfigError);
  CHECK_THROWS_AS(disc_kernel(cube, RadialMeasure::lebesgue(0, 1), Point{0.1, 0.1}, Point{0.2, 0.2},
                              KernelPath::shortcut),
                  ConfigError);
  CHECK(parse_kernel_path("shortcut") == KernelPath::shortcut);
  CHECK_THROWS_AS(parse_kernel_path("fast"), ConfigError);
}

TEST_CASE("kernel by Monte Carlo on a cube") {
  // Uniform interval: lambda_r(y1, y2) by a grid oracle.
  const auto c = SpaceDescriptor::cube(Density::uniform(1));
  const double r = 0.2, y1 = 0.3, y2 = 0.4;
  const int m = 400000;
  double want = 0.0;
  for (int i = 0; i < m; ++i) {
    const double y = (i + 0.5) / m;
    const double v = std::min(y + r, 1.0) - std::max(y - r, 0.0);
    want += ((std::fabs(y - y1) <= r) - v) * ((std::fabs(y - y2) <= r) - v) / m;
  }
  DiscOptions o;
  o.n_outer = 200000;
  const auto e = disc_kernel(c, r, Point{y1}, Point{y2}, KernelPath::automatic, o);
  CHECK(std::fabs(e.value - want) < 3 * e.std_error + 1e-6);
}
