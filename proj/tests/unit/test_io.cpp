#include "metdisc/errors.hpp"
#include "metdisc/io.hpp"
#include "metdisc/partition.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace metdisc;

TEST_CASE("schema tags") {
  CHECK(schema_tag("report") == "metdisc.report/1");
  CHECK(schema_tag("points") == "metdisc.points/1");
}

TEST_CASE("point CSV round trip") {
  const auto s2 = SpaceDescriptor::sphere(2);
  const PointSet p = sample_mu(s2, 12, 4);
  std::stringstream ss;
  const json cfg{{"seed", 4}};
  write_points_csv(ss, s2, p, nullptr, &cfg);
  const std::string text = ss.str();
  CHECK(text.rfind("# schema: metdisc.points/1\n", 0) == 0);
  CHECK(text.find("# config: {\"seed\":4}") != std::string::npos);
  const PointSet q = read_points_csv(ss, s2);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int c = 0; c < 3; ++c) CHECK(q[i].x[c] == p[i].x[c]);

  SUBCASE("labels and cells") {
    const auto h = SpaceDescriptor::finite(hamming_space(3));
    const PointSet lp{Point::label(5), Point::label(0), Point::label(5)};
    const std::vector<std::size_t> cells{2, 0, 1};
    std::stringstream s;
    write_points_csv(s, h, lp, &cells);
    const PointSet back = read_points_csv(s, h);
    REQUIRE(back.size() == 3);
    CHECK(back[0].label_index() == 5);
    CHECK(back[1].label_index() == 0);
  }

  SUBCASE("bad input") {
    std::stringstream off("x0,x1,x2\n1,0,1\n");
    CHECK_THROWS_AS(read_points_csv(off, s2), DomainError);
    std::stringstream shortrow("x0,x1,x2\n1,0\n");
    CHECK_THROWS_AS(read_points_csv(shortrow, s2), InputError);
    const auto h = SpaceDescriptor::finite(hamming_space(2));
    std::stringstream unknown("label\nzz\n");
    CHECK_THROWS_AS(read_points_csv(unknown, h), DomainError);
  }
}

TEST_CASE("finite space from JSON") {
  const json j = json::parse(R"({"kind": "finite", "labels": ["a", "b", "c"],
                                  "dist": [[], [1], [2, 1]], "weights": ["1/4", 0.25, "1/2"]})");
  const auto b = space_from_json(j);
  const auto* f = b.space->get_if<FiniteSpace>();
  REQUIRE(f);
  CHECK(f->size() == 3);
  CHECK(f->dist(0, 2) == 2.0);
  CHECK(f->dist(2, 1) == 1.0);
  CHECK(f->weight_exact(2) == Rational(1, 2));
  CHECK(f->diameter() == 2.0);
  CHECK(b.spec["schema"] == "metdisc.space/1");

  SUBCASE("unnormalised weights are rejected") {
    json w = j;
    w["weights"] = {1, 1, 2};
    CHECK_THROWS_AS(space_from_json(w), ConfigError);
  }
  SUBCASE("uniform default") {
    json w = j;
    w.erase("weights");
    CHECK(space_from_json(w).space->get_if<FiniteSpace>()->weight_exact(1) == Rational(1, 3));
  }
  SUBCASE("malformed tables") {
    json w = j;
    w["dist"] = {json::array(), {1}};
    CHECK_THROWS_AS(space_from_json(w), ConfigError);
    w["dist"] = {json::array(), {1}, {5, 1}};
    CHECK_THROWS_AS(space_from_json(w), ConfigError);
    w["dist"] = {json::array(), {1, 2}, {2, 1}};
    CHECK_THROWS_AS(space_from_json(w), ConfigError);
  }
  CHECK_THROWS_AS(space_from_json(json{{"dim", 2}}), ConfigError);
  CHECK_THROWS_AS(space_from_json(json{{"kind", "torus"}}), ConfigError);
}

TEST_CASE("spaces and radial measures by name") {
  const auto c = space_from_name("cube", 2, json{{"name", "uniform"}}, SphereMetric::geodesic);
  CHECK(c.space->dimension() == 2);
  const auto s = space_from_name("sphere2", 2, json::object(), SphereMetric::chordal);
  CHECK(s.space->diameter() == doctest::Approx(2.0));
  const auto g = space_from_name("circle", 1, json::object(), SphereMetric::geodesic);
  CHECK(g.space->diameter() == doctest::Approx(M_PI));
  const auto h = space_from_name("hamming4", 1, json::object(), SphereMetric::geodesic);
  CHECK(h.space->get_if<FiniteSpace>()->size() == 16);
  CHECK_THROWS_AS(space_from_name("klein", 2, json::object(), SphereMetric::geodesic), ConfigError);
  CHECK_THROWS_AS(space_from_name("/nonexistent/space.json", 2, json::object(), SphereMetric::geodesic),
                  ConfigError);

  const auto cnt = radial_from_name("counting", *h.space);
  CHECK(cnt->atoms().size() == 5);
  CHECK_THROWS_AS(radial_from_name("counting", *s.space), ConfigError);
  CHECK(radial_from_name("natural", *s.space)->c0().has_value());
  const auto leb = radial_from_name("lebesgue:0.5:1.5", *g.space);
  CHECK(leb->lower_support() == 0.5);
  CHECK(leb->upper_support() == 1.5);
  CHECK(radial_from_name("lebesgue", *g.space)->upper_support() == doctest::Approx(M_PI));
  CHECK_THROWS_AS(radial_from_name("lebesgue:1", *g.space), ConfigError);
  CHECK_THROWS_AS(radial_from_name("gamma", *g.space), ConfigError);
}

TEST_CASE("partition JSON") {
  const auto P = build_cube_partition(Density::uniform(2), 4);
  const auto d = average_diameter(P);
  const json j = to_json(P, d);
  CHECK(j["schema"] == "metdisc.partition/1");
  CHECK(j["N"] == 4);
  CHECK(j["d"] == 2);
  REQUIRE(j["boxes"].size() == 4);
  for (const auto& b : j["boxes"]) {
    CHECK(b["mass"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(b["intervals"].size() == 2);
  }
  CHECK(j["diam1"].get<double>() == doctest::Approx(std::sqrt(0.5)));
  CHECK(j.contains("diam1_bound"));
}
