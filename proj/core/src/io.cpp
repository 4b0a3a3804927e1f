#include "metdisc/io.hpp"

#include "metdisc/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace metdisc {
namespace {

SphereMetric parse_metric(const std::string& s) {
  if (s == "geodesic") return SphereMetric::geodesic;
  if (s == "chordal") return SphereMetric::chordal;
  throw ConfigError("unknown sphere metric '" + s + "'");
}

std::string metric_name(SphereMetric m) { return m == SphereMetric::geodesic ? "geodesic" : "chordal"; }

Rational weight_from_json(const json& w) {
  if (w.is_string()) return parse_rational(w.get<std::string>());
  if (w.is_number_integer()) return Rational(w.get<long long>());
  if (w.is_number()) {
    std::ostringstream s;
    s << std::setprecision(17) << w.get<double>();
    return parse_rational(s.str());
  }
  throw ConfigError("finite-space weights must be numbers or rational strings");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace

std::string schema_tag(const std::string& kind) { return "metdisc." + kind + "/" + std::to_string(kFormatVersion); }

Density density_from_json(const json& j, int dim) {
  const std::string name = j.is_string() ? j.get<std::string>() : j.value("name", std::string("uniform"));
  const json params = j.is_object() ? j : json::object();
  if (name == "uniform") return Density::uniform(dim);
  if (name == "power") return Density::power(dim, params.value("p", 2.0));
  if (name == "truncated_gaussian" || name == "gaussian")
    return Density::truncated_gaussian(dim, params.value("mean", 0.5), params.value("sigma", 0.25));
  throw ConfigError("unknown density '" + name + "'");
}

SpaceBundle space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("space definition needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  SpaceBundle b;
  b.spec = j;
  b.spec["schema"] = schema_tag("space");
  try {
    if (kind == "cube") {
      const int dim = j.value("dim", 1);
      if (dim < 1) throw ConfigError("cube dimension must be at least 1");
      const Density nu = density_from_json(j.value("density", json("uniform")), dim);
      b.space = std::make_shared<const SpaceDescriptor>(SpaceDescriptor::cube(nu));
      b.chart = std::make_shared<const Chart>(identity_chart(nu));
    } else if (kind == "sphere") {
      const int dim = j.value("dim", 2);
      const SphereMetric m = parse_metric(j.value("metric", std::string("geodesic")));
      b.space = std::make_shared<const SpaceDescriptor>(SpaceDescriptor::sphere(dim, m));
      b.chart = std::make_shared<const Chart>(builtin_chart(dim == 1 ? "circle" : "sphere2", m));
    } else if (kind == "chart") {
      const SphereMetric m = parse_metric(j.value("metric", std::string("geodesic")));
      const Chart c = builtin_chart(j.at("name").get<std::string>(), m);
      b.chart = std::make_shared<const Chart>(c);
      b.space = std::make_shared<const SpaceDescriptor>(SpaceDescriptor::chart(c));
    } else if (kind == "finite") {
      if (j.contains("hamming")) {
        const int n = j.at("hamming").get<int>();
        b.space = std::make_shared<const SpaceDescriptor>(
            SpaceDescriptor::finite(hamming_space(n), "hamming" + std::to_string(n)));
      } else {
        const auto labels = j.at("labels").get<std::vector<std::string>>();
        const std::size_t n = labels.size();
        const auto& rows = j.at("dist");
        if (rows.size() != n) throw ConfigError("finite space: \"dist\" needs one row per label");
        std::vector<double> dist(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          if (rows[i].size() != i) throw ConfigError("finite space: row " + std::to_string(i) + " of \"dist\" must hold " +
                                                     std::to_string(i) + " entries");
          for (std::size_t k = 0; k < i; ++k) dist[i * n + k] = dist[k * n + i] = rows[i][k].get<double>();
        }
        std::vector<Rational> w;
        if (j.contains("weights")) {
          for (const auto& x : j.at("weights")) w.push_back(weight_from_json(x));
        } else {
          w.assign(n, Rational(1, static_cast<long long>(n)));
        }
        b.space = std::make_shared<const SpaceDescriptor>(
            SpaceDescriptor::finite(FiniteSpace(labels, dist, w), j.value("name", std::string("finite"))));
      }
    } else {
      throw ConfigError("unknown space kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed space definition: ") + e.what());
  }
  return b;
}

SpaceBundle space_from_name(const std::string& name, int dim, const json& density, SphereMetric metric) {
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
    std::ifstream in(name);
    if (!in) throw ConfigError("cannot open space file '" + name + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("cannot parse space file '" + name + "': " + e.what());
    }
    return space_from_json(j);
  }
  if (name == "cube") return space_from_json({{"kind", "cube"}, {"dim", dim}, {"density", density}});
  if (name == "circle" || name == "sphere1")
    return space_from_json({{"kind", "sphere"}, {"dim", 1}, {"metric", metric_name(metric)}});
  if (name == "sphere2") return space_from_json({{"kind", "sphere"}, {"dim", 2}, {"metric", metric_name(metric)}});
  if (name.rfind("hamming", 0) == 0 && name.size() > 7) {
    const int n = static_cast<int>(to_number(name.substr(7), "Hamming dimension"));
    return space_from_json({{"kind", "finite"}, {"hamming", n}});
  }
  throw ConfigError("unknown space '" + name + "'");
}

std::shared_ptr<const RadialMeasure> radial_from_name(const std::string& name, const SpaceDescriptor& space) {
  const auto parts = split(name, ':');
  const std::string head = parts.empty() ? std::string() : parts[0];
  if (head == "counting") {
    if (!space.is_finite()) throw ConfigError("counting radial measure needs a finite space");
    return std::make_shared<const RadialMeasure>(RadialMeasure::counting(space.finite_space().radii()));
  }
  if (head == "natural") return std::make_shared<const RadialMeasure>(RadialMeasure::natural());
  if (head == "lebesgue") {
    double lo = 0.0, hi = space.diameter();
    if (parts.size() == 3) {
      lo = to_number(parts[1], "radius");
      hi = to_number(parts[2], "radius");
    } else if (parts.size() != 1) {
      throw ConfigError("expected lebesgue or lebesgue:<lo>:<hi>");
    }
    return std::make_shared<const RadialMeasure>(RadialMeasure::lebesgue(lo, hi));
  }
  throw ConfigError("unknown radial measure '" + name + "'");
}

json to_json(const VerificationReport& r) {
  json j{{"schema", schema_tag("report")},
         {"name", r.name},
         {"kind", r.kind},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"residual", r.residual},
         {"tolerance", r.tolerance},
         {"std_error", r.std_error},
         {"pass", r.pass},
         {"exact", r.exact},
         {"space", r.space},
         {"xi", r.xi},
         {"N", r.N},
         {"seed", r.seed}};
  if (r.exact) j["exact_residual"] = r.exact_residual;
  if (!r.values.empty()) j["values"] = r.values;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

json to_json(const MeanEstimate& e) {
  return {{"value", e.value},
          {"std_error", e.std_error},
          {"n_samples", e.n_samples},
          {"method", std::string(to_string(e.method))}};
}

json to_json(const DiscrepancyEstimate& e) {
  return {{"value", e.value},
          {"std_error", e.std_error},
          {"n_outer", e.n_outer},
          {"n_radial", e.n_radial},
          {"method", std::string(to_string(e.method))}};
}

json to_json(const CubePartition& P, const DiameterSummary& diam) {
  json boxes = json::array();
  for (const auto& b : P.boxes) {
    json intervals = json::array();
    for (int q = 0; q < P.d; ++q) intervals.push_back({b.lo[q], b.hi[q]});
    boxes.push_back({{"index", b.index}, {"intervals", intervals}, {"mass", b.mass}});
  }
  return {{"schema", schema_tag("partition")},
          {"k", P.k},
          {"d", P.d},
          {"N", P.N},
          {"policy", std::string(to_string(P.policy))},
          {"density", P.density_name},
          {"boxes", boxes},
          {"diam1", diam.diam1},
          {"diam_inf", diam.diam_inf},
          {"diam1_bound", diam.lemma_bound},
          {"diam1_proof_bound", diam.proof_bound}};
}

void write_points_csv(std::ostream& out, const SpaceDescriptor& space, const PointSet& points,
                      const std::vector<std::size_t>* cells, const json* config) {
  out << "# schema: " << schema_tag("points") << "\n";
  if (config) out << "# config: " << config->dump() << "\n";
  const auto* f = space.get_if<FiniteSpace>();
  const std::size_t dims = points.empty() ? 0 : points.front().x.size();
  if (f) {
    out << "label";
  } else {
    for (std::size_t c = 0; c < dims; ++c) out << (c ? "," : "") << "x" << c;
  }
  if (cells) out << ",cell";
  out << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (f) {
      out << f->label(points[i].label_index());
    } else {
      for (std::size_t c = 0; c < points[i].x.size(); ++c) out << (c ? "," : "") << points[i].x[c];
    }
    if (cells) out << "," << (*cells)[i];
    out << "\n";
  }
}

PointSet read_points_csv(std::istream& in, const SpaceDescriptor& space) {
  PointSet out;
  std::string line;
  bool header = true;
  std::size_t label_columns = 0;
  const auto* f = space.get_if<FiniteSpace>();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (header) {
      header = false;
      for (const auto& c : cols)
        if (c != "cell") ++label_columns;
      continue;
    }
    if (cols.size() < label_columns) throw InputError("short row in point CSV: '" + line + "'");
    if (f) {
      auto idx = f->find_label(cols[0]);
      if (!idx) throw DomainError("unknown label '" + cols[0] + "'");
      out.push_back(Point::label(*idx));
    } else {
      std::vector<double> x;
      for (std::size_t c = 0; c < label_columns; ++c) x.push_back(to_number(cols[c], "coordinate"));
      out.emplace_back(std::move(x));
    }
    validate_point(space, out.back());
  }
  return out;
}

}  // namespace metdisc
