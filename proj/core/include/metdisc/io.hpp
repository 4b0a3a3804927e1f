#pragma once

#include "metdisc/discrepancy.hpp"
#include "metdisc/partition.hpp"
#include "metdisc/radial_measure.hpp"
#include "metdisc/report.hpp"
#include "metdisc/spaces.hpp"
#include "metdisc/stats.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace metdisc {

using json = nlohmann::json;

// Version tag written into the "schema" field of every file.
inline constexpr int kFormatVersion = 1;
std::string schema_tag(const std::string& kind);

// {"name": "uniform" | "power" | "truncated_gaussian", "p", "mean", "sigma"}
Density density_from_json(const json& j, int dim);

// A space together with the chart used to partition it (if any) and the
// resolved description it was built from.
struct SpaceBundle {
  std::shared_ptr<const SpaceDescriptor> space;
  std::shared_ptr<const Chart> chart;
  json spec;
};

// {"kind": "cube" | "sphere" | "finite" | "chart", ...}. Finite spaces give
// labels, a lower-triangular "dist" (row i holds d(i, 0..i-1)) and "weights"
// as rational strings or numbers, or just {"hamming": n}.
SpaceBundle space_from_json(const json& j);

// Short names: cube, circle, sphere1, sphere2, hamming<n>, or a path to a
// JSON space file. dim, density and metric fill in the unnamed parameters.
SpaceBundle space_from_name(const std::string& name, int dim, const json& density, SphereMetric metric);

// counting | natural | lebesgue | lebesgue:<lo>:<hi>. Counting uses the radii
// set of a finite space; lebesgue defaults to [0, L].
std::shared_ptr<const RadialMeasure> radial_from_name(const std::string& name, const SpaceDescriptor& space);

json to_json(const VerificationReport& r);
json to_json(const MeanEstimate& e);
json to_json(const DiscrepancyEstimate& e);
json to_json(const CubePartition& P, const DiameterSummary& diam);

// CSV with one row per point: coordinates (or the label on finite spaces)
// followed by the cell index when given. Leading '#' lines carry the schema
// tag and, when given, the run configuration.
void write_points_csv(std::ostream& out, const SpaceDescriptor& space, const PointSet& points,
                      const std::vector<std::size_t>* cells = nullptr, const json* config = nullptr);
PointSet read_points_csv(std::istream& in, const SpaceDescriptor& space);

}  // namespace metdisc
