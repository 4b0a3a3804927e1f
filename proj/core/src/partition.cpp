#include "metdisc/partition.hpp"

#include "metdisc/errors.hpp"
#include "metdisc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace metdisc {
namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<Interval> degenerate_split(std::size_t k) {
  std::vector<Interval> out(k, Interval{1.0, 1.0});
  out[0] = Interval{0.0, 1.0};
  return out;
}

bool interval_contains(const Interval& iv, double z) {
  if (!(iv.hi > iv.lo)) return false;
  if (z >= iv.lo && z < iv.hi) return true;
  return iv.hi == 1.0 && z == 1.0;
}

}  // namespace

double inverse_cdf(const Fn1& F, double t, double tol) {
  const double f0 = F(0.0), f1 = F(1.0);
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(f1), std::abs(t)});
  if (f1 < f0 - slack) throw InputError("inverse_cdf: F(1) < F(0), distribution function is not monotone");
  if (t < f0 - slack || t > f1 + slack) {
    std::ostringstream msg;
    msg << "inverse_cdf: target " << t << " outside [F(0), F(1)] = [" << f0 << ", " << f1 << "]";
    throw RangeError(msg.str());
  }
  if (f1 <= t + slack) return 1.0;
  double lo = 0.0, hi = 1.0, flo = f0, fhi = f1;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = F(mid);
    if (fm < flo - slack || fm > fhi + slack)
      throw InputError("inverse_cdf: distribution function is not monotone near z = " + std::to_string(mid));
    if (fm <= t + slack) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return lo;
}

std::vector<Interval> split_interval(const Fn1& F, double total, std::span<const std::int64_t> weights,
                                     double tol) {
  const std::size_t k = weights.size();
  if (k == 0) throw InputError("split_interval: need at least one weight");
  std::int64_t n = 0;
  for (auto w : weights) {
    if (w < 0) throw InputError("split_interval: negative weight");
    n += w;
  }
  if (n == 0 || !(total > 0.0)) return degenerate_split(k);
  std::vector<Interval> out(k);
  std::int64_t cum = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    cum += weights[j];
    double lam = 1.0;
    if (j + 1 < k) {
      const double t = static_cast<double>(cum) * total / static_cast<double>(n);
      lam = std::max(prev, inverse_cdf(F, t, tol));
    }
    out[j] = Interval{prev, lam};
    prev = lam;
  }
  return out;
}

OccupancyPolicy parse_policy(std::string_view name) {
  if (name == "lexicographic") return OccupancyPolicy::lexicographic;
  if (name == "balanced") return OccupancyPolicy::balanced;
  throw ConfigError("unknown occupancy policy '" + std::string(name) + "' (expected lexicographic or balanced)");
}

std::string_view to_string(OccupancyPolicy p) {
  return p == OccupancyPolicy::lexicographic ? "lexicographic" : "balanced";
}

std::vector<int> OccupancyTensor::unflatten(std::size_t flat) const {
  std::vector<int> idx(d);
  for (int j = d - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(flat % k);
    flat /= k;
  }
  return idx;
}

std::size_t OccupancyTensor::flatten(std::span<const int> index) const {
  std::size_t f = 0;
  for (int i : index) f = f * k + static_cast<std::size_t>(i);
  return f;
}

std::size_t OccupancyTensor::marginal(std::span<const int> prefix) const {
  const std::size_t q = prefix.size();
  const std::size_t span = ipow(k, d - static_cast<int>(q));
  const std::size_t start = flatten(prefix) * span;
  std::size_t s = 0;
  for (std::size_t i = start; i < start + span; ++i) s += bits[i];
  return s;
}

int grid_size(std::size_t N, int d) {
  int k = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(N), 1.0 / d))));
  while (ipow(k, d) < N) ++k;
  while (k > 1 && ipow(k - 1, d) >= N) --k;
  return k;
}

namespace {

// Spreads `count` ones over the k^(d - level) sub-grid starting at `offset`,
// giving each first-axis slice floor or ceil of count / k.
void fill_balanced(std::vector<std::uint8_t>& bits, std::size_t offset, std::size_t count, int k, int levels) {
  if (levels == 0) {
    bits[offset] = count > 0 ? 1 : 0;
    return;
  }
  const std::size_t span = ipow(k, levels - 1);
  const std::size_t base = count / k, extra = count % k;
  for (int i = 0; i < k; ++i) {
    const std::size_t c = base + (static_cast<std::size_t>(i) < extra ? 1 : 0);
    fill_balanced(bits, offset + i * span, c, k, levels - 1);
  }
}

}  // namespace

OccupancyTensor assign_occupancy(std::size_t N, int d, OccupancyPolicy policy) {
  if (N < 1) throw InputError("occupancy needs N >= 1");
  if (d < 1) throw InputError("occupancy needs d >= 1");
  OccupancyTensor t;
  t.d = d;
  t.k = grid_size(N, d);
  t.N = N;
  t.bits.assign(ipow(t.k, d), 0);
  if (policy == OccupancyPolicy::lexicographic) {
    std::fill(t.bits.begin(), t.bits.begin() + static_cast<std::ptrdiff_t>(N), 1);
  } else {
    fill_balanced(t.bits, 0, N, t.k, d);
  }
  return t;
}

double Box::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

double Box::side_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) s += hi[i] - lo[i];
  return s;
}

bool Box::contains(std::span<const double> z) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!interval_contains(Interval{lo[i], hi[i]}, z[i])) return false;
  return true;
}

double CubePartition::length(std::span<const int> prefix) const {
  const std::size_t q = prefix.size();
  if (q == 0 || q > static_cast<std::size_t>(d)) throw InputError("prefix length must be in [1, d]");
  return stage[q - 1][occupancy.flatten(prefix)].length();
}

Box CubePartition::stage_box(std::span<const int> prefix) const {
  Box b;
  b.index.assign(prefix.begin(), prefix.end());
  b.lo.assign(d, 0.0);
  b.hi.assign(d, 1.0);
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const auto& iv = stage[j][occupancy.flatten(prefix.subspan(0, j + 1))];
    b.lo[j] = iv.lo;
    b.hi[j] = iv.hi;
  }
  return b;
}

std::optional<std::size_t> CubePartition::locate(std::span<const double> z) const {
  if (z.size() != static_cast<std::size_t>(d)) return std::nullopt;
  std::size_t flat = 0;
  for (int j = 0; j < d; ++j) {
    bool found = false;
    for (int i = 0; i < k; ++i) {
      if (interval_contains(stage[j][flat * k + i], z[j])) {
        flat = flat * k + i;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  if (!occupancy.bits[flat]) return std::nullopt;
  // Occupied boxes are stored in row-major order.
  std::size_t rank = 0;
  for (std::size_t i = 0; i < flat; ++i) rank += occupancy.bits[i];
  return rank;
}

double box_mass(const Density& nu, std::span<const double> lo, std::span<const double> hi, double tol) {
  std::vector<std::vector<double>> bp = nu.breakpoints();
  if (!bp.empty() && bp.size() != lo.size()) bp.clear();
  const QuadResult r = integrate_box([&](std::span<const double> z) { return nu(z); }, lo, hi, tol, bp);
  if (!r.converged) throw NumericError("box quadrature did not converge for density '" + nu.name() + "'");
  return r.value;
}

CubePartition build_cube_partition(const Density& nu, std::size_t N, OccupancyPolicy policy, double tol) {
  const int d = nu.dim();
  CubePartition P;
  P.d = d;
  P.N = N;
  P.policy = policy;
  P.density_name = nu.name();
  P.tol = tol;
  P.occupancy = assign_occupancy(N, d, policy);
  const int k = P.occupancy.k;
  P.k = k;

  // counts[q][flat prefix of length q + 1]
  std::vector<std::vector<std::int64_t>> counts(d);
  counts[d - 1].assign(P.occupancy.bits.begin(), P.occupancy.bits.end());
  for (int q = d - 2; q >= 0; --q) {
    counts[q].assign(ipow(k, q + 1), 0);
    for (std::size_t i = 0; i < counts[q + 1].size(); ++i) counts[q][i / k] += counts[q + 1][i];
  }

  const auto& bps = nu.breakpoints();
  const double cdf_tol = tol * 1e-2;
  const double inner_tol = tol * 1e-3;
  P.stage.resize(d);
  double total = 0.0;
  for (int q = 0; q < d; ++q) {
    const std::size_t n_prefix = ipow(k, q);
    P.stage[q].assign(n_prefix * k, Interval{});
    std::vector<double> totals(n_prefix, 0.0);
    parallel_for(n_prefix, [&](std::size_t pf) {
      const std::int64_t n = q == 0 ? static_cast<std::int64_t>(N) : counts[q - 1][pf];
      std::span<const std::int64_t> weights(counts[q].data() + pf * k, static_cast<std::size_t>(k));
      std::vector<Interval> split;
      if (n == 0) {
        split = degenerate_split(k);
      } else {
        // Box of the current prefix on axes < q; the rest of I^d beyond q.
        std::vector<double> lo, hi;
        std::vector<std::vector<double>> inner_bp;
        std::size_t flat = pf;
        std::vector<int> prefix(q);
        for (int j = q - 1; j >= 0; --j) {
          prefix[j] = static_cast<int>(flat % k);
          flat /= k;
        }
        bool empty = false;
        for (int j = 0; j < d; ++j) {
          if (j == q) continue;
          if (j < q) {
            std::size_t f = 0;
            for (int m = 0; m <= j; ++m) f = f * k + prefix[m];
            const Interval& iv = P.stage[j][f];
            if (!(iv.hi > iv.lo)) empty = true;
            lo.push_back(iv.lo);
            hi.push_back(iv.hi);
          } else {
            lo.push_back(0.0);
            hi.push_back(1.0);
          }
          inner_bp.push_back(bps.empty() ? std::vector<double>{} : bps[j]);
        }
        std::vector<double> axis_bp = bps.empty() ? std::vector<double>{} : bps[q];
        Fn1 g;
        if (d == 1) {
          g = [&nu](double z) {
            const double x[1] = {z};
            return nu(std::span<const double>(x, 1));
          };
        } else {
          g = [&, lo, hi, inner_bp](double z) {
            std::vector<double> full(d);
            auto f = [&](std::span<const double> rest) {
              for (int j = 0, r = 0; j < d; ++j) full[j] = j == q ? z : rest[r++];
              return nu(full);
            };
            const QuadResult r = integrate_box(f, lo, hi, inner_tol, inner_bp);
            return r.value;
          };
        }
        double mass = 0.0;
        if (!empty) {
          TabulatedCdf cdf(g, cdf_tol, axis_bp);
          mass = cdf.total();
          if (!std::isfinite(mass) || mass < 0.0) throw NumericError("density is not integrable on a partition box");
          split = split_interval([&cdf](double z) { return cdf(z); }, mass, weights);
        } else {
          split = degenerate_split(k);
        }
        totals[pf] = mass;
      }
      std::copy(split.begin(), split.end(), P.stage[q].begin() + static_cast<std::ptrdiff_t>(pf * k));
    });
    if (q == 0) total = totals[0];
  }
  P.total_mass = total;

  for (std::size_t flat = 0; flat < P.occupancy.bits.size(); ++flat) {
    if (!P.occupancy.bits[flat]) continue;
    const auto idx = P.occupancy.unflatten(flat);
    Box b = P.stage_box(idx);
    P.boxes.push_back(std::move(b));
  }
  parallel_for(P.boxes.size(), [&](std::size_t i) {
    P.boxes[i].mass = box_mass(nu, P.boxes[i].lo, P.boxes[i].hi, tol * 1e-2);
  });
  return P;
}

DiameterSummary average_diameter(const CubePartition& P) {
  DiameterSummary s;
  for (const auto& b : P.boxes) {
    const double diam = b.diameter();
    s.diam1 += diam;
    s.diam_inf = std::max(s.diam_inf, diam);
    s.side_sum += b.side_sum();
  }
  const double N = static_cast<double>(P.N);
  s.diam1 /= N;
  s.side_sum /= N;
  s.proof_bound = P.d * std::pow(static_cast<double>(P.k), P.d - 1) / N;
  s.lemma_bound = P.d * std::pow(2.0, P.d - 1) * std::pow(N, -1.0 / P.d);
  return s;
}

double SpacePartition::cell_mass(std::size_t i) const {
  if (is_finite()) {
    const auto& f = space->finite_space();
    double m = 0.0;
    for (auto x : finite_cells[i]) m += f.weight(x);
    return m;
  }
  return cube.boxes[i].mass;
}

std::optional<std::size_t> SpacePartition::locate(const Point& p) const {
  if (is_finite()) {
    const std::size_t label = p.label_index();
    for (std::size_t c = 0; c < finite_cells.size(); ++c)
      if (std::find(finite_cells[c].begin(), finite_cells[c].end(), label) != finite_cells[c].end()) return c;
    return std::nullopt;
  }
  if (!chart->inverse) return std::nullopt;
  const auto z = chart->inverse(p);
  if (!z) return std::nullopt;
  return cube.locate(*z);
}

SpacePartition pushforward_partition(const Chart& chart, const CubePartition& P) {
  if (chart.dim != P.d) throw InputError("chart dimension does not match the partition");
  if (!chart.nu || chart.nu->name() != P.density_name)
    throw InputError("partition was built for density '" + P.density_name + "', chart '" + chart.name +
                     "' carries '" + (chart.nu ? chart.nu->name() : std::string("none")) + "'");
  SpacePartition R;
  R.space = std::make_shared<const SpaceDescriptor>(SpaceDescriptor::chart(chart));
  R.chart = std::make_shared<const Chart>(chart);
  R.cube = P;
  R.N = P.N;
  R.lip_bound = chart.lip_bound;
  R.diam1_theta = chart.lip_bound * average_diameter(P).diam1;
  return R;
}

SpacePartition finite_partition(const FiniteSpace& space, std::vector<std::vector<std::size_t>> cells,
                                std::string name) {
  if (cells.empty()) throw InputError("finite partition needs at least one cell");
  const std::size_t N = cells.size();
  std::vector<int> seen(space.size(), 0);
  Rational target(1, static_cast<long long>(N));
  double diam_sum = 0.0;
  for (const auto& c : cells) {
    Rational m = 0;
    double diam = 0.0;
    for (auto x : c) {
      if (x >= space.size()) throw InputError("finite partition cell references an unknown label");
      if (seen[x]++) throw InputError("finite partition cells overlap");
      m += space.weight_exact(x);
      for (auto y : c) diam = std::max(diam, space.dist(x, y));
    }
    if (m != target) throw InputError("finite partition cell mass " + to_string(m) + " differs from 1/N");
    diam_sum += diam;
  }
  SpacePartition R;
  R.space = std::make_shared<const SpaceDescriptor>(SpaceDescriptor::finite(space, std::move(name)));
  R.finite_cells = std::move(cells);
  R.N = N;
  R.diam1_theta = diam_sum / static_cast<double>(N);
  return R;
}

SpacePartition trivial_finite_partition(const FiniteSpace& space, std::string name) {
  std::vector<std::vector<std::size_t>> cells(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) cells[i] = {i};
  return finite_partition(space, std::move(cells), std::move(name));
}

OmegaSample sample_omega(const SpacePartition& R, std::uint64_t seed) {
  OmegaSample s;
  s.seed = seed;
  s.points.resize(R.N);
  s.cells.resize(R.N);
  parallel_for(R.N, [&](std::size_t i) {
    Rng rng(seed, 0x6f6d656761ULL, i);
    s.cells[i] = i;
    if (R.is_finite()) {
      const auto& f = R.space->finite_space();
      const auto& cell = R.finite_cells[i];
      double total = 0.0;
      for (auto x : cell) total += f.weight(x);
      const double u = rng.uniform() * total;
      double acc = 0.0;
      std::size_t pick = cell.back();
      for (auto x : cell) {
        acc += f.weight(x);
        if (u < acc) {
          pick = x;
          break;
        }
      }
      s.points[i] = Point::label(pick);
    } else {
      const Box& b = R.cube.boxes[i];
      const auto z = sample_density_in_box(*R.chart, b.lo, b.hi, rng);
      s.points[i] = R.chart->forward(z);
    }
  });
  return s;
}

}  // namespace metdisc
