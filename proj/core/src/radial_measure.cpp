#include "metdisc/radial_measure.hpp"

#include "metdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace metdisc {

RadialMeasure RadialMeasure::from_atoms(std::string name, double upper_support, std::vector<RadialAtom> atoms) {
  if (atoms.empty()) throw ConfigError("atomic radial measure needs at least one atom");
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.radius < b.radius; });
  RadialMeasure m;
  m.name_ = std::move(name);
  m.lo_ = atoms.front().radius;
  m.hi_ = upper_support;
  Rational total = 0;
  for (auto& a : atoms) {
    if (a.mass < 0) throw InputError("atom masses must be non-negative");
    if (a.radius < 0.0 || a.radius > upper_support) throw InputError("atom radius outside [0, L]");
    a.mass_d = to_double(a.mass);
    total += a.mass;
  }
  m.total_mass_ = to_double(total);
  // c0 = max over atom radii a < b of xi([a, b)) / (b - a).
  double c0 = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double mass = 0.0;
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      mass += atoms[j - 1].mass_d;
      const double gap = atoms[j].radius - atoms[i].radius;
      if (gap > 0.0) c0 = std::max(c0, mass / gap);
    }
  }
  m.c0_ = c0;
  m.atoms_ = std::move(atoms);
  return m;
}

RadialMeasure RadialMeasure::counting(std::span<const double> radii) {
  if (radii.empty()) throw ConfigError("counting measure needs a non-empty radii set");
  std::vector<RadialAtom> atoms;
  for (double r : radii) atoms.push_back({r, Rational(1), 1.0});
  const double L = *std::max_element(radii.begin(), radii.end());
  return from_atoms("counting", L, std::move(atoms));
}

RadialMeasure RadialMeasure::from_density(std::string name, double lo, double hi, Fn1 density,
                                          std::optional<double> c0, Fn1 survival,
                                          std::vector<double> breakpoints) {
  if (!(hi > lo) || lo < 0.0) throw ConfigError("radial density support must satisfy 0 <= lo < hi");
  if (!density) throw ConfigError("radial density function missing");
  RadialMeasure m;
  m.name_ = std::move(name);
  m.lo_ = lo;
  m.hi_ = hi;
  m.density_ = std::move(density);
  m.c0_ = c0;
  m.breakpoints_ = std::move(breakpoints);
  if (survival) {
    m.survival_ = std::move(survival);
  } else {
    const double width = hi - lo;
    const Fn1 g = [dens = m.density_, lo, width](double t) { return dens(lo + t * width) * width; };
    std::vector<double> bp;
    for (double b : m.breakpoints_)
      if (b > lo && b < hi) bp.push_back((b - lo) / width);
    auto cdf = std::make_shared<const TabulatedCdf>(g, 1e-10, bp);
    m.survival_ = [cdf, lo, width](double r) { return cdf->total() - (*cdf)((r - lo) / width); };
  }
  m.total_mass_ = m.survival_(lo);
  if (!(m.total_mass_ >= 0.0) || !std::isfinite(m.total_mass_))
    throw NumericError("radial density is not integrable");
  return m;
}

RadialMeasure RadialMeasure::natural() {
  return from_density(
      "natural", 0.0, std::numbers::pi, [](double r) { return std::sin(r); }, 1.0,
      [](double r) { return 1.0 + std::cos(r); });
}

RadialMeasure RadialMeasure::lebesgue(double lo, double hi) {
  return from_density(
      "lebesgue", lo, hi, [](double) { return 1.0; }, 1.0, [hi](double r) { return hi - r; });
}

double RadialMeasure::survival(double r) const {
  if (!atoms_.empty()) {
    double s = 0.0;
    for (const auto& a : atoms_)
      if (a.radius >= r) s += a.mass_d;
    return s;
  }
  if (r <= lo_) return total_mass_;
  if (r > hi_) return 0.0;
  return std::clamp(survival_(r), 0.0, total_mass_);
}

Rational RadialMeasure::survival_exact(double r) const {
  if (atoms_.empty()) throw ConfigError("exact survival needs an atomic radial measure");
  Rational s = 0;
  for (const auto& a : atoms_)
    if (a.radius >= r) s += a.mass;
  return s;
}

QuadResult RadialMeasure::integrate(const Fn1& f, double tol, std::vector<double> extra) const {
  QuadResult out;
  for (const auto& a : atoms_) out.value += a.mass_d * f(a.radius);
  out.evaluations = atoms_.size();
  if (density_) {
    extra.insert(extra.end(), breakpoints_.begin(), breakpoints_.end());
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    const QuadResult q = metdisc::integrate([&](double r) { return f(r) * density_(r); }, lo_, hi_, tol, extra);
    out.value += q.value;
    out.error = q.error;
    out.evaluations += q.evaluations;
    out.converged = q.converged;
  }
  return out;
}

}  // namespace metdisc
