#pragma once

#include "metdisc/quadrature.hpp"
#include "metdisc/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metdisc {

struct RadialAtom {
  double radius = 0.0;
  Rational mass;
  double mass_d = 0.0;
};

// Non-negative finite measure xi on the radii set T, carried by its survival
// function sigma(r) = xi([r, L]).
class RadialMeasure {
 public:
  // Atoms at the given radii; c0 is computed as max xi([a, b)) / (b - a).
  static RadialMeasure from_atoms(std::string name, double upper_support, std::vector<RadialAtom> atoms);
  // Unit mass at every radius of a finite radii set.
  static RadialMeasure counting(std::span<const double> radii);
  // Absolutely continuous xi on [lo, hi]. Without an analytic survival
  // function, sigma is obtained by adaptive quadrature (abs tol 1e-9 or better).
  static RadialMeasure from_density(std::string name, double lo, double hi, Fn1 density,
                                    std::optional<double> c0 = std::nullopt,
                                    Fn1 survival = nullptr, std::vector<double> breakpoints = {});
  // d xi = sin r dr on [0, pi]; sigma(r) = 1 + cos r, c0 = 1.
  static RadialMeasure natural();
  // Lebesgue measure on [lo, hi]; c0 = 1.
  static RadialMeasure lebesgue(double lo, double hi);

  const std::string& name() const { return name_; }
  double upper_support() const { return hi_; }
  double lower_support() const { return lo_; }
  double total_mass() const { return total_mass_; }
  double survival(double r) const;
  // Exact survival for atomic measures.
  Rational survival_exact(double r) const;

  bool has_density() const { return static_cast<bool>(density_); }
  double density(double r) const { return density_ ? density_(r) : 0.0; }
  bool has_atoms() const { return !atoms_.empty(); }
  const std::vector<RadialAtom>& atoms() const { return atoms_; }
  std::optional<double> c0() const { return c0_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  // int f dxi: exact atom sum plus adaptive quadrature against the density,
  // with extra breakpoints where f is not smooth.
  QuadResult integrate(const Fn1& f, double tol, std::vector<double> extra_breakpoints = {}) const;

 private:
  RadialMeasure() = default;

  std::string name_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double total_mass_ = 0.0;
  Fn1 density_;
  Fn1 survival_;
  std::vector<RadialAtom> atoms_;
  std::optional<double> c0_;
  std::vector<double> breakpoints_;
};

}  // namespace metdisc
