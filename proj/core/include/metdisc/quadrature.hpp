#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace metdisc {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // |K15 - G7| summed over accepted panels
  std::size_t evaluations = 0;
  bool converged = true;
};

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(std::span<const double>)>;

// Single 15-point Gauss-Kronrod panel with its embedded 7-point Gauss estimate.
QuadResult gauss_kronrod15(const Fn1& f, double a, double b);

// Adaptive Gauss-Kronrod on [a, b]. Panels are bisected until |K15 - G7| is
// below abs_tol times the panel's share of [a, b]. Breakpoints inside (a, b)
// start a new panel so kinks and jumps never fall inside one.
QuadResult integrate(const Fn1& f, double a, double b, double abs_tol,
                     std::span<const double> breakpoints = {}, int max_depth = 48);

// Nested adaptive quadrature over the box prod [lo_i, hi_i]. breakpoints, when
// non-empty, holds one list per axis.
QuadResult integrate_box(const FnN& f, std::span<const double> lo, std::span<const double> hi,
                         double abs_tol,
                         const std::vector<std::vector<double>>& breakpoints = {});

// Cumulative integral Phi(z) = int_0^z g on [0, 1], tabulated on adaptive
// Kronrod panels. Inside a panel Phi uses the degree-14 interpolant of g
// through the Kronrod nodes, integrated exactly, so Phi is continuous and its
// value at panel ends equals the K15 sums.
class TabulatedCdf {
 public:
  TabulatedCdf(const Fn1& g, double abs_tol, std::span<const double> breakpoints = {});

  double total() const { return total_; }
  double operator()(double z) const;
  std::size_t panels() const { return panels_.size(); }
  std::size_t evaluations() const { return evaluations_; }

 private:
  struct Panel {
    double a, b;
    std::array<double, 15> values;  // g at the Kronrod nodes
    double integral;
    double cumulative_before;
  };
  void refine(const Fn1& g, double a, double b, double tol_density, int depth);
  double partial(const Panel& p, double z) const;

  std::vector<Panel> panels_;
  double total_ = 0.0;
  std::size_t evaluations_ = 0;
};

}  // namespace metdisc
