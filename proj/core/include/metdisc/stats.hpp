#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>

namespace metdisc {

enum class Method { closed_form, exact_enumeration, quadrature, monte_carlo };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::exact_enumeration: return "exact_enumeration";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

// Welford accumulator with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  // Standard error of the mean.
  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Mean of a scalar quantity, with the way it was obtained.
struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for closed_form / exact paths
  std::size_t n_samples = 0;
  Method method = Method::closed_form;
};

}  // namespace metdisc
