#pragma once

#include "metdisc/radial_measure.hpp"
#include "metdisc/rational.hpp"
#include "metdisc/spaces.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace metdisc {

// Exhaustive evaluation of every ball functional on a finite space. T is
// Rational for exact results or double for the floating-point path; all
// sums run over the full label set.
template <class T>
class FiniteEngine {
 public:
  struct Atom {
    double radius;
    T mass;
  };

  explicit FiniteEngine(const FiniteSpace& space) : space_(space), n_(space.size()), w_(n_) {
    for (std::size_t i = 0; i < n_; ++i) w_[i] = weight_of(i);
    for (double r : space_.radii()) radius_index_.push_back(r);
    volumes_.resize(radius_index_.size());
    for (std::size_t k = 0; k < radius_index_.size(); ++k) volumes_[k] = compute_volumes(radius_index_[k]);
  }

  const FiniteSpace& space() const { return space_; }
  std::size_t size() const { return n_; }
  const T& weight(std::size_t i) const { return w_[i]; }

  bool in_ball(std::size_t center, double r, std::size_t x) const { return space_.dist(center, x) <= r; }

  // v_r(y) for every y.
  std::vector<T> volumes(double r) const {
    for (std::size_t k = 0; k < radius_index_.size(); ++k)
      if (radius_index_[k] == r) return volumes_[k];
    return compute_volumes(r);
  }

  T ball_volume(std::size_t y, double r) const {
    T v = T(0);
    for (std::size_t x = 0; x < n_; ++x)
      if (in_ball(y, r, x)) v += w_[x];
    return v;
  }

  // theta^Delta_r(y1, y2) = 1/2 mu(B_r(y1) symmetric-difference B_r(y2)).
  T sdm_r(double r, std::size_t y1, std::size_t y2) const {
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y)
      if (in_ball(y1, r, y) != in_ball(y2, r, y)) s += w_[y];
    return s / T(2);
  }

  // Kernel lambda_r(y1, y2) = int Lambda(B_r(y), y1) Lambda(B_r(y), y2) dmu(y).
  T kernel_r(double r, std::size_t y1, std::size_t y2) const {
    const auto v = volumes(r);
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y) {
      const T a = (in_ball(y, r, y1) ? T(1) : T(0)) - v[y];
      const T b = (in_ball(y, r, y2) ? T(1) : T(0)) - v[y];
      s += w_[y] * a * b;
    }
    return s;
  }

  // A0_r = int v_r(y)^2 dmu(y).
  T a0(double r) const {
    const auto v = volumes(r);
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y) s += w_[y] * v[y] * v[y];
    return s;
  }

  // A1_r(x) = 1/2 v_r(x) - int v_r(y) chi(B_r(x), y) dmu(y).
  T a1(double r, std::size_t x) const {
    const auto v = volumes(r);
    T s = v[x] / T(2);
    for (std::size_t y = 0; y < n_; ++y)
      if (in_ball(x, r, y)) s -= w_[y] * v[y];
    return s;
  }

  // <theta^Delta_r> = int (v_r - v_r^2) dmu.
  T mean_sdm_r(double r) const {
    const auto v = volumes(r);
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y) s += w_[y] * (v[y] - v[y] * v[y]);
    return s;
  }

  // Local discrepancy #(B_r(y) cap D) - N v_r(y) for a multiset of labels.
  T local_disc(std::span<const std::size_t> pts, std::size_t y, double r) const {
    T count = T(0);
    for (auto x : pts)
      if (in_ball(y, r, x)) count += T(1);
    return count - T(static_cast<long long>(pts.size())) * ball_volume(y, r);
  }

  // lambda_r[D] = int Lambda[B_r(y), D]^2 dmu(y).
  T quad_disc_r(std::span<const std::size_t> pts, double r) const {
    const auto v = volumes(r);
    const T N = T(static_cast<long long>(pts.size()));
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y) {
      T count = T(0);
      for (auto x : pts)
        if (in_ball(y, r, x)) count += T(1);
      const T lam = count - N * v[y];
      s += w_[y] * lam * lam;
    }
    return s;
  }

  // Sum of kernel_r over all ordered pairs of D, diagonal included.
  T quad_disc_r_kernel(std::span<const std::size_t> pts, double r) const {
    T s = T(0);
    for (auto a : pts)
      for (auto b : pts) s += kernel_r(r, a, b);
    return s;
  }

  // sum over ordered pairs of sdm_r.
  T sdm_r_sum(std::span<const std::size_t> pts, double r) const {
    T s = T(0);
    for (auto a : pts)
      for (auto b : pts) s += sdm_r(r, a, b);
    return s;
  }

  // ------------------------------------------------------------ radial

  static std::vector<Atom> atoms_of(const RadialMeasure& xi) {
    std::vector<Atom> out;
    for (const auto& a : xi.atoms()) {
      if constexpr (std::is_same_v<T, Rational>) out.push_back({a.radius, a.mass});
      else out.push_back({a.radius, static_cast<T>(a.mass_d)});
    }
    return out;
  }

  // sigma(r) = xi([r, L]).
  static T survival(const std::vector<Atom>& atoms, double r) {
    T s = T(0);
    for (const auto& a : atoms)
      if (a.radius >= r) s += a.mass;
    return s;
  }

  // theta^Delta(xi, y1, y2) through the survival function.
  T sdm_xi(const std::vector<Atom>& atoms, std::size_t y1, std::size_t y2) const {
    T s = T(0);
    for (std::size_t y = 0; y < n_; ++y) {
      const T d = survival(atoms, space_.dist(y1, y)) - survival(atoms, space_.dist(y2, y));
      s += w_[y] * (d < T(0) ? T(-d) : d);
    }
    return s / T(2);
  }

  // theta^Delta(xi, y1, y2) as the xi-integral of sdm_r.
  T sdm_xi_direct(const std::vector<Atom>& atoms, std::size_t y1, std::size_t y2) const {
    T s = T(0);
    for (const auto& a : atoms) s += a.mass * sdm_r(a.radius, y1, y2);
    return s;
  }

  T kernel_xi(const std::vector<Atom>& atoms, std::size_t y1, std::size_t y2) const {
    T s = T(0);
    for (const auto& a : atoms) s += a.mass * kernel_r(a.radius, y1, y2);
    return s;
  }

  T mean_sdm_xi(const std::vector<Atom>& atoms) const {
    T s = T(0);
    for (const auto& a : atoms) s += a.mass * mean_sdm_r(a.radius);
    return s;
  }

  T quad_disc_xi(std::span<const std::size_t> pts, const std::vector<Atom>& atoms) const {
    T s = T(0);
    for (const auto& a : atoms) s += a.mass * quad_disc_r(pts, a.radius);
    return s;
  }

  // theta^Delta[xi, D] over ordered pairs.
  T sdm_xi_sum(std::span<const std::size_t> pts, const std::vector<Atom>& atoms) const {
    T s = T(0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) s += sdm_xi(atoms, pts[i], pts[j]);
    return s * T(2);
  }

  // Exact mean of the base metric.
  T mean_distance() const {
    T s = T(0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) s += w_[i] * w_[j] * T(space_.dist(i, j));
    return s;
  }

 private:
  T weight_of(std::size_t i) const {
    if constexpr (std::is_same_v<T, Rational>) return space_.weight_exact(i);
    else return static_cast<T>(space_.weight(i));
  }

  std::vector<T> compute_volumes(double r) const {
    std::vector<T> v(n_);
    for (std::size_t y = 0; y < n_; ++y) v[y] = ball_volume(y, r);
    return v;
  }

  FiniteSpace space_;
  std::size_t n_;
  std::vector<T> w_;
  std::vector<double> radius_index_;
  std::vector<std::vector<T>> volumes_;
};

// Labels of finite-space points.
std::vector<std::size_t> labels_of(const PointSet& points);

}  // namespace metdisc
