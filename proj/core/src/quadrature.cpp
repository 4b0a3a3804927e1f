#include "metdisc/quadrature.hpp"

#include "metdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metdisc {
namespace {

// Kronrod abscissae on [-1, 1]: index 0..6 positive (descending), 7 is the
// centre. Odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 8-point Gauss-Legendre, positive half.
constexpr std::array<double, 4> kXgl8 = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                         0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kWgl8 = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                         0.2223810344533744705443560, 0.1012285362903762591525314};

// The 15 Kronrod nodes in ascending order on [-1, 1].
constexpr std::array<double, 15> sorted_nodes() {
  std::array<double, 15> x{};
  for (int i = 0; i < 7; ++i) {
    x[i] = -kXgk[i];
    x[14 - i] = kXgk[i];
  }
  x[7] = 0.0;
  return x;
}
constexpr std::array<double, 15> kNodes = sorted_nodes();

constexpr std::array<double, 15> sorted_weights() {
  std::array<double, 15> w{};
  for (int i = 0; i < 7; ++i) {
    w[i] = kWgk[i];
    w[14 - i] = kWgk[i];
  }
  w[7] = kWgk[7];
  return w;
}
constexpr std::array<double, 15> kWeights = sorted_weights();

// Gauss (7-point) weights aligned with kNodes; zero on pure Kronrod nodes.
constexpr std::array<double, 15> gauss_weights() {
  std::array<double, 15> w{};
  for (int i = 0; i < 7; ++i) {
    if (i % 2 == 1) {
      w[i] = kWg[i / 2];
      w[14 - i] = kWg[i / 2];
    }
  }
  w[7] = kWg[3];
  return w;
}
constexpr std::array<double, 15> kGaussWeights = gauss_weights();

// Barycentric weights for interpolation through kNodes.
std::array<double, 15> barycentric_weights() {
  std::array<double, 15> w{};
  for (int j = 0; j < 15; ++j) {
    double prod = 1.0;
    for (int m = 0; m < 15; ++m) {
      if (m != j) prod *= (kNodes[j] - kNodes[m]);
    }
    w[j] = 1.0 / prod;
  }
  return w;
}
const std::array<double, 15>& bary() {
  static const std::array<double, 15> w = barycentric_weights();
  return w;
}

struct Panel15 {
  std::array<double, 15> values;
  double kronrod;
  double gauss;
};

template <class F>
Panel15 eval_panel(const F& f, double a, double b) {
  Panel15 p{};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * kNodes[i]);
    p.values[i] = v;
    k += kWeights[i] * v;
    g += kGaussWeights[i] * v;
  }
  p.kronrod = k * h;
  p.gauss = g * h;
  return p;
}

std::vector<double> segment_points(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> pts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void adapt(const Fn1& f, double a, double b, double tol_density, int depth, int max_depth,
           QuadResult& out) {
  const Panel15 p = eval_panel(f, a, b);
  out.evaluations += 15;
  const double err = std::abs(p.kronrod - p.gauss);
  const double allowed = tol_density * (b - a);
  if (err <= allowed || err <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(p.kronrod)) {
    out.value += p.kronrod;
    out.error += err;
    return;
  }
  if (depth >= max_depth) {
    out.value += p.kronrod;
    out.error += err;
    out.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, tol_density, depth + 1, max_depth, out);
  adapt(f, m, b, tol_density, depth + 1, max_depth, out);
}

}  // namespace

QuadResult gauss_kronrod15(const Fn1& f, double a, double b) {
  const Panel15 p = eval_panel(f, a, b);
  return QuadResult{p.kronrod, std::abs(p.kronrod - p.gauss), 15, true};
}

QuadResult integrate(const Fn1& f, double a, double b, double abs_tol,
                     std::span<const double> breakpoints, int max_depth) {
  QuadResult out;
  if (!(b > a)) return out;
  const double tol_density = abs_tol / (b - a);
  const auto pts = segment_points(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    adapt(f, pts[i], pts[i + 1], tol_density, 0, max_depth, out);
  }
  if (!std::isfinite(out.value)) throw NumericError("integrate: non-finite integrand");
  return out;
}

namespace {

QuadResult integrate_axis(const FnN& f, std::vector<double>& x, std::size_t axis,
                          std::span<const double> lo, std::span<const double> hi, double tol,
                          const std::vector<std::vector<double>>& breakpoints) {
  const std::size_t d = lo.size();
  std::span<const double> bp;
  if (!breakpoints.empty()) bp = breakpoints[axis];
  if (axis + 1 == d) {
    return integrate(
        [&](double t) {
          x[axis] = t;
          return f(x);
        },
        lo[axis], hi[axis], tol, bp);
  }
  QuadResult inner_acc;
  auto inner = [&](double t) {
    x[axis] = t;
    const QuadResult r = integrate_axis(f, x, axis + 1, lo, hi, tol, breakpoints);
    inner_acc.evaluations += r.evaluations;
    inner_acc.converged = inner_acc.converged && r.converged;
    return r.value;
  };
  QuadResult outer = integrate(inner, lo[axis], hi[axis], tol, bp);
  outer.evaluations += inner_acc.evaluations;
  outer.converged = outer.converged && inner_acc.converged;
  // Inner errors integrate against a width of at most one.
  outer.error += tol * (hi[axis] - lo[axis]);
  return outer;
}

}  // namespace

QuadResult integrate_box(const FnN& f, std::span<const double> lo, std::span<const double> hi,
                         double abs_tol, const std::vector<std::vector<double>>& breakpoints) {
  if (lo.size() != hi.size() || lo.empty()) throw InputError("integrate_box: bad box");
  if (!breakpoints.empty() && breakpoints.size() != lo.size())
    throw InputError("integrate_box: one breakpoint list per axis expected");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) return QuadResult{};
  }
  std::vector<double> x(lo.begin(), lo.end());
  const double tol = abs_tol / static_cast<double>(lo.size());
  return integrate_axis(f, x, 0, lo, hi, tol, breakpoints);
}

TabulatedCdf::TabulatedCdf(const Fn1& g, double abs_tol, std::span<const double> breakpoints) {
  const auto pts = segment_points(0.0, 1.0, breakpoints);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) refine(g, pts[i], pts[i + 1], abs_tol, 0);
  double acc = 0.0;
  for (auto& p : panels_) {
    p.cumulative_before = acc;
    acc += p.integral;
  }
  total_ = acc;
  if (!std::isfinite(total_)) throw NumericError("TabulatedCdf: non-finite density integral");
}

void TabulatedCdf::refine(const Fn1& g, double a, double b, double tol_density, int depth) {
  const Panel15 p = eval_panel(g, a, b);
  evaluations_ += 15;
  const double err = std::abs(p.kronrod - p.gauss);
  if (err > tol_density * (b - a) && depth < 48 &&
      err > 64.0 * std::numeric_limits<double>::epsilon() * std::abs(p.kronrod)) {
    const double m = 0.5 * (a + b);
    refine(g, a, m, tol_density, depth + 1);
    refine(g, m, b, tol_density, depth + 1);
    return;
  }
  panels_.push_back(Panel{a, b, p.values, p.kronrod, 0.0});
}

double TabulatedCdf::partial(const Panel& p, double z) const {
  if (z <= p.a) return 0.0;
  if (z >= p.b) return p.integral;
  const double c = 0.5 * (p.a + p.b);
  const double h = 0.5 * (p.b - p.a);
  const auto& w = bary();
  auto interp = [&](double x) {
    const double t = (x - c) / h;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 15; ++j) {
      const double diff = t - kNodes[j];
      if (diff == 0.0) return p.values[j];
      const double q = w[j] / diff;
      num += q * p.values[j];
      den += q;
    }
    return num / den;
  };
  const double mc = 0.5 * (p.a + z);
  const double mh = 0.5 * (z - p.a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    s += kWgl8[i] * (interp(mc - mh * kXgl8[i]) + interp(mc + mh * kXgl8[i]));
  }
  return s * mh;
}

double TabulatedCdf::operator()(double z) const {
  if (panels_.empty() || z <= 0.0) return 0.0;
  if (z >= 1.0) return total_;
  auto it = std::upper_bound(panels_.begin(), panels_.end(), z,
                             [](double v, const Panel& p) { return v < p.b; });
  if (it == panels_.end()) return total_;
  return it->cumulative_before + partial(*it, z);
}

}  // namespace metdisc
