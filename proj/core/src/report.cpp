#include "metdisc/report.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace metdisc {

VerificationReport& VerificationReport::finalize() {
  if (kind == "upper_bound") residual = std::max(0.0, lhs - rhs);
  else residual = lhs - rhs;
  if (exact) pass = residual == 0.0 && (exact_residual.empty() || exact_residual == "0");
  else pass = std::isfinite(residual) && std::abs(residual) <= tolerance + 3.0 * std_error;
  return *this;
}

VerificationReport equality_report(std::string name, double lhs, double rhs, double tolerance,
                                   double std_error) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.std_error = std_error;
  return r.finalize();
}

VerificationReport upper_bound_report(std::string name, double lhs, double rhs, double tolerance,
                                      double std_error) {
  VerificationReport r;
  r.name = std::move(name);
  r.kind = "upper_bound";
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.std_error = std_error;
  return r.finalize();
}

}  // namespace metdisc
