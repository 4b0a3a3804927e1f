#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace metdisc {

// Outcome of one identity or bound check. Inequalities store the amount of
// violation max(0, lhs - rhs) as the residual, so the same pass rule applies:
// pass iff |residual| <= tolerance + 3 * std_error.
struct VerificationReport {
  std::string name;
  std::string kind = "equality";  // or "upper_bound" (lhs <= rhs)
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  double std_error = 0.0;
  bool pass = false;
  bool exact = false;  // residual computed in rational arithmetic
  std::string exact_residual;  // textual rational residual when exact

  // Inputs digest.
  std::string space;
  std::string xi;
  std::size_t N = 0;
  std::uint64_t seed = 0;

  std::map<std::string, double> values;  // supplementary numbers
  std::map<std::string, std::string> notes;

  // Sets residual and pass from lhs, rhs, tolerance and std_error.
  VerificationReport& finalize();
};

VerificationReport equality_report(std::string name, double lhs, double rhs, double tolerance,
                                   double std_error);
// lhs <= rhs up to tolerance + 3 SE.
VerificationReport upper_bound_report(std::string name, double lhs, double rhs, double tolerance,
                                      double std_error);

}  // namespace metdisc
