#include "metdisc/finite_exact.hpp"

namespace metdisc {

std::vector<std::size_t> labels_of(const PointSet& points) {
  std::vector<std::size_t> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.label_index());
  return out;
}

template class FiniteEngine<Rational>;
template class FiniteEngine<double>;

}  // namespace metdisc
