#include "cartan/linear.hpp"

#include <stdexcept>

namespace cartan {

LinearSolution solve_linear(const LinearSystem& sys) {
  const auto m = static_cast<Eigen::Index>(sys.equations.size());
  const auto n = static_cast<Eigen::Index>(sys.unknowns.size());
  SymMatrix a(m, n);
  for (Eigen::Index r = 0; r < m; ++r) {
    const LinearEquation& eq = sys.equations[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(eq.coefficients.size()) != n)
      throw std::invalid_argument("equation row length does not match the number of unknowns");
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = eq.coefficients[static_cast<std::size_t>(c)];
  }
  const auto rr = row_reduce(a, true);

  std::vector<SymScalar> rhs(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    SymScalar acc;
    for (Eigen::Index k = 0; k < m; ++k)
      if (!rr.transform(r, k).is_zero()) acc += rr.transform(r, k) * sys.equations[static_cast<std::size_t>(k)].rhs;
    rhs[static_cast<std::size_t>(r)] = std::move(acc);
  }

  LinearSolution out;
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Eigen::Index c : rr.pivot_columns) is_pivot[static_cast<std::size_t>(c)] = true;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) out.free.push_back(sys.unknowns[static_cast<std::size_t>(c)]);

  for (Eigen::Index r = 0; r < rr.rank(); ++r) {
    SymScalar value = rhs[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < n; ++c) {
      if (is_pivot[static_cast<std::size_t>(c)] || rr.reduced(r, c).is_zero()) continue;
      value -= rr.reduced(r, c) * SymScalar::symbol(sys.unknowns[static_cast<std::size_t>(c)]);
    }
    out.solution.emplace(sys.unknowns[static_cast<std::size_t>(rr.pivot_columns[static_cast<std::size_t>(r)])],
                         std::move(value));
  }
  for (Eigen::Index r = rr.rank(); r < m; ++r) {
    LinearConstraint c;
    for (Eigen::Index k = 0; k < m; ++k) c.combination.push_back(rr.transform(r, k));
    c.value = rhs[static_cast<std::size_t>(r)];
    out.constraints.push_back(std::move(c));
  }
  return out;
}

}  // namespace cartan
