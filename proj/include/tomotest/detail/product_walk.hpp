#pragma once
// Internal helper: iteration over the integer lattice rows {m n <= cap}.

#include <cmath>
#include <stdexcept>
#include <string>

namespace tomotest::detail {

// Visits every integer pair (m, n) >= 1 with m * n <= cap, in row order.
// The boundary slack matches the index enumeration in lattice.cpp, so sums
// and listings agree about which products sit exactly on the cut.
template <class F>
void for_each_product(double cap, F&& f) {
  if (!(cap >= 1.0)) return;
  double slack = 1e-9 + 8.0 * cap * 2.220446049250313e-16;
  auto m_max = static_cast<long long>(std::floor(cap + slack));
  double estimate = static_cast<double>(m_max) * (std::log(static_cast<double>(m_max)) + 1.0);
  if (estimate > 4e7)
    throw std::length_error("support enumeration too large: row bound " + std::to_string(m_max));
  for (long long m = 1; m <= m_max; ++m) {
    auto n_max = static_cast<long long>(std::floor(cap / static_cast<double>(m) + slack));
    for (long long n = 1; n <= n_max; ++n) f(m, n);
  }
}

// Visits every pair with lo < m n <= hi.
template <class F>
void for_each_product_band(long long lo, long long hi, F&& f) {
  for_each_product(static_cast<double>(hi), [&](long long m, long long n) {
    if (m * n > lo) f(m, n);
  });
}

}  // namespace tomotest::detail
