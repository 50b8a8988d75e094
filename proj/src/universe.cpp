#include "weakrel/universe.hpp"

namespace weakrel {

std::vector<cluster> clusters(const variable_universe &universe) {
  const std::size_t n = universe.size();
  if (n == 0)
    throw domain_error("empty variable universe");
  std::vector<cluster> out;
  out.reserve(n * (n + 1) / 2);
  for (var_id i = 0; i < n; ++i)
    out.emplace_back(i);
  for (var_id i = 0; i + 1 < n; ++i)
    for (var_id j = i + 1; j < n; ++j)
      out.emplace_back(i, j);
  return out;
}

std::size_t cluster_index(std::size_t n, var_id x, var_id y) {
  if (x == y)
    return x;
  var_id i = std::min(x, y), j = std::max(x, y);
  // Pairs are laid out row by row: (0,1) (0,2) ... (0,n-1) (1,2) ...
  std::size_t base = n;
  std::size_t row_offset = static_cast<std::size_t>(i) * (2 * n - i - 1) / 2;
  return base + row_offset + (j - i - 1);
}

} // namespace weakrel
