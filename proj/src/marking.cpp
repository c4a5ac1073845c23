// SPDX-License-Identifier: Apache-2.0
#include "abem/marking.hpp"

#include "abem/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace abem {

std::vector<std::size_t> doerfler_mark(const Indicators& ind, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) fail(ErrorKind::invalid_argument, "theta must lie in (0,1]");
  const auto& eta = ind.per_element;
  std::vector<std::size_t> order(eta.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eta[a] > eta[b]; });
  // The threshold uses the sum taken in the same order as the prefix sums, so
  // theta = 1 stops exactly at the last positive indicator.
  double total = 0.0;
  for (std::size_t i : order) total += eta[i];
  if (!(total > 0.0)) fail(ErrorKind::numerical, "estimator vanishes, nothing to mark");
  const double goal = theta * total;
  std::vector<std::size_t> marked;
  double sum = 0.0;
  for (std::size_t i : order) {
    if (sum >= goal || eta[i] <= 0.0) break;
    sum += eta[i];
    marked.push_back(i);
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::vector<std::size_t> expand_mark(const Mesh& mesh, std::span<const std::size_t> marked) {
  if (marked.empty()) fail(ErrorKind::invalid_argument, "expanded marking needs a nonempty set");
  std::vector<std::size_t> order(mesh.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Lengths that differ only by rounding in the arclength computation count as ties.
  std::vector<long long> key(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) key[i] = std::llround(std::log(mesh.element(i).h) * 1e9);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  std::vector<std::size_t> out(marked.begin(), marked.end());
  const std::size_t extra = std::min(marked.size(), order.size());
  out.insert(out.end(), order.begin(), order.begin() + static_cast<long>(extra));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t e : out)
    if (e >= mesh.size()) fail(ErrorKind::invalid_argument, "marked element out of range");
  return out;
}

}  // namespace abem
