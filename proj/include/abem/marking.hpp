// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/estimator.hpp"
#include "abem/mesh.hpp"

#include <span>
#include <vector>

namespace abem {

/// Minimal set M' with theta * eta^2 <= eta(M')^2: largest indicators first,
/// ties by ascending element index. Returned in ascending index order.
std::vector<std::size_t> doerfler_mark(const Indicators& ind, double theta);

/// M' together with #M' elements of largest size (ties by ascending index).
std::vector<std::size_t> expand_mark(const Mesh& mesh, std::span<const std::size_t> marked);

}  // namespace abem
