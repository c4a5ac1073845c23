// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "abem/geometry.hpp"
#include "abem/quadrature.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace abem {

/// Element of the initial mesh; every later element descends from one root
/// by repeated parameter-midpoint bisection.
struct RootElement {
  int seg = 0;
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;
};

struct Element {
  int seg = 0;
  double a = 0.0;
  double b = 0.0;
  int generation = 0;
  int root = 0;
  std::uint64_t pos = 0;  // index among the 2^generation descendants of the root
  double h = 0.0;         // arclength
};

class Mesh {
 public:
  /// Initial mesh: each segment cut into 2^splits equal parameter pieces, all
  /// of generation 0.
  static Mesh initial(CurvePtr curve, int splits = 0);

  const BoundaryCurve& curve() const { return *curve_; }
  const CurvePtr& curve_ptr() const { return curve_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(std::size_t i) const { return elements_.at(i); }
  std::size_t size() const { return elements_.size(); }
  bool closed() const { return curve_->closed(); }
  const std::vector<RootElement>& roots() const { return *roots_; }
  bool same_forest(const Mesh& other) const { return curve_ == other.curve_ && roots_ == other.roots_; }

  /// Neighbour across the start / end node, or -1 at the ends of an open arc.
  long prev(std::size_t i) const;
  long next(std::size_t i) const;

  ElementGeometry geometry(std::size_t i) const;
  double max_h() const;

  /// Largest neighbour ratio h(T)/h(T').
  double neighbor_ratio() const;

  Element child(const Element& parent, int which) const;

 private:
  Mesh(CurvePtr curve, std::shared_ptr<const std::vector<RootElement>> roots, std::vector<Element> elements);

  CurvePtr curve_;
  std::shared_ptr<const std::vector<RootElement>> roots_;
  std::vector<Element> elements_;

  friend Mesh bisect(const Mesh&, std::size_t);
  friend Mesh refine(const Mesh&, std::span<const std::size_t>);
  friend Mesh overlay(const Mesh&, const Mesh&);
  friend Mesh parse_mesh(const Mesh&, const std::string&);
};

/// Bisect a single element (no closure).
Mesh bisect(const Mesh& mesh, std::size_t index);

/// Bisect all marked elements, then bisect elements whose generation is two or
/// more below a neighbour's until neighbouring generations differ by at most one.
Mesh refine(const Mesh& mesh, std::span<const std::size_t> marked);

Mesh uniform_refine(const Mesh& mesh);

/// Coarsest common refinement of two meshes of the same bisection forest.
Mesh overlay(const Mesh& a, const Mesh& b);

/// True if every element of `coarse` is a union of elements of `fine`.
bool is_refinement(const Mesh& fine, const Mesh& coarse);

/// For each fine element the index of the coarse element containing it.
std::vector<std::size_t> ancestor_map(const Mesh& fine, const Mesh& coarse);

struct ClosureAccount {
  std::size_t added = 0;        // #T_L - #T_0
  std::size_t marked_total = 0; // sum_j #M_j
  double ratio = 0.0;
};

/// Mesh-closure accounting over T_0..T_L and the marked counts of the L refine calls.
ClosureAccount count_accounting(std::span<const Mesh> meshes, std::span<const std::size_t> marked_counts);

/// One line per element: "seg a b generation".
std::string serialize(const Mesh& mesh);

/// Inverse of serialize for meshes descending from the roots of `forest`.
Mesh parse_mesh(const Mesh& forest, const std::string& text);

}  // namespace abem
