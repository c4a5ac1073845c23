// SPDX-License-Identifier: Apache-2.0
#include "abem/mesh.hpp"

#include "abem/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace abem {

namespace {

Element make_element(const RootElement& r, int root, int generation, std::uint64_t pos) {
  Element e;
  e.seg = r.seg;
  e.root = root;
  e.generation = generation;
  e.pos = pos;
  const double scale = std::ldexp(1.0, -generation);
  e.a = r.a + (r.b - r.a) * (static_cast<double>(pos) * scale);
  e.b = r.a + (r.b - r.a) * (static_cast<double>(pos + 1) * scale);
  // constant-speed segments: arclength scales exactly with the parameter length
  e.h = r.h * scale;
  return e;
}

bool contains(const Element& outer, const Element& inner) {
  if (outer.root != inner.root || inner.generation < outer.generation) return false;
  return (inner.pos >> (inner.generation - outer.generation)) == outer.pos;
}

bool ends_together(const Element& outer, const Element& inner) {
  return (inner.pos + 1) == ((outer.pos + 1) << (inner.generation - outer.generation));
}

}  // namespace

Mesh::Mesh(CurvePtr curve, std::shared_ptr<const std::vector<RootElement>> roots, std::vector<Element> elements)
    : curve_(std::move(curve)), roots_(std::move(roots)), elements_(std::move(elements)) {}

Mesh Mesh::initial(CurvePtr curve, int splits) {
  if (!curve) fail(ErrorKind::invalid_argument, "mesh without curve");
  if (splits < 0 || splits > 20) fail(ErrorKind::invalid_argument, "initial splits out of range");
  auto roots = std::make_shared<std::vector<RootElement>>();
  const int pieces = 1 << splits;
  for (const auto& s : curve->segments()) {
    for (int i = 0; i < pieces; ++i) {
      RootElement r;
      r.seg = s.id;
      r.a = s.t0 + (s.t1 - s.t0) * i / pieces;
      r.b = (i + 1 == pieces) ? s.t1 : s.t0 + (s.t1 - s.t0) * (i + 1) / pieces;
      r.h = arclength(*curve, s.id, r.a, r.b);
      roots->push_back(r);
    }
  }
  if (curve->closed() && roots->size() < 3)
    fail(ErrorKind::invalid_argument, "closed curves need at least three initial elements");
  std::vector<Element> elems;
  for (std::size_t i = 0; i < roots->size(); ++i) elems.push_back(make_element((*roots)[i], static_cast<int>(i), 0, 0));
  return Mesh(std::move(curve), std::move(roots), std::move(elems));
}

long Mesh::prev(std::size_t i) const {
  if (i > 0) return static_cast<long>(i) - 1;
  return closed() ? static_cast<long>(elements_.size()) - 1 : -1;
}

long Mesh::next(std::size_t i) const {
  if (i + 1 < elements_.size()) return static_cast<long>(i) + 1;
  return closed() ? 0 : -1;
}

ElementGeometry Mesh::geometry(std::size_t i) const {
  const Element& e = elements_.at(i);
  return ElementGeometry{&curve_->segment(e.seg), e.a, e.b, e.h};
}

double Mesh::max_h() const {
  double m = 0.0;
  for (const auto& e : elements_) m = std::max(m, e.h);
  return m;
}

double Mesh::neighbor_ratio() const {
  double worst = 1.0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const long j = next(i);
    if (j < 0) continue;
    const double a = elements_[i].h, b = elements_[static_cast<std::size_t>(j)].h;
    worst = std::max(worst, std::max(a / b, b / a));
  }
  return worst;
}

Element Mesh::child(const Element& parent, int which) const {
  return make_element((*roots_)[static_cast<std::size_t>(parent.root)], parent.root, parent.generation + 1,
                      2 * parent.pos + static_cast<std::uint64_t>(which));
}

Mesh bisect(const Mesh& mesh, std::size_t index) {
  if (index >= mesh.size()) fail(ErrorKind::invalid_argument, "element index out of range");
  std::vector<Element> out;
  out.reserve(mesh.size() + 1);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (i == index) {
      out.push_back(mesh.child(mesh.elements_[i], 0));
      out.push_back(mesh.child(mesh.elements_[i], 1));
    } else {
      out.push_back(mesh.elements_[i]);
    }
  }
  return Mesh(mesh.curve_, mesh.roots_, std::move(out));
}

Mesh refine(const Mesh& mesh, std::span<const std::size_t> marked) {
  std::vector<char> flag(mesh.size(), 0);
  for (std::size_t m : marked) {
    if (m >= mesh.size()) fail(ErrorKind::invalid_argument, "marked element out of range");
    flag[m] = 1;
  }
  std::vector<Element> current = mesh.elements_;
  const bool closed = mesh.closed();
  while (true) {
    bool any = false;
    for (char f : flag) any = any || f;
    if (!any) break;
    std::vector<Element> out;
    out.reserve(current.size() * 2);
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (flag[i]) {
        out.push_back(mesh.child(current[i], 0));
        out.push_back(mesh.child(current[i], 1));
      } else {
        out.push_back(current[i]);
      }
    }
    current = std::move(out);
    // closure: neighbouring generations may differ by at most one
    flag.assign(current.size(), 0);
    const std::size_t n = current.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      if (!closed && j == 0) break;
      if (j == i) break;
      if (current[j].generation - current[i].generation >= 2) flag[i] = 1;
      if (current[i].generation - current[j].generation >= 2) flag[j] = 1;
    }
  }
  return Mesh(mesh.curve_, mesh.roots_, std::move(current));
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<std::size_t> all(mesh.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return refine(mesh, all);
}

Mesh overlay(const Mesh& a, const Mesh& b) {
  if (!a.same_forest(b)) fail(ErrorKind::incompatible, "overlay of meshes with different initial meshes");
  const auto& ea = a.elements_;
  const auto& eb = b.elements_;
  std::vector<Element> out;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    const Element& x = ea[i];
    const Element& y = eb[j];
    if (x.generation <= y.generation && contains(x, y)) {
      out.push_back(y);
      ++j;
      if (ends_together(x, y)) ++i;
    } else if (y.generation < x.generation && contains(y, x)) {
      out.push_back(x);
      ++i;
      if (ends_together(y, x)) ++j;
    } else {
      fail(ErrorKind::incompatible, "meshes are not refinements of a common initial mesh");
    }
  }
  if (i != ea.size() || j != eb.size()) fail(ErrorKind::incompatible, "meshes do not cover the same curve");
  return Mesh(a.curve_, a.roots_, std::move(out));
}

std::vector<std::size_t> ancestor_map(const Mesh& fine, const Mesh& coarse) {
  if (!fine.same_forest(coarse)) fail(ErrorKind::incompatible, "meshes have different initial meshes");
  const auto& ef = fine.elements();
  const auto& ec = coarse.elements();
  std::vector<std::size_t> map(ef.size());
  std::size_t c = 0;
  for (std::size_t f = 0; f < ef.size(); ++f) {
    while (c < ec.size() && !contains(ec[c], ef[f])) ++c;
    if (c == ec.size()) fail(ErrorKind::incompatible, "fine mesh does not refine the coarse mesh");
    map[f] = c;
  }
  return map;
}

bool is_refinement(const Mesh& fine, const Mesh& coarse) {
  try {
    ancestor_map(fine, coarse);
    return true;
  } catch (const Error&) {
    return false;
  }
}

ClosureAccount count_accounting(std::span<const Mesh> meshes, std::span<const std::size_t> marked_counts) {
  if (meshes.empty()) fail(ErrorKind::invalid_argument, "empty refinement history");
  if (marked_counts.size() + 1 != meshes.size())
    fail(ErrorKind::invalid_argument, "need one marked count per refine call");
  ClosureAccount acc;
  acc.added = meshes.back().size() - meshes.front().size();
  for (std::size_t m : marked_counts) acc.marked_total += m;
  acc.ratio = acc.marked_total == 0 ? 0.0 : static_cast<double>(acc.added) / static_cast<double>(acc.marked_total);
  return acc;
}

std::string serialize(const Mesh& mesh) {
  std::string out;
  char buf[128];
  for (const auto& e : mesh.elements()) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %d\n", e.seg, e.a, e.b, e.generation);
    out += buf;
  }
  return out;
}

Mesh parse_mesh(const Mesh& forest, const std::string& text) {
  std::istringstream in(text);
  std::vector<Element> elems;
  const auto& roots = forest.roots();
  int seg = 0, gen = 0;
  double a = 0.0, b = 0.0;
  std::size_t r = 0;
  while (in >> seg >> a >> b >> gen) {
    if (gen < 0 || gen > 60) fail(ErrorKind::invalid_argument, "generation out of range");
    while (r < roots.size() && !(roots[r].seg == seg && a >= roots[r].a && b <= roots[r].b)) ++r;
    if (r == roots.size()) fail(ErrorKind::invalid_argument, "element outside the initial mesh");
    const RootElement& root = roots[r];
    const double rel = (a - root.a) / (root.b - root.a);
    const auto pos = static_cast<std::uint64_t>(std::llround(std::ldexp(rel, gen)));
    Element e = make_element(root, static_cast<int>(r), gen, pos);
    if (std::abs(e.a - a) > 1e-12 * (1 + std::abs(a)) || std::abs(e.b - b) > 1e-12 * (1 + std::abs(b)))
      fail(ErrorKind::invalid_argument, "element is not a dyadic descendant of its root");
    elems.push_back(e);
  }
  if (!in.eof()) fail(ErrorKind::invalid_argument, "malformed mesh line");
  Mesh m(forest.curve_, forest.roots_, std::move(elems));
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    if (m.elements_[i].b != m.elements_[i + 1].a && m.elements_[i].seg == m.elements_[i + 1].seg)
      fail(ErrorKind::invalid_argument, "elements do not partition the curve");
  return m;
}

}  // namespace abem
