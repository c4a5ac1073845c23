// SPDX-License-Identifier: Apache-2.0
#include "abem/discrete_space.hpp"

#include "abem/error.hpp"

#include <cmath>

namespace abem {

DiscreteSpace::DiscreteSpace(SpaceKind kind, Mesh mesh) : kind_(kind), mesh_(std::move(mesh)) {
  const std::size_t n = mesh_.size();
  if (kind_ == SpaceKind::P0 || mesh_.closed())
    dofs_ = n;
  else
    dofs_ = n - 1;
}

long DiscreteSpace::start_dof(std::size_t elem) const {
  if (kind_ != SpaceKind::S1) fail(ErrorKind::invalid_argument, "node dofs exist only for S1");
  if (mesh_.closed()) return static_cast<long>(elem);
  return static_cast<long>(elem) - 1;
}

long DiscreteSpace::end_dof(std::size_t elem) const {
  if (kind_ != SpaceKind::S1) fail(ErrorKind::invalid_argument, "node dofs exist only for S1");
  if (mesh_.closed()) return static_cast<long>((elem + 1) % mesh_.size());
  return elem + 1 == mesh_.size() ? -1 : static_cast<long>(elem);
}

cplx DiscreteSpace::value(std::span<const cplx> coeffs, std::size_t elem, double s) const {
  if (kind_ == SpaceKind::P0) return coeffs[elem];
  const long a = start_dof(elem), b = end_dof(elem);
  const cplx ua = a < 0 ? cplx(0.0) : coeffs[static_cast<std::size_t>(a)];
  const cplx ub = b < 0 ? cplx(0.0) : coeffs[static_cast<std::size_t>(b)];
  return (1.0 - s) * ua + s * ub;
}

cplx DiscreteSpace::derivative(std::span<const cplx> coeffs, std::size_t elem) const {
  if (kind_ == SpaceKind::P0) return 0.0;
  return (value(coeffs, elem, 1.0) - value(coeffs, elem, 0.0)) / mesh_.element(elem).h;
}

CoeffVector prolong(const DiscreteSpace& coarse, const CoeffVector& coeffs, const DiscreteSpace& fine) {
  if (coarse.kind() != fine.kind()) fail(ErrorKind::invalid_argument, "prolongation between different spaces");
  if (static_cast<std::size_t>(coeffs.size()) != coarse.dof_count())
    fail(ErrorKind::invalid_argument, "coefficient vector does not match the coarse space");
  const auto map = ancestor_map(fine.mesh(), coarse.mesh());
  const std::span<const cplx> c(coeffs.data(), static_cast<std::size_t>(coeffs.size()));
  CoeffVector out = CoeffVector::Zero(static_cast<Eigen::Index>(fine.dof_count()));
  for (std::size_t f = 0; f < fine.mesh().size(); ++f) {
    const Element& ef = fine.mesh().element(f);
    const Element& ec = coarse.mesh().element(map[f]);
    if (fine.kind() == SpaceKind::P0) {
      out(static_cast<Eigen::Index>(f)) = c[map[f]];
      continue;
    }
    const long d = fine.start_dof(f);
    if (d < 0) continue;
    const double s = (ef.a - ec.a) / (ec.b - ec.a);
    out(d) = coarse.value(c, map[f], s);
  }
  return out;
}

cplx WaveProblem::incident_value(const Vec2& x) const {
  if (incident.kind == IncidentField::Kind::none) return 0.0;
  if (incident.kind == IncidentField::Kind::plane_wave)
    return std::exp(cplx(0.0, k * incident.direction.dot(x)));
  return helmholtz_kernel((x - incident.source).norm(), k).value;
}

cplx WaveProblem::data(int seg, double t) const {
  if (incident.kind == IncidentField::Kind::none) return 0.0;
  const Vec2 x = curve->position(seg, t);
  if (equation == Equation::weakly_singular) return -incident_value(x);
  const Vec2 n = curve->normal(seg, t);
  if (incident.kind == IncidentField::Kind::plane_wave)
    return -cplx(0.0, k * incident.direction.dot(n)) * incident_value(x);
  const Vec2 d = x - incident.source;
  const double r = d.norm();
  return -helmholtz_kernel_grad(r, k) * (d.dot(n) / r);
}

}  // namespace abem
