// SPDX-License-Identifier: Apache-2.0
#include "abem/assembly.hpp"
#include "abem/error.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

using namespace abem;

namespace {

constexpr double pi = std::numbers::pi;

double log_box(double a, double b, double c, double d) {
  auto G = [](double u) { return u == 0.0 ? 0.0 : 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u; };
  return G(b - c) - G(a - c) - G(b - d) + G(a - d);
}

Mesh uniform(CurvePtr c, int levels) {
  Mesh m = Mesh::initial(std::move(c));
  for (int i = 0; i < levels; ++i) m = uniform_refine(m);
  return m;
}

// Refined toward both tips of the slit.
Mesh graded_slit() {
  Mesh m = Mesh::initial(make_slit());
  for (int i = 0; i < 6; ++i) {
    const std::size_t marked[] = {0, m.size() - 1};
    m = refine(m, marked);
  }
  return m;
}

cplx hankel0(double x) { return cplx(std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x)); }
cplx hankel1(double x) { return cplx(std::cyl_bessel_j(1.0, x), std::cyl_neumann(1.0, x)); }

Eigen::VectorXd hat_masses(const Mesh& m) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) += 0.5 * m.element(i).h;
    out(m.next(i)) += 0.5 * m.element(i).h;
  }
  return out;
}

bool spd(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  return llt.info() == Eigen::Success;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("collinear pairs on a graded slit against closed forms") {
    const Mesh m = graded_slit();
    const DiscreteSpace space(SpaceKind::P0, m);
    const ComplexDenseMatrix A = assemble_V(space, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double a = m.geometry(i).position(0).x(), b = m.geometry(i).position(1).x();
      for (std::size_t j = 0; j < m.size(); ++j) {
        const double c = m.geometry(j).position(0).x(), d = m.geometry(j).position(1).x();
        const double exact = -log_box(a, b, c, d) / (2 * pi);
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        worst = std::max(worst, std::abs(A(ii, jj) - exact) / std::abs(exact));
      }
    }
    CHECK(worst < 1e-11);
  }

  TEST_CASE("single layer on a circle: symmetry, SPD, constant mode") {
    const double R = 0.4;
    const Mesh m = uniform(make_circle(R), 3);
    const DiscreteSpace space(SpaceKind::P0, m);
    const ComplexDenseMatrix A0 = assemble_V(space, 0.0);
    CHECK((A0 - A0.transpose()).norm() < 1e-13 * A0.norm());
    CHECK(A0.imag().norm() == 0.0);
    CHECK(spd(A0.real()));
    for (Eigen::Index i = 0; i < A0.rows(); ++i) {
      const double h = m.element(static_cast<std::size_t>(i)).h;
      CHECK(A0.row(i).sum().real() == doctest::Approx(-R * std::log(R) * h).epsilon(1e-10));
    }
    // V_k 1 = (i pi R / 2) J0(kR) H0(kR) on the circle
    const double k = 4.0;
    const ComplexDenseMatrix Ak = assemble_V(space, k);
    CHECK((Ak - Ak.transpose()).norm() < 1e-13 * Ak.norm());
    const cplx lambda = cplx(0.0, pi * R / 2) * std::cyl_bessel_j(0.0, k * R) * hankel0(k * R);
    for (Eigen::Index i = 0; i < Ak.rows(); ++i) {
      const double h = m.element(static_cast<std::size_t>(i)).h;
      CHECK(std::abs(Ak.row(i).sum() - lambda * h) < 1e-10 * std::abs(lambda) * h);
    }
  }

  TEST_CASE("small wavenumber matches the logarithmic limit plus its constant") {
    const Mesh m = uniform(make_lshape(), 1);
    const DiscreteSpace space(SpaceKind::P0, m);
    const double k = 1e-4;
    const double gamma = 0.57721566490153286;
    const cplx offset(-(std::log(k / 2.0) + gamma) / (2.0 * pi), 0.25);
    const ComplexDenseMatrix A0 = assemble_V(space, 0.0);
    const ComplexDenseMatrix Ak = assemble_V(space, k);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        const double hh = m.element(i).h * m.element(j).h;
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        CHECK(std::abs(Ak(ii, jj) - A0(ii, jj) - offset * hh) < 1e-7 * hh);
      }
  }

  TEST_CASE("hypersingular: kernel of W_0, stabilization, Maue composition") {
    for (const CurvePtr& c : {make_circle(0.4), make_lshape()}) {
      Mesh m = uniform(c, 2);
      const std::size_t marked[] = {0, 3};
      m = refine(m, marked);
      const DiscreteSpace s1(SpaceKind::S1, m);
      const ComplexDenseMatrix W0 = assemble_W(s1, 0.0, false);
      const double scale = W0.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < W0.rows(); ++i) CHECK(std::abs(W0.row(i).sum()) < 1e-9 * scale);
      const ComplexDenseMatrix Ws = assemble_W(s1, 0.0, true);
      CHECK(spd(Ws.real()));
      CHECK(Ws.imag().norm() == 0.0);
      const Eigen::VectorXd mm = hat_masses(m);
      CHECK((Ws.real() - W0.real() - mm * mm.transpose()).norm() < 1e-13 * Ws.norm());

      // <V u', v'> with u' piecewise constant: W_0 = D^T V_0 D
      const DiscreteSpace p0(SpaceKind::P0, m);
      const ComplexDenseMatrix V0 = assemble_V(p0, 0.0);
      Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.size()), s1.dof_count());
      for (std::size_t e = 0; e < m.size(); ++e) {
        D(e, s1.start_dof(e)) -= 1.0 / m.element(e).h;
        D(e, s1.end_dof(e)) += 1.0 / m.element(e).h;
      }
      const ComplexDenseMatrix composed = D.transpose().cast<cplx>() * V0 * D.cast<cplx>();
      CHECK((composed - W0).norm() < 1e-11 * W0.norm());

      const GalerkinSystem sys = assemble_system(
          s1, WaveProblem{c, 0.0, Equation::hypersingular, IncidentField{}, true});
      CHECK((sys.energy_gram - Ws.real()).norm() < 1e-13 * Ws.norm());
    }
  }

  TEST_CASE("hypersingular constant mode on a circle for k > 0") {
    // W_k 1 = -(i pi k^2 R / 2) J1(kR) H1(kR)
    const double R = 0.4, k = 3.0;
    const Mesh m = uniform(make_circle(R), 3);
    const DiscreteSpace s1(SpaceKind::S1, m);
    const ComplexDenseMatrix W = assemble_W(s1, k, false);
    CHECK((W - W.transpose()).norm() < 1e-13 * W.norm());
    const cplx lambda = -cplx(0.0, pi * k * k * R / 2) * std::cyl_bessel_j(1.0, k * R) * hankel1(k * R);
    const Eigen::VectorXd mm = hat_masses(m);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      CHECK(std::abs(W.row(i).sum() - lambda * mm(i)) < 1e-9 * std::abs(lambda) * mm(i));
  }

  TEST_CASE("hypersingular quadratic form of a Fourier mode") {
    // <W_0 cos(n t), cos(n t)> = n pi / 2 on any circle
    const double R = 0.4;
    const Mesh m = uniform(make_circle(R), 6);
    const DiscreteSpace s1(SpaceKind::S1, m);
    const ComplexDenseMatrix W0 = assemble_W(s1, 0.0, false);
    for (int n : {1, 2, 3}) {
      Eigen::VectorXd u(W0.rows());
      for (std::size_t e = 0; e < m.size(); ++e) u(s1.start_dof(e)) = std::cos(n * m.element(e).a);
      const double form = u.dot(W0.real() * u);
      CHECK(form == doctest::Approx(n * pi / 2).epsilon(5e-3 * n * n));
    }
  }

  TEST_CASE("open arc hypersingular matrix is SPD without stabilization") {
    const DiscreteSpace s1(SpaceKind::S1, graded_slit());
    const ComplexDenseMatrix W0 = assemble_W(s1, 0.0, false);
    CHECK(spd(W0.real()));
    CHECK_THROWS_AS(assemble_W(s1, 0.0, true), Error);
    const DiscreteSpace p0(SpaceKind::P0, graded_slit());
    CHECK_THROWS_AS(assemble_W(p0, 0.0, false), Error);
    CHECK_THROWS_AS(assemble_V(s1, 0.0), Error);
    CHECK_THROWS_AS(assemble_V(p0, -1.0), Error);
  }

  TEST_CASE("load vector") {
    const Mesh m = graded_slit();
    const DiscreteSpace space(SpaceKind::P0, m);
    WaveProblem p{make_slit(), 0.0, Equation::weakly_singular, IncidentField{}, false};
    // The problem must share the mesh curve.
    p.curve = m.curve_ptr();
    const Eigen::VectorXcd b0 = assemble_rhs(space, p);
    for (std::size_t i = 0; i < m.size(); ++i)
      CHECK(std::abs(b0(static_cast<Eigen::Index>(i)) + m.element(i).h) < 1e-14);

    // oscillatory data on long elements: closed form of int exp(i k d.x) ds
    const Mesh coarse = uniform(make_slit(), 1);
    const DiscreteSpace sc(SpaceKind::P0, coarse);
    p.curve = coarse.curve_ptr();
    p.k = 40.0;
    p.incident.direction = Vec2(0.6, 0.8);
    const QuadOrders low{2, 4, 4};
    const Eigen::VectorXcd bk = assemble_rhs(sc, p, low);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double x0 = coarse.geometry(i).position(0).x(), x1 = coarse.geometry(i).position(1).x();
      const double alpha = p.k * 0.6;
      const cplx exact = -(std::exp(cplx(0, alpha * x1)) - std::exp(cplx(0, alpha * x0))) / cplx(0, alpha);
      CHECK(std::abs(bk(static_cast<Eigen::Index>(i)) - exact) < 1e-12);
    }
  }

  TEST_CASE("energy gram of P0 is the Laplace single layer") {
    const Mesh m = uniform(make_lshape(), 1);
    const DiscreteSpace space(SpaceKind::P0, m);
    const Eigen::MatrixXd G = assemble_energy_gram(space);
    CHECK((G - assemble_V(space, 0.0).real()).norm() < 1e-14 * G.norm());
  }
}
