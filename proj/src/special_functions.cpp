// SPDX-License-Identifier: Apache-2.0
#include "abem/special_functions.hpp"

#include "abem/error.hpp"

#include <cmath>
#include <numbers>

namespace abem {

namespace {

constexpr double inv_2pi = 0.5 / std::numbers::pi;
constexpr long double euler_gamma = 0.577215664901532860606512090082402431L;

// Beyond this argument the asymptotic series reaches its smallest term below
// ~exp(-2x) < 2e-15; below it the ascending series in 64-bit mantissa loses at
// most five digits to cancellation.
constexpr double series_limit = 17.0;

struct SeriesTerms {
  long double j0, j1;
  long double s0;  // sum_{m>=1} H_m (-x^2/4)^m / (m!)^2
  long double s1;  // sum_{m>=0} (H_m + H_{m+1}) (-x^2/4)^m / (m! (m+1)!)
};

SeriesTerms ascending_series(double xd) {
  const long double x = xd;
  const long double q = -x * x / 4.0L;
  long double term0 = 1.0L;  // q^m / (m!)^2
  long double term1 = 1.0L;  // q^m / (m! (m+1)!)
  long double harmonic = 0.0L;
  SeriesTerms s{1.0L, 1.0L, 0.0L, 1.0L};  // m = 0 terms; H_0 + H_1 = 1
  for (int m = 1; m < 200; ++m) {
    term0 *= q / (static_cast<long double>(m) * m);
    term1 *= q / (static_cast<long double>(m) * (m + 1));
    harmonic += 1.0L / m;
    const long double h_next = harmonic + 1.0L / (m + 1);
    s.j0 += term0;
    s.j1 += term1;
    s.s0 += harmonic * term0;
    s.s1 += (harmonic + h_next) * term1;
    if (std::fabs(term0) * (1.0L + harmonic) < 1e-21L * (1.0L + std::fabs(s.j0)) &&
        std::fabs(term1) * (1.0L + h_next) < 1e-21L)
      break;
  }
  return s;
}

// J0 and S0 in double precision for x <= fast_limit. The largest term there is
// about 3e2, so cancellation costs at most ~1e-13 absolute.
constexpr double fast_limit = 8.0;

struct FastTables {
  double inv_m2[64];
  double harmonic[64];
};

const FastTables& fast_tables() {
  static const FastTables t = [] {
    FastTables f{};
    double h = 0.0;
    for (int m = 1; m < 64; ++m) {
      f.inv_m2[m] = 1.0 / (static_cast<double>(m) * m);
      h += 1.0 / m;
      f.harmonic[m] = h;
    }
    return f;
  }();
  return t;
}

void fast_series(double x, double& j0, double& s0) {
  const FastTables& t = fast_tables();
  const double q = -0.25 * x * x;
  double term = 1.0;
  j0 = 1.0;
  s0 = 0.0;
  for (int m = 1; m < 64; ++m) {
    term *= q * t.inv_m2[m];
    j0 += term;
    s0 += t.harmonic[m] * term;
    if (std::fabs(term) * t.harmonic[m] < 1e-18) break;
  }
}

BesselValues series_values(double x) {
  const SeriesTerms s = ascending_series(x);
  const long double xl = x;
  const long double pi = std::numbers::pi_v<long double>;
  const long double lg = std::log(xl / 2.0L) + euler_gamma;
  BesselValues v;
  const long double j0 = s.j0;
  const long double j1 = xl / 2.0L * s.j1;
  v.j0 = static_cast<double>(j0);
  v.j1 = static_cast<double>(j1);
  v.y0 = static_cast<double>(2.0L / pi * (lg * j0 - s.s0));
  // Y1 = -2/(pi x) + (2/pi) log(x/2) J1 - (x/(2 pi)) sum (psi(m+1)+psi(m+2)) (-x^2/4)^m/(m!(m+1)!)
  v.y1 = static_cast<double>(-2.0L / (pi * xl) + 2.0L / pi * std::log(xl / 2.0L) * j1 -
                             xl / (2.0L * pi) * (s.s1 - 2.0L * euler_gamma * s.j1));
  return v;
}

// Hankel expansion: J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi), Y_nu = sqrt(2/(pi x)) (P sin chi + Q cos chi).
void asymptotic(double x, int nu, double& jv, double& yv) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::fabs(term) >= last) break;
    last = std::fabs(term);
    // k odd -> Q, k even -> P; signs alternate in pairs
    const int r = k % 4;
    if (r == 1)
      q += term;
    else if (r == 2)
      p -= term;
    else if (r == 3)
      q -= term;
    else
      p += term;
    if (last < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double c = std::cos(chi), s = std::sin(chi);
  jv = amp * (p * c - q * s);
  yv = amp * (p * s + q * c);
}

}  // namespace

BesselValues bessel_01(double x) {
  if (!(x > 0.0)) fail(ErrorKind::invalid_argument, "bessel_01 requires x > 0");
  if (x <= series_limit) return series_values(x);
  BesselValues v;
  asymptotic(x, 0, v.j0, v.y0);
  asymptotic(x, 1, v.j1, v.y1);
  return v;
}

double bessel_j0(double x) {
  if (x < 0.0) fail(ErrorKind::invalid_argument, "bessel_j0 requires x >= 0");
  if (x == 0.0) return 1.0;
  return bessel_01(x).j0;
}

double bessel_j1(double x) {
  if (x < 0.0) fail(ErrorKind::invalid_argument, "bessel_j1 requires x >= 0");
  if (x == 0.0) return 0.0;
  return bessel_01(x).j1;
}

double bessel_y0(double x) {
  if (!(x > 0.0)) fail(ErrorKind::invalid_argument, "bessel_y0 requires x > 0");
  return bessel_01(x).y0;
}

double bessel_y1(double x) {
  if (!(x > 0.0)) fail(ErrorKind::invalid_argument, "bessel_y1 requires x > 0");
  return bessel_01(x).y1;
}

double bessel_j0_zero(int n) {
  if (n < 1) fail(ErrorKind::invalid_argument, "zero index must be positive");
  // McMahon start, then Newton with J0' = -J1
  const double beta = (n - 0.25) * std::numbers::pi;
  double x = beta + 1.0 / (8.0 * beta);
  for (int it = 0; it < 50; ++it) {
    const BesselValues v = bessel_01(x);
    const double dx = v.j0 / v.j1;  // J0 / -J0'
    x += dx;
    if (std::fabs(dx) < 1e-16 * x) break;
  }
  return x;
}

double kernel_log_part(double r, double k) {
  if (k == 0.0) return -inv_2pi;
  const double x = k * r;
  if (x == 0.0) return -inv_2pi;
  if (x <= fast_limit) {
    double j0, s0;
    fast_series(x, j0, s0);
    return -j0 * inv_2pi;
  }
  if (x <= series_limit) return static_cast<double>(-ascending_series(x).j0) * inv_2pi;
  return -bessel_01(x).j0 * inv_2pi;
}

KernelSplit kernel_split(double r, double k) {
  if (!(r > 0.0)) fail(ErrorKind::invalid_argument, "kernel requires r > 0");
  if (k < 0.0) fail(ErrorKind::invalid_argument, "negative wavenumbers are not supported");
  if (k == 0.0) return {-inv_2pi, 0.0};
  const double x = k * r;
  // smooth = (i/4) J0 - (log(k/2) + gamma) J0 / (2 pi) + S0 / (2 pi)
  if (x <= fast_limit) {
    double j0, s0;
    fast_series(x, j0, s0);
    const double lk = std::log(0.5 * k) + static_cast<double>(euler_gamma);
    return {-j0 * inv_2pi, cplx((s0 - lk * j0) * inv_2pi, 0.25 * j0)};
  }
  if (x <= series_limit) {
    const SeriesTerms s = ascending_series(x);
    const long double lk = std::log(static_cast<long double>(k) / 2.0L) + euler_gamma;
    const long double inv2pi = 0.5L / std::numbers::pi_v<long double>;
    return {static_cast<double>(-s.j0 * inv2pi),
            cplx(static_cast<double>((s.s0 - lk * s.j0) * inv2pi), static_cast<double>(s.j0 / 4.0L))};
  }
  const BesselValues v = bessel_01(x);
  const cplx value(-0.25 * v.y0, 0.25 * v.j0);
  const double log_part = -v.j0 * inv_2pi;
  return {log_part, value - log_part * std::log(r)};
}

KernelValue helmholtz_kernel(double r, double k) {
  if (!(r > 0.0)) fail(ErrorKind::invalid_argument, "kernel requires r > 0");
  if (k < 0.0) fail(ErrorKind::invalid_argument, "negative wavenumbers are not supported");
  KernelValue kv;
  if (k == 0.0) {
    kv.log_part = -inv_2pi;
    kv.smooth = 0.0;
    kv.value = -inv_2pi * std::log(r);
    return kv;
  }
  if (k * r > series_limit) {
    const BesselValues v = bessel_01(k * r);
    kv.value = cplx(-0.25 * v.y0, 0.25 * v.j0);
    kv.log_part = -v.j0 * inv_2pi;
    kv.smooth = kv.value - kv.log_part * std::log(r);
    return kv;
  }
  const KernelSplit sp = kernel_split(r, k);
  kv.log_part = sp.log_part;
  kv.smooth = sp.smooth;
  kv.value = kv.smooth + kv.log_part * std::log(r);
  return kv;
}

cplx helmholtz_kernel_grad(double r, double k) {
  if (!(r > 0.0)) fail(ErrorKind::invalid_argument, "kernel requires r > 0");
  if (k < 0.0) fail(ErrorKind::invalid_argument, "negative wavenumbers are not supported");
  if (k == 0.0) return -inv_2pi / r;
  const BesselValues v = bessel_01(k * r);
  // -(i k / 4) (J1 + i Y1)
  return cplx(0.25 * k * v.y1, -0.25 * k * v.j1);
}

}  // namespace abem
