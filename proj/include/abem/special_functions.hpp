// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace abem {

using cplx = std::complex<double>;

/// J0, J1, Y0, Y1 at one argument. Ascending series (extended precision) up to
/// x = 17, Hankel asymptotic expansions beyond.
struct BesselValues {
  double j0 = 0.0;
  double j1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

BesselValues bessel_01(double x);  // x > 0
double bessel_j0(double x);        // x >= 0
double bessel_j1(double x);        // x >= 0
double bessel_y0(double x);        // x > 0
double bessel_y1(double x);        // x > 0

/// n-th positive zero of J0 by Newton iteration.
double bessel_j0_zero(int n);

/// Helmholtz kernel value split as value = log_part * log(r) + smooth.
struct KernelValue {
  cplx value;
  double log_part = 0.0;
  cplx smooth;
};

/// G_k(r) = (i/4) H0^(1)(k r) for k > 0 and -(1/2pi) log r for k = 0.
KernelValue helmholtz_kernel(double r, double k);

/// The split without forming the value; cheaper when log r is already known.
struct KernelSplit {
  double log_part = 0.0;
  cplx smooth;
};
KernelSplit kernel_split(double r, double k);

/// Radial derivative dG_k/dr.
cplx helmholtz_kernel_grad(double r, double k);

/// Only the coefficient of log r, -J0(k r)/(2 pi); no logarithm is evaluated.
double kernel_log_part(double r, double k);

}  // namespace abem
