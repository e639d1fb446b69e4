#pragma once

#include "ycl/field.hpp"
#include "ycl/grid.hpp"

namespace ycl {

// Screened interaction of mass m > 0 in dimension d. The Fourier symbol is
// |S^{d-1}| / (|k|^2 + m^2); on the torus the interaction is defined by this
// multiplier (periodized kernel), never by truncating the free-space kernel.
struct YukawaParams {
  int dim = 1;
  double mass = 1.0;

  // |S^{d-1}|: 2, 2*pi, 4*pi for d = 1, 2, 3.
  double sphere_measure() const;
  void validate() const;
};

// Free-space kernel Y_m(r):
//   d=1: e^{-m r}/m      (r >= 0)
//   d=2: K_0(m r)        (r > 0)
//   d=3: e^{-m r}/r      (r > 0)
double yukawa_kernel_closed_form(int dim, double mass, double r);

// V = Y_m * f on the torus: Vhat(k) = |S^{d-1}| fhat(k) / (|k|^2 + m^2).
// Exact discrete solution of -Lap V + m^2 V = |S^{d-1}| f.
ScalarField yukawa_convolve(const ScalarField& f, const YukawaParams& params);

// D_m(f, g) = |S^{d-1}| <f, g>_{H^-1}; symmetric, positive semi-definite.
double interaction_energy(const ScalarField& f, const ScalarField& g, const YukawaParams& params);

// Discrete H^{-1} scalar product with weight 1/(|k|^2 + m^2).
double hminus1_inner(const ScalarField& f, const ScalarField& g, double mass);

}  // namespace ycl
