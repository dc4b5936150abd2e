#pragma once

#include "tfc/stft.hpp"

namespace tfc {

// Log-uniform scale levels s_j = s_min * rho^j paired with the spatial lattice
// x_k = -X + k*x_step; cell measure x_step * ln(rho) / s_j discretizes
// dx ds / s^2.
struct ScaleGrid {
  Scalar x_half_width = 0;
  Scalar x_step = 0;
  Scalar s_min = 0;
  Scalar s_max = 0;
  int s_count = 0;
  int x_count = 0;
  Scalar rho = 0;

  ScaleGrid() = default;
  ScaleGrid(Scalar x_half_width_, Scalar x_step_, Scalar s_min_, Scalar s_max_, int s_count_);

  Scalar x(int k) const { return -x_half_width + k * x_step; }
  Scalar s(int j) const { return s_min * std::pow(rho, j); }
};

// int_0^inf |g_hat(xi)|^2 dxi/xi evaluated from the discrete spectrum of g by
// log-trapezoid quadrature on dense log-uniform nodes. Requires a zero-mean
// wavelet; the +xi and -xi integrals must agree to 1e-6 relative.
Scalar admissibility_constant(const Signal& g);

// g / sqrt(admissibility_constant(g)); re-running the constant gives 1.
Signal normalize_admissible(const Signal& g);

// values[j,k] = s_j^{-1/2} sum_t f(t) g((t - x_k)/s_j) * step, one FFT
// correlation per scale. Dilated kernel samples come from band-limited
// interpolation of g's stored samples, zero outside [-T, T).
CoefField cwt(const Signal& f, const Signal& g, const ScaleGrid& grid);

// (sum |values|^2 * cell_measure)^(1/2) with the hyperbolic cell measure the
// grid attached.
Scalar field_l2_hyperbolic(const CoefField& C);

}  // namespace tfc
