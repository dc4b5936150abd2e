#pragma once

#include "tfc/core.hpp"

namespace tfc {

// Point of the reduced Heisenberg group: spatial shift x, frequency shift w,
// unimodular scalar tau.
struct HPoint {
  Scalar x = 0;
  Scalar w = 0;
  Complex tau = Complex(1, 0);
};

// Rectangular lattice on the time-frequency plane, half-open on both axes:
// x_j = -X + j*x_step, w_k = -W + k*w_step.
struct TFGrid {
  Scalar x_half_width = 0;
  Scalar x_step = 0;
  Scalar w_half_width = 0;
  Scalar w_step = 0;
  int x_count = 0;
  int w_count = 0;

  TFGrid() = default;
  TFGrid(Scalar x_half_width_, Scalar x_step_, Scalar w_half_width_, Scalar w_step_);

  Scalar x(int j) const { return -x_half_width + j * x_step; }
  Scalar w(int k) const { return -w_half_width + k * w_step; }
};

// Coefficient field over a 2-D quadrature grid. values(i, j) sits at
// (row_coord[i], col_coord[j]) and carries cell measure
// row_measure[i] * col_measure[j]. Axis roles per domain:
//   time_frequency: rows = x, cols = w
//   time_scale:     rows = s, cols = x
//   fock:           rows = r, cols = theta (z = r e^{i theta})
struct CoefField {
  enum class Domain { time_frequency, time_scale, fock };

  Domain domain = Domain::time_frequency;
  RealVec row_coord;
  RealVec col_coord;
  RealVec row_measure;
  RealVec col_measure;
  ComplexMat values;

  Scalar cell_measure(Eigen::Index i, Eigen::Index j) const {
    return row_measure[i] * col_measure[j];
  }
};

// tau * M_w T_x f: values_k = tau * exp(2 pi i w (t_k - x)) * f(t_k - x), zero
// fill at the exposed edge. x must be a lattice multiple of the time step.
Signal tf_shift(const Signal& f, const HPoint& p);

// Group law matching the operator identity
// tf_shift(a) o tf_shift(b) = tf_shift(compose(a, b)).
HPoint heisenberg_compose(const HPoint& a, const HPoint& b);

// Windowed Fourier coefficients values[j,k] = sum_t f(t) conj(g)(t - x_j)
// exp(-2 pi i w_k t) * step, one FFT per x row. The frequency lattice must sit
// on DFT bins (w_step and w_half_width multiples of 1/(2T)) and stay inside
// the Nyquist bound 1/(2*step).
CoefField stft(const Signal& f, const Signal& g, const TFGrid& grid);

// Adjoint synthesis sum_{j,k} C[j,k] M_{w_k} T_{x_j} g * cell_measure.
// Requires a unit-norm window and a grid whose outer frame holds at most 1e-10
// of the field energy.
Signal istft(const CoefField& C, const Signal& g);

// (sum |values|^2 * cell_measure)^(1/2) in fixed row-major order.
Scalar field_l2(const CoefField& C);

// CSV export. Columns by domain: `x,w,re,im,measure` (time_frequency,
// lexicographic in (x, w)), `x,s,re,im,measure` (time_scale, lexicographic in
// (x, s)), `x,y,re,im,measure` (fock, z = x + iy, row-major in (r, theta)).
void write_field_csv(const std::string& path, const CoefField& C);

}  // namespace tfc
