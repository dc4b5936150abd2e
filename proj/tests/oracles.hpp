#pragma once

// Reference implementations used only by the tests: direct double-sum
// transforms, dense quadrature, and closed forms. Kept free of the library's
// FFT and summation machinery so the two sides fail independently.

#include <cmath>
#include <complex>
#include <functional>

#include "tfc/stft.hpp"
#include "tfc/wavelet.hpp"

namespace oracle {

using tfc::Complex;
using tfc::ComplexMat;
using tfc::ComplexVec;
using tfc::Scalar;
using tfc::Signal;

constexpr Scalar kPi = 3.14159265358979323846;

// Physicists' Hermite polynomial by the three-term recurrence.
inline Scalar hermite(int n, Scalar u) {
  Scalar h0 = 1.0;
  if (n == 0) return h0;
  Scalar h1 = 2.0 * u;
  for (int k = 1; k < n; ++k) {
    Scalar h2 = 2.0 * u * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// n-th derivative of exp(-pi t^2), via the Rodrigues formula.
inline Signal gaussian_derivative(int n, const tfc::TimeGrid& grid) {
  Signal g{grid, ComplexVec(grid.count)};
  Scalar sign = n % 2 == 0 ? 1.0 : -1.0;
  Scalar scale = sign * std::pow(kPi, n / 2.0);
  for (int k = 0; k < grid.count; ++k) {
    Scalar t = grid.t(k);
    g.values[k] = scale * hermite(n, std::sqrt(kPi) * t) * std::exp(-kPi * t * t);
  }
  return g;
}

// Direct double-sum short-time Fourier transform.
inline ComplexMat naive_stft(const Signal& f, const Signal& g, const tfc::TFGrid& grid) {
  const tfc::TimeGrid& tg = f.grid;
  ComplexMat out(grid.x_count, grid.w_count);
  for (int j = 0; j < grid.x_count; ++j) {
    long shift = std::lround(grid.x(j) / tg.step);
    for (int k = 0; k < grid.w_count; ++k) {
      Complex acc(0, 0);
      for (int i = 0; i < tg.count; ++i) {
        long src = i - shift;
        if (src < 0 || src >= tg.count) continue;
        acc += f.values[i] * std::conj(g.values[src]) *
               std::polar(1.0, -2.0 * kPi * grid.w(k) * tg.t(i));
      }
      out(j, k) = tg.step * acc;
    }
  }
  return out;
}

// Direct discrete-time Fourier transform at one frequency.
inline Complex naive_dtft(const Signal& f, Scalar xi) {
  Complex acc(0, 0);
  for (int k = 0; k < f.grid.count; ++k)
    acc += f.values[k] * std::polar(1.0, -2.0 * kPi * xi * f.grid.t(k));
  return f.grid.step * acc;
}

// Band-limited dilation of the window by direct Fourier-series evaluation:
// the window's trigonometric interpolant sampled at u, zero outside the
// period [-T, T).
inline Complex naive_dilated_window(const Signal& g, Scalar u) {
  const tfc::TimeGrid& tg = g.grid;
  Scalar period = 2.0 * tg.half_width;
  if (u < -tg.half_width || u >= tg.half_width) return Complex(0, 0);
  Complex acc(0, 0);
  for (long m = -tg.count / 2; m < tg.count / 2; ++m)
    acc += naive_dtft(g, m / period) * std::polar(1.0, 2.0 * kPi * m * u / period);
  return acc / period;
}

// Direct double-sum wavelet transform against the band-limited dilates.
inline ComplexMat naive_cwt(const Signal& f, const Signal& g, const tfc::ScaleGrid& grid) {
  const tfc::TimeGrid& tg = f.grid;
  ComplexMat out(grid.s_count, grid.x_count);
  for (int j = 0; j < grid.s_count; ++j) {
    Scalar s = grid.s(j);
    ComplexVec kernel(2 * tg.count - 1);
    for (int tap = 0; tap < kernel.size(); ++tap)
      kernel[tap] = naive_dilated_window(g, (tap - (tg.count - 1)) * tg.step / s);
    for (int k = 0; k < grid.x_count; ++k) {
      long center = std::lround((grid.x(k) - tg.t(0)) / tg.step);
      Complex acc(0, 0);
      for (int i = 0; i < tg.count; ++i) acc += f.values[i] * kernel[i - center + tg.count - 1];
      out(j, k) = acc * tg.step / std::sqrt(s);
    }
  }
  return out;
}

// Dense midpoint quadrature of int f(t) conj(g(t - x)) e^{-2 pi i w t} dt for
// analytic integrands, independent of any sampling grid.
inline Complex dense_stft_quadrature(const std::function<Complex(Scalar)>& f,
                                     const std::function<Complex(Scalar)>& g, Scalar x, Scalar w,
                                     Scalar half_width = 12.0, int points = 1 << 15) {
  Scalar h = 2.0 * half_width / points;
  Complex acc(0, 0);
  for (int i = 0; i < points; ++i) {
    Scalar t = -half_width + (i + 0.5) * h;
    acc += f(t) * std::conj(g(t - x)) * std::polar(1.0, -2.0 * kPi * w * t);
  }
  return acc * h;
}

// Entire-function evaluation from basis coefficients, own Horner.
inline Complex eval_basis_series(const ComplexVec& coeffs, Complex z) {
  Complex acc(0, 0);
  for (Eigen::Index n = coeffs.size() - 1; n >= 0; --n) {
    Scalar b = std::sqrt(std::pow(kPi, static_cast<Scalar>(n)) / std::tgamma(n + 1.0));
    acc = acc * z + coeffs[n] * b;
  }
  return acc;
}

// <F, G> against the Gaussian weight by dense midpoint quadrature in polar
// coordinates.
inline Complex fock_inner_quadrature(const ComplexVec& f_coeffs, const ComplexVec& g_coeffs,
                                     Scalar r_max = 6.0, int nr = 8192, int ntheta = 256) {
  Scalar dr = r_max / nr;
  Scalar dtheta = 2.0 * kPi / ntheta;
  Complex acc(0, 0);
  for (int i = 0; i < nr; ++i) {
    Scalar r = (i + 0.5) * dr;
    Scalar weight = std::exp(-kPi * r * r) * r * dr * dtheta;
    Complex ring(0, 0);
    for (int j = 0; j < ntheta; ++j) {
      Complex z = std::polar(r, (j + 0.5) * dtheta);
      ring += eval_basis_series(f_coeffs, z) * std::conj(eval_basis_series(g_coeffs, z));
    }
    acc += ring * weight;
  }
  return acc;
}

// Complement Gaussian mass (int_{|t|>r} e^{-2 pi t^2} dt)^{1/2}.
inline Scalar gaussian_tail_l2(Scalar r) {
  return std::sqrt(std::erfc(std::sqrt(2.0 * kPi) * r) / std::sqrt(2.0));
}

}  // namespace oracle
