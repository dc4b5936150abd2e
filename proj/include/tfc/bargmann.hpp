#pragma once

#include "tfc/stft.hpp"

namespace tfc {

// Entire function as a truncated series over the orthonormal basis
// e_n(z) = (pi^n/n!)^{1/2} z^n.
struct EntireFn {
  ComplexVec coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Polar quadrature grid on |z| <= r_max: composite 4-point Gauss-Legendre
// panels in r (r_count nodes, r_count/4 panels), uniform midpoint rule in
// theta.
struct FockGrid {
  Scalar r_max = 0;
  int r_count = 0;
  int theta_count = 0;
  RealVec r_nodes;
  RealVec r_weights;

  FockGrid() = default;
  FockGrid(Scalar r_max_, int r_count_, int theta_count_);

  Scalar theta(int j) const { return (j + 0.5) * theta_step(); }
  Scalar theta_step() const;
};

// Horner evaluation of the basis expansion; |z| <= 8 overflow guard.
Complex eval_entire(const EntireFn& F, Complex z);

// (int |F(z)|^p e^{-(pi/2) p|z|^2} dz)^{1/p} by polar quadrature. Errors when
// the outer 10% radial band holds more than 1e-9 of the quadrature mass
// (r_max too small for this F, p).
Scalar fock_norm(const EntireFn& F, Scalar p, const FockGrid& grid);

// beta(z,tau) F(w) = tau e^{pi z w} F(w - conj(z)) e^{-pi |z|^2 / 2} as a
// truncated series of the given degree. Errors when the geometric tail
// estimate of the dropped coefficients exceeds 1e-6.
EntireFn beta_shift(const EntireFn& F, Complex z, Complex tau, int degree);

// |<F, beta(z,tau) vacuum>| = |F(z)| e^{-pi |z|^2 / 2}.
Scalar fock_rep_coeff(const EntireFn& F, Complex z);

// Field of fock_rep_coeff values over the polar grid, with its quadrature
// measure attached (rows = r shells, cols = theta).
CoefField fock_field(const EntireFn& F, const FockGrid& grid);

}  // namespace tfc
