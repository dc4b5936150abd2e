#pragma once

#include "tfc/stft.hpp"
#include "tfc/wavelet.hpp"

namespace tfc {

// Pointwise weight m on a coefficient grid.
struct WeightSpec {
  enum class Kind { constant, tf_polynomial, scale_power };

  Kind kind = Kind::constant;
  Scalar a = 0;      // tf_polynomial exponent: m(x,w) = (1 + |(x,w)|)^a
  Scalar alpha = 0;  // scale_power: m(x,s) = s^{-(alpha + 1/2 - 1/q)}
  Scalar q = 2;      // the q the scale_power exponent refers to

  static WeightSpec constant();
  static WeightSpec tf_polynomial(Scalar a);
  static WeightSpec scale_power(Scalar alpha, Scalar q);
};

// Mixed-norm parameters: inner exponent p over x, outer exponent q over the
// second axis (omega for time-frequency fields, s for scale fields).
struct NormSpec {
  Scalar p = 2;
  Scalar q = 2;
  WeightSpec weight;

  NormSpec() = default;
  NormSpec(Scalar p_, Scalar q_, WeightSpec weight_);
};

// (sum_outer (sum_x |C|^p m^p mu_x)^{q/p} mu_outer)^{1/q} with the cell
// measure split across the two axes.
Scalar mixed_norm(const CoefField& C, const NormSpec& spec);

// mixed_norm of stft(f, g, grid) under the (1 + |(x,w)|)^a weight.
Scalar modulation_norm(const Signal& f, const Signal& g, Scalar p, Scalar q, Scalar a,
                       const TFGrid& grid);

// mixed_norm of cwt(f, g, grid) under the s^{-(alpha + 1/2 - 1/q)} weight and
// the hyperbolic scale measure. Requires g admissibility-normalized; errors
// when the outermost scale levels carry more than 1e-3 of the total mass.
Scalar besov_norm(const Signal& f, const Signal& g, Scalar p, Scalar q, Scalar alpha,
                  const ScaleGrid& grid);

}  // namespace tfc
