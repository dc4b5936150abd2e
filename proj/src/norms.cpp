#include "tfc/norms.hpp"

#include <cmath>

namespace tfc {

namespace {

Scalar weight_at(const WeightSpec& w, const CoefField& C, Eigen::Index i, Eigen::Index j) {
  switch (w.kind) {
    case WeightSpec::Kind::constant:
      return 1.0;
    case WeightSpec::Kind::tf_polynomial: {
      if (C.domain != CoefField::Domain::time_frequency)
        throw std::invalid_argument("mixed_norm: tf_polynomial weight needs a time-frequency field");
      Scalar x = C.row_coord[i];
      Scalar omega = C.col_coord[j];
      return std::pow(1.0 + std::hypot(x, omega), w.a);
    }
    case WeightSpec::Kind::scale_power: {
      if (C.domain != CoefField::Domain::time_scale)
        throw std::invalid_argument("mixed_norm: scale_power weight needs a time-scale field");
      Scalar s = C.row_coord[i];
      return std::pow(s, -(w.alpha + 0.5 - 1.0 / w.q));
    }
  }
  throw std::invalid_argument("mixed_norm: unknown weight kind");
}

Scalar checked_weight(const WeightSpec& w, const CoefField& C, Eigen::Index i, Eigen::Index j) {
  Scalar m = weight_at(w, C, i, j);
  if (!std::isfinite(m) || !(m > 0))
    throw numeric_error("mixed_norm: weight is not finite and positive at a grid cell");
  return m;
}

// One term per outer-axis index: (sum_x |C|^p m^p mu_x)^{q/p} mu_outer.
// Inner axis is x throughout: rows for time-frequency fields, columns for
// time-scale fields. Fock fields have no x axis and collapse to a flat p-norm.
RealVec outer_terms(const CoefField& C, const NormSpec& spec) {
  const Scalar p = spec.p;
  const Scalar q = spec.q;
  switch (C.domain) {
    case CoefField::Domain::time_frequency: {
      RealVec terms(C.values.cols());
      for (Eigen::Index j = 0; j < C.values.cols(); ++j) {
        RealVec inner(C.values.rows());
        for (Eigen::Index i = 0; i < C.values.rows(); ++i) {
          Scalar m = checked_weight(spec.weight, C, i, j);
          inner[i] = std::pow(std::abs(C.values(i, j)) * m, p) * C.row_measure[i];
        }
        terms[j] = std::pow(pairwise_sum(inner), q / p) * C.col_measure[j];
      }
      return terms;
    }
    case CoefField::Domain::time_scale: {
      RealVec terms(C.values.rows());
      for (Eigen::Index i = 0; i < C.values.rows(); ++i) {
        RealVec inner(C.values.cols());
        for (Eigen::Index j = 0; j < C.values.cols(); ++j) {
          Scalar m = checked_weight(spec.weight, C, i, j);
          inner[j] = std::pow(std::abs(C.values(i, j)) * m, p) * C.col_measure[j];
        }
        terms[i] = std::pow(pairwise_sum(inner), q / p) * C.row_measure[i];
      }
      return terms;
    }
    case CoefField::Domain::fock: {
      if (p != q)
        throw std::invalid_argument("mixed_norm: fock fields have no inner axis, p must equal q");
      RealVec terms(C.values.rows() * C.values.cols());
      for (Eigen::Index i = 0; i < C.values.rows(); ++i)
        for (Eigen::Index j = 0; j < C.values.cols(); ++j) {
          Scalar m = checked_weight(spec.weight, C, i, j);
          terms[i * C.values.cols() + j] =
              std::pow(std::abs(C.values(i, j)) * m, p) * C.cell_measure(i, j);
        }
      return terms;
    }
  }
  throw std::invalid_argument("mixed_norm: unknown field domain");
}

}  // namespace

WeightSpec WeightSpec::constant() { return WeightSpec{}; }

WeightSpec WeightSpec::tf_polynomial(Scalar a) {
  WeightSpec w;
  w.kind = Kind::tf_polynomial;
  w.a = a;
  return w;
}

WeightSpec WeightSpec::scale_power(Scalar alpha, Scalar q) {
  if (!(q >= 1)) throw std::invalid_argument("WeightSpec: scale_power q must be >= 1");
  WeightSpec w;
  w.kind = Kind::scale_power;
  w.alpha = alpha;
  w.q = q;
  return w;
}

NormSpec::NormSpec(Scalar p_, Scalar q_, WeightSpec weight_) : p(p_), q(q_), weight(weight_) {
  if (!(p >= 1) || !std::isfinite(p) || !(q >= 1) || !std::isfinite(q))
    throw std::invalid_argument("NormSpec: p and q must be finite and >= 1");
}

Scalar mixed_norm(const CoefField& C, const NormSpec& spec) {
  if (!(spec.p >= 1) || !std::isfinite(spec.p) || !(spec.q >= 1) || !std::isfinite(spec.q))
    throw std::invalid_argument("mixed_norm: p and q must be finite and >= 1");
  RealVec terms = outer_terms(C, spec);
  return std::pow(pairwise_sum(terms), 1.0 / spec.q);
}

Scalar modulation_norm(const Signal& f, const Signal& g, Scalar p, Scalar q, Scalar a,
                       const TFGrid& grid) {
  NormSpec spec(p, q, WeightSpec::tf_polynomial(a));
  return mixed_norm(stft(f, g, grid), spec);
}

Scalar besov_norm(const Signal& f, const Signal& g, Scalar p, Scalar q, Scalar alpha,
                  const ScaleGrid& grid) {
  Scalar c = admissibility_constant(g);
  if (std::abs(c - 1.0) > 1e-3)
    throw numeric_error("besov_norm: window is not admissibility-normalized (constant " +
                        format_scalar(c) + ")");
  NormSpec spec(p, q, WeightSpec::scale_power(alpha, q));
  RealVec terms = outer_terms(cwt(f, g, grid), spec);
  Scalar total = pairwise_sum(terms);
  if (total == 0) return 0;
  if ((terms[0] + terms[terms.size() - 1]) / total > 1e-3)
    throw numeric_error("besov_norm: scale range too narrow, the boundary scale levels carry "
                        "more than 1e-3 of the mass");
  return std::pow(total, 1.0 / q);
}

}  // namespace tfc
