#include "tfc/bargmann.hpp"

#include <cmath>

namespace tfc {

namespace {

constexpr Scalar kPi = 3.14159265358979323846;
constexpr Scalar kEvalRadiusBound = 8.0;  // 2 * default r_max

// 4-point Gauss-Legendre rule on [-1, 1].
constexpr Scalar kGlNode[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                               0.8611363115940526};
constexpr Scalar kGlWeight[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};

// b_n = sqrt(pi^n / n!), the monomial factor of the orthonormal basis.
RealVec basis_factors(int degree) {
  RealVec b(degree + 1);
  b[0] = 1.0;
  for (int n = 1; n <= degree; ++n) b[n] = b[n - 1] * std::sqrt(kPi / n);
  return b;
}

void check_eval_radius(Complex z, const char* what) {
  if (std::abs(z) > kEvalRadiusBound)
    throw numeric_error(std::string(what) + ": |z| exceeds the overflow guard " +
                        format_scalar(kEvalRadiusBound));
}

}  // namespace

FockGrid::FockGrid(Scalar r_max_, int r_count_, int theta_count_)
    : r_max(r_max_), r_count(r_count_), theta_count(theta_count_) {
  if (!(r_max > 0)) throw std::invalid_argument("FockGrid: r_max must be positive");
  if (r_count < 8 || theta_count < 8)
    throw std::invalid_argument("FockGrid: r_count and theta_count must be >= 8");
  if (r_count % 4 != 0)
    throw std::invalid_argument("FockGrid: r_count must be a multiple of the panel size 4");
  int panels = r_count / 4;
  r_nodes.resize(r_count);
  r_weights.resize(r_count);
  Scalar panel_width = r_max / panels;
  for (int p = 0; p < panels; ++p) {
    Scalar mid = (p + 0.5) * panel_width;
    Scalar half = 0.5 * panel_width;
    for (int i = 0; i < 4; ++i) {
      r_nodes[4 * p + i] = mid + half * kGlNode[i];
      r_weights[4 * p + i] = half * kGlWeight[i];
    }
  }
}

Scalar FockGrid::theta_step() const { return 2.0 * kPi / theta_count; }

Complex eval_entire(const EntireFn& F, Complex z) {
  if (F.coeffs.size() == 0) throw std::invalid_argument("eval_entire: empty coefficient list");
  check_eval_radius(z, "eval_entire");
  int degree = F.degree();
  RealVec b = basis_factors(degree);
  Complex acc(0, 0);
  for (int n = degree; n >= 0; --n) acc = acc * z + F.coeffs[n] * b[n];
  return acc;
}

Scalar fock_norm(const EntireFn& F, Scalar p, const FockGrid& grid) {
  if (!(p >= 1)) throw std::invalid_argument("fock_norm: p must be >= 1");
  const int rows = grid.r_count;
  const int cols = grid.theta_count;
  RealVec terms(static_cast<Eigen::Index>(rows) * cols);
  parallel_for(rows, [&](Eigen::Index i) {
    Scalar r = grid.r_nodes[i];
    Scalar shell = grid.r_weights[i] * r * grid.theta_step();
    Scalar decay = std::exp(-(kPi / 2.0) * p * r * r);
    for (int j = 0; j < cols; ++j) {
      Complex z = std::polar(r, grid.theta(j));
      Scalar mag = std::abs(eval_entire(F, z));
      terms[i * cols + j] = std::pow(mag, p) * decay * shell;
    }
  });
  Scalar total = pairwise_sum(terms);
  if (total == 0) return 0;

  Scalar band_start = 0.9 * grid.r_max;
  RealVec outer(static_cast<Eigen::Index>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    bool in_band = grid.r_nodes[i] > band_start;
    for (int j = 0; j < cols; ++j)
      outer[static_cast<Eigen::Index>(i) * cols + j] =
          in_band ? terms[static_cast<Eigen::Index>(i) * cols + j] : 0.0;
  }
  if (pairwise_sum(outer) / total > 1e-9)
    throw numeric_error("fock_norm: outer radial band holds more than 1e-9 of the mass "
                        "(r_max too small for this function and p)");
  return std::pow(total, 1.0 / p);
}

EntireFn beta_shift(const EntireFn& F, Complex z, Complex tau, int degree) {
  if (F.coeffs.size() == 0) throw std::invalid_argument("beta_shift: empty coefficient list");
  if (degree < F.degree())
    throw std::invalid_argument("beta_shift: degree must be >= the input degree");
  if (std::abs(std::abs(tau) - 1.0) > 1e-12)
    throw std::invalid_argument("beta_shift: |tau| must be 1");
  check_eval_radius(z, "beta_shift");

  const int n_in = F.degree();
  RealVec b_in = basis_factors(n_in);
  ComplexVec a(n_in + 1);
  for (int n = 0; n <= n_in; ++n) a[n] = F.coeffs[n] * b_in[n];

  // G(w) = F(w - conj(z)): binomial expansion of the monomial coefficients.
  ComplexVec g = ComplexVec::Zero(degree + 1);
  Complex zbar = -std::conj(z);
  for (int n = 0; n <= n_in; ++n) {
    Complex binom_term = a[n];  // a_n * C(n,k) * (-conj z)^(n-k), built downward from k = n
    g[n] += binom_term;
    for (int k = n - 1; k >= 0; --k) {
      binom_term *= zbar * Scalar(k + 1) / Scalar(n - k);
      g[k] += binom_term;
    }
  }

  // H(w) = e^{pi z w} G(w): Cauchy product with the exponential series.
  ComplexVec h = ComplexVec::Zero(degree + 1);
  ComplexVec exp_term(degree + 1);
  exp_term[0] = Complex(1, 0);
  for (int k = 1; k <= degree; ++k) exp_term[k] = exp_term[k - 1] * (kPi * z) / Scalar(k);
  for (int k = 0; k <= degree; ++k) {
    int j_max = std::min(k, n_in);
    ComplexVec conv(j_max + 1);
    for (int j = 0; j <= j_max; ++j) conv[j] = g[j] * exp_term[k - j];
    h[k] = pairwise_sum(conv);
  }

  Scalar amp = std::exp(-kPi * std::norm(z) / 2.0);
  RealVec b_out = basis_factors(degree);
  EntireFn out;
  out.coeffs.resize(degree + 1);
  for (int n = 0; n <= degree; ++n) out.coeffs[n] = tau * amp * h[n] / b_out[n];

  // Geometric tail estimate from the last two retained coefficient magnitudes.
  Scalar last = std::abs(out.coeffs[degree]);
  if (last > 0) {
    Scalar prev = degree > 0 ? std::abs(out.coeffs[degree - 1]) : 0.0;
    Scalar tail;
    if (prev > 0 && last < prev) {
      Scalar q = last / prev;
      tail = last * q / (1.0 - q);
    } else {
      tail = last;
      if (prev > 0) tail = 1.0;  // non-decreasing coefficients: estimate unusable
    }
    if (tail > 1e-6)
      throw numeric_error("beta_shift: truncation error estimate " + format_scalar(tail) +
                          " exceeds 1e-6 (degree too small)");
  }
  return out;
}

Scalar fock_rep_coeff(const EntireFn& F, Complex z) {
  return std::abs(eval_entire(F, z)) * std::exp(-kPi * std::norm(z) / 2.0);
}

CoefField fock_field(const EntireFn& F, const FockGrid& grid) {
  CoefField C;
  C.domain = CoefField::Domain::fock;
  C.row_coord = grid.r_nodes;
  C.col_coord.resize(grid.theta_count);
  for (int j = 0; j < grid.theta_count; ++j) C.col_coord[j] = grid.theta(j);
  C.row_measure.resize(grid.r_count);
  for (int i = 0; i < grid.r_count; ++i)
    C.row_measure[i] = grid.r_weights[i] * grid.r_nodes[i];
  C.col_measure = RealVec::Constant(grid.theta_count, grid.theta_step());
  C.values.resize(grid.r_count, grid.theta_count);
  parallel_for(grid.r_count, [&](Eigen::Index i) {
    for (int j = 0; j < grid.theta_count; ++j) {
      Complex z = std::polar(grid.r_nodes[i], grid.theta(j));
      C.values(i, j) = Complex(fock_rep_coeff(F, z), 0.0);
    }
  });
  return C;
}

}  // namespace tfc
