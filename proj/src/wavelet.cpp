#include "tfc/wavelet.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace tfc {

namespace {

constexpr Scalar kPi = 3.14159265358979323846;
constexpr Scalar kLatticeTol = 1e-9;

// Admissibility quadrature: 48 nodes per octave from 2^-14 up to the Nyquist
// frequency, trapezoid in ln(xi).
constexpr Scalar kAdmLowFreq = 6.103515625e-05;
constexpr int kAdmNodesPerOctave = 48;

Complex dtft(const Signal& g, Scalar xi) {
  const int n = g.grid.count;
  ComplexVec terms(n);
  for (int k = 0; k < n; ++k)
    terms[k] = g.values[k] * std::polar(1.0, -2.0 * kPi * xi * g.grid.t(k));
  return pairwise_sum(terms) * g.grid.step;
}

// Trapezoid of |g_hat(sign * e^v)|^2 over uniform v nodes.
Scalar log_axis_integral(const Signal& g, Scalar sign, const RealVec& v_nodes, Scalar dv) {
  const Eigen::Index m = v_nodes.size();
  RealVec integrand(m);
  for (Eigen::Index i = 0; i < m; ++i)
    integrand[i] = std::norm(dtft(g, sign * std::exp(v_nodes[i])));
  RealVec terms(m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    terms[i] = 0.5 * (integrand[i] + integrand[i + 1]) * dv;
  return pairwise_sum(terms);
}

long lattice_multiple(Scalar value, Scalar step, const char* what) {
  long mult = std::lround(value / step);
  if (std::abs(mult * step - value) > kLatticeTol)
    throw std::invalid_argument(std::string(what) + " must be a lattice multiple of " +
                                format_scalar(step));
  return mult;
}

Eigen::Index pow2_at_least(Eigen::Index n) {
  Eigen::Index l = 1;
  while (l < n) l <<= 1;
  return l;
}

}  // namespace

ScaleGrid::ScaleGrid(Scalar x_half_width_, Scalar x_step_, Scalar s_min_, Scalar s_max_,
                     int s_count_)
    : x_half_width(x_half_width_),
      x_step(x_step_),
      s_min(s_min_),
      s_max(s_max_),
      s_count(s_count_) {
  if (!(x_half_width > 0) || !(x_step > 0))
    throw std::invalid_argument("ScaleGrid: x extent and step must be positive");
  if (!(s_min > 0) || !(s_min < 1) || !(s_max > 1))
    throw std::invalid_argument("ScaleGrid: scales must satisfy 0 < s_min < 1 < s_max");
  if (s_count < 8) throw std::invalid_argument("ScaleGrid: s_count must be >= 8");
  Scalar ratio = 2.0 * x_half_width / x_step;
  x_count = static_cast<int>(std::lround(ratio));
  if (std::abs(x_count * x_step - 2.0 * x_half_width) >
      kLatticeTol * std::max(1.0, 2.0 * x_half_width))
    throw std::invalid_argument("ScaleGrid: x count*step must equal 2*half_width");
  if (x_count < 8 || x_count % 2 != 0)
    throw std::invalid_argument("ScaleGrid: x count must be even and >= 8");
  rho = std::pow(s_max / s_min, 1.0 / (s_count - 1));
}

Scalar admissibility_constant(const Signal& g) {
  Scalar mean = std::abs(dtft(g, 0.0));
  if (mean > 1e-8)
    throw numeric_error("admissibility_constant: wavelet mean " + format_scalar(mean) +
                        " exceeds 1e-8");
  Scalar nyquist = 1.0 / (2.0 * g.grid.step);
  Scalar v_lo = std::log(kAdmLowFreq);
  Scalar v_hi = std::log(nyquist);
  int octaves_nodes =
      static_cast<int>(std::ceil((v_hi - v_lo) / std::log(2.0) * kAdmNodesPerOctave));
  RealVec v_nodes = RealVec::LinSpaced(octaves_nodes + 1, v_lo, v_hi);
  Scalar dv = v_nodes[1] - v_nodes[0];

  Scalar plus = log_axis_integral(g, 1.0, v_nodes, dv);
  Scalar minus = log_axis_integral(g, -1.0, v_nodes, dv);
  Scalar denom = std::max({plus, minus, 1e-300});
  if (std::abs(plus - minus) > 1e-6 * denom)
    throw numeric_error("admissibility_constant: +xi and -xi integrals differ by " +
                        format_scalar(std::abs(plus - minus) / denom));
  return plus;
}

Signal normalize_admissible(const Signal& g) {
  Scalar c = admissibility_constant(g);
  if (!(c > 0)) throw numeric_error("normalize_admissible: wavelet is not admissible");
  Signal out = g;
  out.values /= std::sqrt(c);
  return out;
}

CoefField cwt(const Signal& f, const Signal& g, const ScaleGrid& grid) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("cwt: signal and wavelet grid mismatch");
  const TimeGrid& tg = f.grid;
  if (grid.s_min < 2.0 * tg.step - kLatticeTol)
    throw numeric_error("cwt: s_min below the resolvable scale 2*step");
  lattice_multiple(grid.x_step, tg.step, "cwt: x_step");
  lattice_multiple(grid.x_half_width, tg.step, "cwt: x_half_width");

  const int n = tg.count;
  const Scalar two_t = 2.0 * tg.half_width;
  const long x0_shift = std::lround(-grid.x_half_width / tg.step);
  const long x_shift_step = std::lround(grid.x_step / tg.step);

  // Discrete spectrum of g, bins m = -n/2 .. n/2-1; the dilated kernel is the
  // trigonometric interpolant evaluated at lag*step/s, zero outside [-T, T).
  Eigen::FFT<Scalar> fft;
  ComplexVec g_fft;
  {
    ComplexVec gv = g.values;
    fft.fwd(g_fft, gv);
  }
  ComplexVec spectrum(n);
  for (int m = 0; m < n; ++m) {
    int m_signed = (m < n / 2) ? m : m - n;
    // DTFT at bin m/(2T) of samples on t_k = -T + k*step: the lattice phase
    // contributes (-1)^m relative to the index-space FFT.
    Scalar sign = (m_signed % 2 == 0) ? 1.0 : -1.0;
    spectrum[m] = tg.step * sign * g_fft[m];
  }

  CoefField C;
  C.domain = CoefField::Domain::time_scale;
  C.row_coord.resize(grid.s_count);
  C.col_coord.resize(grid.x_count);
  C.row_measure.resize(grid.s_count);
  for (int j = 0; j < grid.s_count; ++j) {
    C.row_coord[j] = grid.s(j);
    C.row_measure[j] = std::log(grid.rho) / grid.s(j);
  }
  for (int k = 0; k < grid.x_count; ++k) C.col_coord[k] = grid.x(k);
  C.col_measure = RealVec::Constant(grid.x_count, grid.x_step);
  C.values.resize(grid.s_count, grid.x_count);

  const Eigen::Index taps = 2 * n - 1;
  const Eigen::Index padded = pow2_at_least(3 * static_cast<Eigen::Index>(n));

  ComplexVec f_pad = ComplexVec::Zero(padded);
  for (int i = 0; i < n; ++i) f_pad[i] = f.values[i];
  ComplexVec f_spec;
  {
    Eigen::FFT<Scalar> fft_f;
    fft_f.fwd(f_spec, f_pad);
  }

  parallel_for(grid.s_count, [&](Eigen::Index j) {
    Scalar s = grid.s(j);
    // Kernel tap at lag i: interpolant of g at u = i*step/s via Horner over the
    // spectrum bins, with the bin offset -n/2 peeled off as a prefactor.
    ComplexVec kernel = ComplexVec::Zero(taps);
    for (Eigen::Index tap = 0; tap < taps; ++tap) {
      long lag = tap - (n - 1);
      Scalar u = lag * tg.step / s;
      if (u < -tg.half_width || u >= tg.half_width) continue;
      Complex q = std::polar(1.0, 2.0 * kPi * u / two_t);
      Complex acc(0, 0);
      for (int m = n - 1; m >= 0; --m) {
        int bin = (m + n / 2) % n;  // spectrum index for signed bin m - n/2
        acc = acc * q + spectrum[bin];
      }
      Complex base = std::polar(1.0, -2.0 * kPi * (n / 2) * u / two_t);
      kernel[tap] = acc * base / two_t;
    }

    Eigen::FFT<Scalar> fft_j;
    ComplexVec k_pad = ComplexVec::Zero(padded);
    for (Eigen::Index tap = 0; tap < taps; ++tap) k_pad[tap] = std::conj(kernel[tap]);
    ComplexVec k_spec;
    fft_j.fwd(k_spec, k_pad);
    ComplexVec prod(padded);
    for (Eigen::Index i = 0; i < padded; ++i) prod[i] = f_spec[i] * std::conj(k_spec[i]);
    ComplexVec corr;
    fft_j.inv(corr, prod);

    Scalar amp = tg.step / std::sqrt(s);
    for (int k = 0; k < grid.x_count; ++k) {
      long tau = x0_shift + k * x_shift_step;
      Eigen::Index idx = ((tau - (n - 1)) % padded + padded) % padded;
      C.values(j, k) = amp * corr[idx];
    }
  });
  return C;
}

Scalar field_l2_hyperbolic(const CoefField& C) {
  if (C.domain != CoefField::Domain::time_scale)
    throw std::invalid_argument("field_l2_hyperbolic: field is not a time-scale field");
  return field_l2(C);
}

}  // namespace tfc
