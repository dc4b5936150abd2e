#include "tfc/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <fstream>

namespace tfc {

namespace {

constexpr Scalar kPi = 3.14159265358979323846;
constexpr Scalar kLatticeTol = 1e-9;

long lattice_multiple(Scalar value, Scalar step, const char* what) {
  long m = std::lround(value / step);
  if (std::abs(m * step - value) > kLatticeTol)
    throw std::invalid_argument(std::string(what) + " must be a lattice multiple of " +
                                format_scalar(step));
  return m;
}

void check_unimodular(const HPoint& p) {
  if (std::abs(std::abs(p.tau) - 1.0) > 1e-12)
    throw std::invalid_argument("HPoint: |tau| must be 1");
}

// Frequency bins m_k = w_k * 2T of the field's frequency lattice; the DFT over
// N = 2T/step samples evaluates exp(-2 pi i w_k t) as (-1)^{m_k} * bin(m_k mod N).
struct BinLayout {
  long m0 = 0;
  long m_step = 0;
};

BinLayout frequency_bins(const TimeGrid& tg, const TFGrid& grid) {
  Scalar two_t = 2.0 * tg.half_width;
  Scalar nyquist = 1.0 / (2.0 * tg.step);
  if (grid.w_half_width > nyquist + kLatticeTol)
    throw numeric_error("stft: frequency range exceeds the Nyquist bound " +
                        format_scalar(nyquist));
  BinLayout b;
  b.m_step = lattice_multiple(grid.w_step * two_t, 1.0, "stft: w_step * 2T");
  b.m0 = lattice_multiple(-grid.w_half_width * two_t, 1.0, "stft: w_half_width * 2T");
  return b;
}

void check_x_lattice(const TimeGrid& tg, const TFGrid& grid) {
  lattice_multiple(grid.x_step, tg.step, "stft: x_step");
  lattice_multiple(grid.x_half_width, tg.step, "stft: x_half_width");
}

Scalar frame_energy_fraction(const CoefField& C) {
  const Eigen::Index rows = C.values.rows();
  const Eigen::Index cols = C.values.cols();
  RealVec terms(rows * cols);
  RealVec frame(rows * cols);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j, ++n) {
      Scalar mass = std::norm(C.values(i, j)) * C.cell_measure(i, j);
      terms[n] = mass;
      bool edge = i == 0 || i == rows - 1 || j == 0 || j == cols - 1;
      frame[n] = edge ? mass : 0.0;
    }
  }
  Scalar total = pairwise_sum(terms);
  if (total == 0) return 0;
  return pairwise_sum(frame) / total;
}

}  // namespace

TFGrid::TFGrid(Scalar x_half_width_, Scalar x_step_, Scalar w_half_width_, Scalar w_step_)
    : x_half_width(x_half_width_),
      x_step(x_step_),
      w_half_width(w_half_width_),
      w_step(w_step_) {
  if (!(x_half_width > 0) || !(x_step > 0) || !(w_half_width > 0) || !(w_step > 0))
    throw std::invalid_argument("TFGrid: extents and steps must be positive");
  auto derive = [](Scalar half_width, Scalar step, const char* axis) {
    Scalar ratio = 2.0 * half_width / step;
    int count = static_cast<int>(std::lround(ratio));
    if (std::abs(count * step - 2.0 * half_width) > kLatticeTol * std::max(1.0, 2.0 * half_width))
      throw std::invalid_argument(std::string("TFGrid: ") + axis +
                                  " count*step must equal 2*half_width");
    if (count < 8 || count % 2 != 0)
      throw std::invalid_argument(std::string("TFGrid: ") + axis + " count must be even and >= 8");
    return count;
  };
  x_count = derive(x_half_width, x_step, "x");
  w_count = derive(w_half_width, w_step, "w");
}

Signal tf_shift(const Signal& f, const HPoint& p) {
  check_unimodular(p);
  long shift = lattice_multiple(p.x, f.grid.step, "tf_shift: x");
  Signal out;
  out.grid = f.grid;
  out.values = ComplexVec::Zero(f.grid.count);
  for (int k = 0; k < f.grid.count; ++k) {
    long src = k - shift;
    if (src < 0 || src >= f.grid.count) continue;
    Scalar u = f.grid.t(k) - p.x;
    out.values[k] = p.tau * std::polar(1.0, 2.0 * kPi * p.w * u) * f.values[src];
  }
  return out;
}

HPoint heisenberg_compose(const HPoint& a, const HPoint& b) {
  check_unimodular(a);
  check_unimodular(b);
  HPoint c;
  c.x = a.x + b.x;
  c.w = a.w + b.w;
  c.tau = a.tau * b.tau * std::polar(1.0, 2.0 * kPi * b.x * a.w);
  return c;
}

CoefField stft(const Signal& f, const Signal& g, const TFGrid& grid) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("stft: signal and window grid mismatch");
  const TimeGrid& tg = f.grid;
  check_x_lattice(tg, grid);
  BinLayout bins = frequency_bins(tg, grid);

  const int n = tg.count;
  const long x0_shift = std::lround(-grid.x_half_width / tg.step);
  const long x_shift_step = std::lround(grid.x_step / tg.step);

  CoefField C;
  C.domain = CoefField::Domain::time_frequency;
  C.row_coord.resize(grid.x_count);
  C.col_coord.resize(grid.w_count);
  for (int j = 0; j < grid.x_count; ++j) C.row_coord[j] = grid.x(j);
  for (int k = 0; k < grid.w_count; ++k) C.col_coord[k] = grid.w(k);
  C.row_measure = RealVec::Constant(grid.x_count, grid.x_step);
  C.col_measure = RealVec::Constant(grid.w_count, grid.w_step);
  C.values.resize(grid.x_count, grid.w_count);

  parallel_for(grid.x_count, [&](Eigen::Index j) {
    Eigen::FFT<Scalar> fft;
    long shift = x0_shift + j * x_shift_step;
    ComplexVec h = ComplexVec::Zero(n);
    for (int i = 0; i < n; ++i) {
      long src = i - shift;
      if (src >= 0 && src < n) h[i] = f.values[i] * std::conj(g.values[src]);
    }
    ComplexVec spectrum;
    fft.fwd(spectrum, h);
    for (int k = 0; k < grid.w_count; ++k) {
      long m = bins.m0 + k * bins.m_step;
      long bin = ((m % n) + n) % n;
      Scalar sign = (m % 2 == 0) ? 1.0 : -1.0;
      C.values(j, k) = tg.step * sign * spectrum[bin];
    }
  });
  return C;
}

Signal istft(const CoefField& C, const Signal& g) {
  if (C.domain != CoefField::Domain::time_frequency)
    throw std::invalid_argument("istft: field is not a time-frequency field");
  const TimeGrid& tg = g.grid;
  Scalar gnorm = lp_norm(g, 2.0);
  if (std::abs(gnorm - 1.0) > 1e-8)
    throw numeric_error("istft: window is not unit-norm (got " + format_scalar(gnorm) + ")");
  if (frame_energy_fraction(C) > 1e-10)
    throw numeric_error("istft: field boundary holds more than 1e-10 of the energy");

  const int n = tg.count;
  const Eigen::Index rows = C.values.rows();
  const Eigen::Index cols = C.values.cols();
  Scalar two_t = 2.0 * tg.half_width;
  Scalar nyquist = 1.0 / (2.0 * tg.step);

  std::vector<long> row_shift(rows);
  for (Eigen::Index j = 0; j < rows; ++j)
    row_shift[j] = lattice_multiple(C.row_coord[j], tg.step, "istft: x coordinate");
  std::vector<long> col_bin(cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (std::abs(C.col_coord[k]) > nyquist + kLatticeTol)
      throw numeric_error("istft: frequency exceeds the Nyquist bound");
    col_bin[k] = lattice_multiple(C.col_coord[k] * two_t, 1.0, "istft: w * 2T");
  }

  // Per-row synthesis kept separate, then pairwise-summed per sample, so the
  // result does not depend on the worker count.
  ComplexMat contrib(rows, n);
  parallel_for(rows, [&](Eigen::Index j) {
    Eigen::FFT<Scalar> fft;
    ComplexVec spectrum = ComplexVec::Zero(n);
    for (Eigen::Index k = 0; k < cols; ++k) {
      long m = col_bin[k];
      long bin = ((m % n) + n) % n;
      Scalar sign = (m % 2 == 0) ? 1.0 : -1.0;
      spectrum[bin] += C.values(j, k) * sign * C.cell_measure(j, k);
    }
    ComplexVec wave;
    fft.inv(wave, spectrum);
    long shift = row_shift[j];
    for (int i = 0; i < n; ++i) {
      long src = i - shift;
      contrib(j, i) = (src >= 0 && src < n)
                          ? Scalar(n) * wave[i] * g.values[src]
                          : Complex(0, 0);
    }
  });

  Signal out;
  out.grid = tg;
  out.values.resize(n);
  ComplexVec column(rows);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < rows; ++j) column[j] = contrib(j, i);
    out.values[i] = pairwise_sum(column);
  }
  return out;
}

Scalar field_l2(const CoefField& C) {
  const Eigen::Index rows = C.values.rows();
  const Eigen::Index cols = C.values.cols();
  RealVec terms(rows * cols);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j, ++n)
      terms[n] = std::norm(C.values(i, j)) * C.cell_measure(i, j);
  return std::sqrt(pairwise_sum(terms));
}

void write_field_csv(const std::string& path, const CoefField& C) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_field_csv: cannot open " + path);
  auto emit = [&](Scalar a, Scalar b, Complex v, Scalar measure) {
    out << format_scalar(a) << ',' << format_scalar(b) << ',' << format_scalar(v.real()) << ','
        << format_scalar(v.imag()) << ',' << format_scalar(measure) << '\n';
  };
  switch (C.domain) {
    case CoefField::Domain::time_frequency:
      out << "x,w,re,im,measure\n";
      for (Eigen::Index i = 0; i < C.values.rows(); ++i)
        for (Eigen::Index j = 0; j < C.values.cols(); ++j)
          emit(C.row_coord[i], C.col_coord[j], C.values(i, j), C.cell_measure(i, j));
      break;
    case CoefField::Domain::time_scale:
      out << "x,s,re,im,measure\n";
      for (Eigen::Index j = 0; j < C.values.cols(); ++j)
        for (Eigen::Index i = 0; i < C.values.rows(); ++i)
          emit(C.col_coord[j], C.row_coord[i], C.values(i, j), C.cell_measure(i, j));
      break;
    case CoefField::Domain::fock:
      out << "x,y,re,im,measure\n";
      for (Eigen::Index i = 0; i < C.values.rows(); ++i)
        for (Eigen::Index j = 0; j < C.values.cols(); ++j) {
          Scalar r = C.row_coord[i];
          Scalar th = C.col_coord[j];
          emit(r * std::cos(th), r * std::sin(th), C.values(i, j), C.cell_measure(i, j));
        }
      break;
  }
  if (!out) throw std::runtime_error("write_field_csv: write failed for " + path);
}

}  // namespace tfc
