#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace tfc {

using Scalar = double;
using Complex = std::complex<Scalar>;
using RealVec = Eigen::VectorXd;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

// Failed numeric precondition (undersampled grid, truncation budget blown, ...).
// The CLI maps this to exit code 3; std::invalid_argument maps to exit code 2.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform lattice t_k = -T + k*step covering [-T, T), count*step == 2T.
struct TimeGrid {
  Scalar half_width = 0;
  Scalar step = 0;
  int count = 0;

  TimeGrid() = default;
  TimeGrid(Scalar half_width_, Scalar step_);

  Scalar t(int k) const { return -half_width + k * step; }

  // Nearest lattice index; throws std::invalid_argument when u is off-lattice.
  int index_of(Scalar u) const;
  bool on_lattice(Scalar u) const;

  bool operator==(const TimeGrid& o) const {
    return half_width == o.half_width && step == o.step && count == o.count;
  }
};

struct Signal {
  TimeGrid grid;
  ComplexVec values;
};

// Analytic signal families plus file-backed samples. translate/modulate/dilate
// wrap a base spec and are applied to the analytic formula, not to resampled
// values, so nesting stays exact.
struct SignalSpec {
  enum class Kind { gaussian, hermite, translate, modulate, dilate, mexican_hat, samples };

  Kind kind = Kind::gaussian;
  int order = 0;                          // hermite
  Scalar amount = 0;                      // translate x0 / modulate w0 / dilate s0
  std::shared_ptr<const SignalSpec> base; // operator kinds
  std::string file;                       // samples

  static SignalSpec gaussian();
  static SignalSpec hermite(int n);
  static SignalSpec mexican_hat();
  static SignalSpec translate(SignalSpec base, Scalar x0);
  static SignalSpec modulate(SignalSpec base, Scalar w0);
  static SignalSpec dilate(SignalSpec base, Scalar s0);
  static SignalSpec samples(std::string file);
};

// Pointwise value of an analytic spec (samples kind not evaluable this way).
Complex eval_spec(const SignalSpec& spec, Scalar t);

Signal make_signal(const SignalSpec& spec, const TimeGrid& grid);

// (sum_k |f_k|^p * step)^(1/p), fixed pairwise summation order.
Scalar lp_norm(const Signal& f, Scalar p);

// sum_k f_k * conj(g_k) * step, fixed pairwise summation order.
Complex inner_product(const Signal& f, const Signal& g);

// f scaled to unit L2 norm; numeric_error on the zero signal.
Signal normalize_l2(const Signal& f);

// Lattice shift by h (an integer multiple of step) with zero fill, no wraparound.
Signal translate_samples(const Signal& f, Scalar h);

// CSV rows `t,re[,im]`, optional header; row count must equal grid.count and the
// t column must sit on the grid lattice.
Signal read_signal_csv(const std::string& path, const TimeGrid& grid);
void write_signal_csv(const std::string& path, const Signal& f);

// Shortest decimal form that round-trips (printf %.17g with downshift); shared by
// every writer so reports are byte-stable.
std::string format_scalar(Scalar v);

// Deterministic reduction: fixed binary tree split at n/2, leaves of <= 8 summed
// left to right. The tree shape never depends on the worker count.
Scalar pairwise_sum(const Scalar* data, Eigen::Index n);
Complex pairwise_sum(const Complex* data, Eigen::Index n);
Scalar pairwise_sum(const RealVec& v);
Complex pairwise_sum(const ComplexVec& v);

// Process-wide worker count for row-parallel loops (CLI --workers).
int worker_count();
void set_worker_count(int workers);

// Runs body(i) for i in [0, n) split into one contiguous block per worker.
// Bodies must write disjoint outputs; reductions go through pairwise_sum.
void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body);

}  // namespace tfc
