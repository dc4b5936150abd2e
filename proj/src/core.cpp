#include "tfc/core.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

namespace tfc {

namespace {

constexpr Scalar kPi = 3.14159265358979323846;
constexpr Scalar kLatticeTol = 1e-9;

// Physicists' Hermite polynomial H_n(u).
Scalar hermite_poly(int n, Scalar u) {
  Scalar hk = 1.0;
  if (n == 0) return hk;
  Scalar hk1 = 2.0 * u;
  for (int k = 1; k < n; ++k) {
    Scalar next = 2.0 * u * hk1 - 2.0 * k * hk;
    hk = hk1;
    hk1 = next;
  }
  return hk1;
}

template <typename T>
T pairwise_sum_impl(const T* data, Eigen::Index n) {
  if (n <= 8) {
    T acc = T(0);
    for (Eigen::Index i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  Eigen::Index half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

void require_finite(const ComplexVec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                  std::to_string(i));
  }
}

std::atomic<int> g_workers{1};

}  // namespace

TimeGrid::TimeGrid(Scalar half_width_, Scalar step_) : half_width(half_width_), step(step_) {
  if (!(half_width > 0) || !(step > 0))
    throw std::invalid_argument("TimeGrid: half_width and step must be positive");
  Scalar ratio = 2.0 * half_width / step;
  count = static_cast<int>(std::lround(ratio));
  if (std::abs(count * step - 2.0 * half_width) > kLatticeTol * std::max(1.0, 2.0 * half_width))
    throw std::invalid_argument("TimeGrid: count*step must equal 2*half_width");
  if (count < 8 || count % 2 != 0)
    throw std::invalid_argument("TimeGrid: count must be even and >= 8");
}

int TimeGrid::index_of(Scalar u) const {
  int k = static_cast<int>(std::lround((u + half_width) / step));
  if (k < 0 || k >= count || std::abs(t(k) - u) > kLatticeTol)
    throw std::invalid_argument("TimeGrid: value is not on the lattice");
  return k;
}

bool TimeGrid::on_lattice(Scalar u) const {
  int k = static_cast<int>(std::lround((u + half_width) / step));
  return k >= 0 && k < count && std::abs(t(k) - u) <= kLatticeTol;
}

SignalSpec SignalSpec::gaussian() {
  SignalSpec s;
  s.kind = Kind::gaussian;
  return s;
}

SignalSpec SignalSpec::hermite(int n) {
  if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
  SignalSpec s;
  s.kind = Kind::hermite;
  s.order = n;
  return s;
}

SignalSpec SignalSpec::mexican_hat() {
  SignalSpec s;
  s.kind = Kind::mexican_hat;
  return s;
}

namespace {
SignalSpec wrap(SignalSpec::Kind kind, SignalSpec base, Scalar amount) {
  if (base.kind == SignalSpec::Kind::samples)
    throw std::invalid_argument("signal spec: sampled base has no analytic form to transform");
  SignalSpec s;
  s.kind = kind;
  s.amount = amount;
  s.base = std::make_shared<const SignalSpec>(std::move(base));
  return s;
}
}  // namespace

SignalSpec SignalSpec::translate(SignalSpec base, Scalar x0) {
  return wrap(Kind::translate, std::move(base), x0);
}

SignalSpec SignalSpec::modulate(SignalSpec base, Scalar w0) {
  return wrap(Kind::modulate, std::move(base), w0);
}

SignalSpec SignalSpec::dilate(SignalSpec base, Scalar s0) {
  if (!(s0 > 0)) throw std::invalid_argument("dilate: scale must be positive");
  return wrap(Kind::dilate, std::move(base), s0);
}

SignalSpec SignalSpec::samples(std::string file) {
  SignalSpec s;
  s.kind = Kind::samples;
  s.file = std::move(file);
  return s;
}

Complex eval_spec(const SignalSpec& spec, Scalar t) {
  switch (spec.kind) {
    case SignalSpec::Kind::gaussian:
      return std::exp(-kPi * t * t);
    case SignalSpec::Kind::hermite: {
      int n = spec.order;
      Scalar norm = std::pow(2.0, 0.25) / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0));
      return norm * hermite_poly(n, std::sqrt(2.0 * kPi) * t) * std::exp(-kPi * t * t);
    }
    case SignalSpec::Kind::mexican_hat:
      return (1.0 - 2.0 * kPi * t * t) * std::exp(-kPi * t * t);
    case SignalSpec::Kind::translate:
      return eval_spec(*spec.base, t - spec.amount);
    case SignalSpec::Kind::modulate:
      return std::polar(1.0, 2.0 * kPi * spec.amount * t) * eval_spec(*spec.base, t);
    case SignalSpec::Kind::dilate:
      return eval_spec(*spec.base, t / spec.amount) / std::sqrt(spec.amount);
    case SignalSpec::Kind::samples:
      throw std::invalid_argument("signal spec: sampled kind has no analytic evaluation");
  }
  throw std::invalid_argument("signal spec: unknown kind");
}

Signal make_signal(const SignalSpec& spec, const TimeGrid& grid) {
  if (spec.kind == SignalSpec::Kind::samples) return read_signal_csv(spec.file, grid);
  Signal f;
  f.grid = grid;
  f.values.resize(grid.count);
  for (int k = 0; k < grid.count; ++k) f.values[k] = eval_spec(spec, grid.t(k));
  require_finite(f.values, "make_signal");
  return f;
}

Scalar lp_norm(const Signal& f, Scalar p) {
  if (!(p >= 1)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Eigen::Index n = f.values.size();
  RealVec terms(n);
  for (Eigen::Index i = 0; i < n; ++i) terms[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(pairwise_sum(terms) * f.grid.step, 1.0 / p);
}

Complex inner_product(const Signal& f, const Signal& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  const Eigen::Index n = f.values.size();
  ComplexVec terms(n);
  for (Eigen::Index i = 0; i < n; ++i) terms[i] = f.values[i] * std::conj(g.values[i]);
  return pairwise_sum(terms) * f.grid.step;
}

Signal normalize_l2(const Signal& f) {
  Scalar n = lp_norm(f, 2.0);
  if (n == 0) throw numeric_error("normalize_l2: zero signal");
  Signal out = f;
  out.values /= n;
  return out;
}

Signal translate_samples(const Signal& f, Scalar h) {
  long shift = std::lround(h / f.grid.step);
  if (std::abs(shift * f.grid.step - h) > kLatticeTol)
    throw std::invalid_argument("translate_samples: shift must be a lattice multiple");
  Signal out;
  out.grid = f.grid;
  out.values = ComplexVec::Zero(f.grid.count);
  for (int k = 0; k < f.grid.count; ++k) {
    long src = k - shift;
    if (src >= 0 && src < f.grid.count) out.values[k] = f.values[src];
  }
  return out;
}

Signal read_signal_csv(const std::string& path, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_signal_csv: cannot open " + path);
  Signal f;
  f.grid = grid;
  f.values.resize(grid.count);
  std::string line;
  int row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      size_t i = line.find_first_not_of(" \t");
      if (i != std::string::npos && (std::isalpha(static_cast<unsigned char>(line[i]))))
        continue;  // header row
    }
    std::stringstream ss(line);
    std::string fieldstr;
    std::vector<Scalar> fields;
    while (std::getline(ss, fieldstr, ',')) {
      try {
        fields.push_back(std::stod(fieldstr));
      } catch (const std::exception&) {
        throw std::invalid_argument("read_signal_csv: bad number in row " + std::to_string(row));
      }
    }
    if (fields.size() != 2 && fields.size() != 3)
      throw std::invalid_argument("read_signal_csv: expected 2 or 3 columns in row " +
                                  std::to_string(row));
    if (row >= grid.count)
      throw std::invalid_argument("read_signal_csv: more rows than grid.count");
    if (std::abs(fields[0] - grid.t(row)) > kLatticeTol)
      throw std::invalid_argument("read_signal_csv: t column off the grid lattice in row " +
                                  std::to_string(row));
    f.values[row] = Complex(fields[1], fields.size() == 3 ? fields[2] : 0.0);
    ++row;
  }
  if (row != grid.count)
    throw std::invalid_argument("read_signal_csv: row count " + std::to_string(row) +
                                " does not match grid.count " + std::to_string(grid.count));
  require_finite(f.values, "read_signal_csv");
  return f;
}

void write_signal_csv(const std::string& path, const Signal& f) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_signal_csv: cannot open " + path);
  out << "t,re,im\n";
  for (int k = 0; k < f.grid.count; ++k) {
    out << format_scalar(f.grid.t(k)) << ',' << format_scalar(f.values[k].real()) << ','
        << format_scalar(f.values[k].imag()) << '\n';
  }
  if (!out) throw std::runtime_error("write_signal_csv: write failed for " + path);
}

std::string format_scalar(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scalar pairwise_sum(const Scalar* data, Eigen::Index n) { return pairwise_sum_impl(data, n); }
Complex pairwise_sum(const Complex* data, Eigen::Index n) { return pairwise_sum_impl(data, n); }
Scalar pairwise_sum(const RealVec& v) { return pairwise_sum_impl(v.data(), v.size()); }
Complex pairwise_sum(const ComplexVec& v) { return pairwise_sum_impl(v.data(), v.size()); }

int worker_count() { return g_workers.load(); }

void set_worker_count(int workers) {
  if (workers < 1) throw std::invalid_argument("set_worker_count: workers must be >= 1");
  g_workers.store(workers);
}

void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body) {
  int w = worker_count();
  if (w <= 1 || n < 2) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  if (static_cast<Eigen::Index>(w) > n) w = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int b = 0; b < w; ++b) {
    Eigen::Index lo = n * b / w;
    Eigen::Index hi = n * (b + 1) / w;
    pool.emplace_back([lo, hi, &body] {
      for (Eigen::Index i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tfc
