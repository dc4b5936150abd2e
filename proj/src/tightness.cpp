#include "tfc/tightness.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace tfc {

namespace {

const char* region_name(RegionFamily::Kind kind) {
  switch (kind) {
    case RegionFamily::Kind::tf_ball: return "tf_ball";
    case RegionFamily::Kind::tf_box: return "tf_box";
    case RegionFamily::Kind::scale_window: return "scale_window";
    case RegionFamily::Kind::fock_disk: return "fock_disk";
    case RegionFamily::Kind::time_interval: return "time_interval";
  }
  return "unknown";
}

void check_compatible(RegionFamily::Kind kind, const CoefField& C) {
  bool ok = false;
  switch (kind) {
    case RegionFamily::Kind::tf_ball:
    case RegionFamily::Kind::tf_box:
      ok = C.domain == CoefField::Domain::time_frequency;
      break;
    case RegionFamily::Kind::scale_window:
      ok = C.domain == CoefField::Domain::time_scale;
      break;
    case RegionFamily::Kind::fock_disk:
      ok = C.domain == CoefField::Domain::fock;
      break;
    case RegionFamily::Kind::time_interval:
      ok = false;
      break;
  }
  if (!ok)
    throw std::invalid_argument(std::string("tail_norm: region kind ") + region_name(kind) +
                                " does not match the field's domain");
}

bool cell_inside(RegionFamily::Kind kind, const CoefField& C, Eigen::Index i, Eigen::Index j,
                 Scalar r) {
  switch (kind) {
    case RegionFamily::Kind::tf_ball:
      return std::hypot(C.row_coord[i], C.col_coord[j]) <= r;
    case RegionFamily::Kind::tf_box:
      return std::abs(C.row_coord[i]) <= r && std::abs(C.col_coord[j]) <= r;
    case RegionFamily::Kind::scale_window:
      return std::abs(C.col_coord[j]) <= r && C.row_coord[i] >= 1.0 / r && C.row_coord[i] <= r;
    case RegionFamily::Kind::fock_disk:
      return C.row_coord[i] <= r;
    case RegionFamily::Kind::time_interval:
      return false;
  }
  return false;
}

const char* transform_name(DiagnoseConfig::Transform t) {
  switch (t) {
    case DiagnoseConfig::Transform::stft: return "stft";
    case DiagnoseConfig::Transform::cwt: return "cwt";
    case DiagnoseConfig::Transform::fock: return "fock";
  }
  return "unknown";
}

Signal family_window(const FamilySpec& family, const DiagnoseConfig& config) {
  Signal w = make_signal(family.window, config.time_grid);
  if (!family.normalize_window) return w;
  return config.transform == DiagnoseConfig::Transform::cwt ? normalize_admissible(w)
                                                            : normalize_l2(w);
}

std::vector<CoefField> transform_signals(const std::vector<Signal>& signals,
                                         const FamilySpec& family,
                                         const DiagnoseConfig& config) {
  Signal w = family_window(family, config);
  std::vector<CoefField> fields;
  fields.reserve(signals.size());
  for (const Signal& f : signals)
    fields.push_back(config.transform == DiagnoseConfig::Transform::stft
                         ? stft(f, w, config.tf_grid)
                         : cwt(f, w, config.scale_grid));
  return fields;
}

Scalar signal_distance(const Signal& f, const Signal& g, const NetMetric& metric,
                       const Signal* window, const TFGrid* tf_grid) {
  Signal diff{f.grid, f.values - g.values};
  if (metric.kind == NetMetric::Kind::l2) return lp_norm(diff, 2);
  if (window == nullptr || tf_grid == nullptr)
    throw std::invalid_argument("epsilon_net: the modulation metric needs a window and a TF grid");
  return modulation_norm(diff, *window, metric.p, metric.q, metric.a, *tf_grid);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

void write_pair_table(std::ofstream& out, const char* key, const std::vector<Scalar>& coords,
                      const std::vector<Scalar>& values) {
  out << "  \"" << key << "\": [";
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i) out << ", ";
    out << "[" << format_scalar(coords[i]) << ", " << format_scalar(values[i]) << "]";
  }
  out << "]";
}

}  // namespace

RegionFamily::RegionFamily(Kind kind_, std::vector<Scalar> radii_)
    : kind(kind_), radii(std::move(radii_)) {
  if (radii.empty()) throw std::invalid_argument("RegionFamily: radii list is empty");
  Scalar floor = kind == Kind::scale_window ? 1.0 : 0.0;
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > floor))
      throw std::invalid_argument(std::string("RegionFamily: radii must be > ") +
                                  format_scalar(floor) + " for " + region_name(kind));
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("RegionFamily: radii must be strictly increasing");
  }
}

NetMetric NetMetric::l2() { return NetMetric{}; }

NetMetric NetMetric::modulation(Scalar p, Scalar q, Scalar a) {
  if (!(p >= 1) || !(q >= 1))
    throw std::invalid_argument("NetMetric: modulation p and q must be >= 1");
  NetMetric m;
  m.kind = Kind::modulation;
  m.p = p;
  m.q = q;
  m.a = a;
  return m;
}

Scalar tail_norm(const CoefField& C, const NormSpec& spec, const RegionFamily& region, Scalar r) {
  if (!(r > 0)) throw std::invalid_argument("tail_norm: radius must be positive");
  if (region.radii.empty() || r > region.radii.back())
    throw std::invalid_argument("tail_norm: radius exceeds the region family's largest radius");
  check_compatible(region.kind, C);
  CoefField masked = C;
  for (Eigen::Index i = 0; i < masked.values.rows(); ++i)
    for (Eigen::Index j = 0; j < masked.values.cols(); ++j)
      if (cell_inside(region.kind, C, i, j, r)) masked.values(i, j) = Complex(0, 0);
  return mixed_norm(masked, spec);
}

std::vector<Signal> family_signals(const FamilySpec& family, const TimeGrid& grid) {
  if (family.members.empty())
    throw std::invalid_argument("family_signals: the family has no signal members");
  std::vector<Signal> out;
  out.reserve(family.members.size());
  for (const SignalSpec& spec : family.members) {
    Signal f = make_signal(spec, grid);
    out.push_back(family.normalize_members ? normalize_l2(f) : f);
  }
  return out;
}

std::vector<CoefField> family_fields(const FamilySpec& family, const DiagnoseConfig& config) {
  if (config.transform == DiagnoseConfig::Transform::fock) {
    if (family.fock_members.empty())
      throw std::invalid_argument("family_fields: the family has no fock members");
    std::vector<CoefField> fields;
    fields.reserve(family.fock_members.size());
    for (const EntireFn& F : family.fock_members) fields.push_back(fock_field(F, config.fock_grid));
    return fields;
  }
  return transform_signals(family_signals(family, config.time_grid), family, config);
}

std::vector<Scalar> tightness_profile(const std::vector<CoefField>& fields, const NormSpec& spec,
                                      const RegionFamily& region) {
  if (fields.empty()) throw std::invalid_argument("tightness_profile: no coefficient fields");
  std::vector<Scalar> profile(region.radii.size(), 0.0);
  for (const CoefField& C : fields)
    for (size_t k = 0; k < region.radii.size(); ++k)
      profile[k] = std::max(profile[k], tail_norm(C, spec, region, region.radii[k]));
  return profile;
}

std::optional<Scalar> tight_radius(const std::vector<Scalar>& radii,
                                   const std::vector<Scalar>& profile, Scalar eps) {
  if (!(eps > 0)) throw std::invalid_argument("tight_radius: epsilon must be positive");
  if (radii.size() != profile.size())
    throw std::invalid_argument("tight_radius: radii and profile lengths differ");
  for (size_t k = 0; k < radii.size(); ++k)
    if (profile[k] < eps) return radii[k];
  return std::nullopt;
}

RealVec weil_equicontinuity(const std::vector<Signal>& members, Scalar p,
                            const std::vector<Scalar>& deltas) {
  if (members.empty()) throw std::invalid_argument("weil_equicontinuity: empty family");
  const TimeGrid& grid = members.front().grid;
  RealVec table(static_cast<Eigen::Index>(deltas.size()));
  for (size_t d = 0; d < deltas.size(); ++d) {
    Scalar delta = deltas[d];
    if (delta < 0) throw std::invalid_argument("weil_equicontinuity: negative delta");
    long steps = std::lround(delta / grid.step);
    if (std::abs(steps * grid.step - delta) > 1e-9)
      throw std::invalid_argument("weil_equicontinuity: delta " + format_scalar(delta) +
                                  " is not on the time lattice");
    Scalar modulus = 0;
    for (const Signal& f : members) {
      if (!(f.grid == grid))
        throw std::invalid_argument("weil_equicontinuity: members on different grids");
      for (long j = 1; j <= steps; ++j)
        for (Scalar sign : {1.0, -1.0}) {
          Signal shifted = translate_samples(f, sign * j * grid.step);
          shifted.values -= f.values;
          modulus = std::max(modulus, lp_norm(shifted, p));
        }
    }
    table[static_cast<Eigen::Index>(d)] = modulus;
  }
  return table;
}

RealVec weil_tightness(const std::vector<Signal>& members, Scalar p,
                       const std::vector<Scalar>& radii) {
  if (members.empty()) throw std::invalid_argument("weil_tightness: empty family");
  if (!(p >= 1)) throw std::invalid_argument("weil_tightness: p must be >= 1");
  RealVec table(static_cast<Eigen::Index>(radii.size()));
  for (size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0)) throw std::invalid_argument("weil_tightness: radii must be positive");
    Scalar worst = 0;
    for (const Signal& f : members) {
      const TimeGrid& grid = f.grid;
      RealVec terms(grid.count);
      for (int i = 0; i < grid.count; ++i) {
        Scalar t = grid.t(i);
        terms[i] = std::abs(t) > radii[k] ? std::pow(std::abs(f.values[i]), p) * grid.step : 0.0;
      }
      worst = std::max(worst, std::pow(pairwise_sum(terms), 1.0 / p));
    }
    table[static_cast<Eigen::Index>(k)] = worst;
  }
  return table;
}

std::vector<Signal> spectral_family(const std::vector<Signal>& members) {
  std::vector<Signal> out;
  out.reserve(members.size());
  for (const Signal& f : members) {
    const TimeGrid& grid = f.grid;
    const int n = grid.count;
    TimeGrid dual(1.0 / (2.0 * grid.step), 1.0 / (2.0 * grid.half_width));
    Eigen::FFT<Scalar> fft;
    ComplexVec spectrum;
    ComplexVec values = f.values;
    fft.fwd(spectrum, values);
    Signal fhat{dual, ComplexVec(n)};
    for (int k = 0; k < n; ++k) {
      long m = k - n / 2;
      long bin = ((m % n) + n) % n;
      Scalar sign = (m % 2 == 0) ? 1.0 : -1.0;
      fhat.values[k] = grid.step * sign * spectrum[bin];
    }
    out.push_back(std::move(fhat));
  }
  return out;
}

std::vector<int> epsilon_net(const std::vector<Signal>& members, Scalar eps,
                             const NetMetric& metric, const Signal* window,
                             const TFGrid* tf_grid) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon_net: epsilon must be positive");
  std::vector<int> net;
  for (size_t i = 0; i < members.size(); ++i) {
    bool separated = true;
    for (int j : net)
      if (signal_distance(members[i], members[j], metric, window, tf_grid) < eps) {
        separated = false;
        break;
      }
    if (separated) net.push_back(static_cast<int>(i));
  }
  return net;
}

std::vector<int> epsilon_net(const std::vector<EntireFn>& members, Scalar eps,
                             const FockGrid& grid) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon_net: epsilon must be positive");
  auto distance = [&](const EntireFn& F, const EntireFn& G) {
    Eigen::Index n = std::max(F.coeffs.size(), G.coeffs.size());
    EntireFn diff;
    diff.coeffs = ComplexVec::Zero(n);
    diff.coeffs.head(F.coeffs.size()) = F.coeffs;
    diff.coeffs.head(G.coeffs.size()) -= G.coeffs;
    return fock_norm(diff, 2, grid);
  };
  std::vector<int> net;
  for (size_t i = 0; i < members.size(); ++i) {
    bool separated = true;
    for (int j : net)
      if (distance(members[i], members[j]) < eps) {
        separated = false;
        break;
      }
    if (separated) net.push_back(static_cast<int>(i));
  }
  return net;
}

TightnessReport diagnose(const FamilySpec& family, const DiagnoseConfig& config) {
  if (!(config.epsilon0 > 0)) throw std::invalid_argument("diagnose: epsilon0 must be positive");
  TightnessReport rep;
  rep.label = family.label;
  rep.transform = transform_name(config.transform);
  rep.radii = config.region.radii;
  rep.epsilon0 = config.epsilon0;

  std::vector<CoefField> fields = family_fields(family, config);
  rep.profile = tightness_profile(fields, config.norm, config.region);
  std::optional<Scalar> tr = tight_radius(rep.radii, rep.profile, config.epsilon0);
  rep.tight = tr.has_value();
  rep.tight_radius_value = tr.value_or(0);

  if (config.transform == DiagnoseConfig::Transform::fock) {
    rep.net_metric.push_back("fock_l2");
    rep.net_size.push_back(
        static_cast<int>(epsilon_net(family.fock_members, config.net_epsilon, config.fock_grid)
                             .size()));
  } else {
    std::vector<Signal> signals = family_signals(family, config.time_grid);
    auto to_vec = [](const RealVec& v) { return std::vector<Scalar>(v.begin(), v.end()); };
    rep.deltas = config.deltas;
    rep.equicontinuity = to_vec(weil_equicontinuity(signals, config.weil_p, config.deltas));
    rep.weil_radii = config.weil_radii;
    rep.spatial_tail = to_vec(weil_tightness(signals, config.weil_p, config.weil_radii));
    rep.spectral_tail =
        to_vec(weil_tightness(spectral_family(signals), config.weil_p, config.weil_radii));
    rep.has_weil = true;
    auto passes = [&](const std::vector<Scalar>& table) {
      for (Scalar value : table)
        if (value < config.epsilon0) return true;
      return false;
    };
    rep.weil_spatial_ok = passes(rep.spatial_tail);
    rep.weil_spectral_ok = passes(rep.spectral_tail);
    rep.weil_ok = rep.weil_spatial_ok && rep.weil_spectral_ok;
    rep.flags_agree = rep.tight == rep.weil_ok;

    rep.net_metric.push_back("l2");
    rep.net_size.push_back(
        static_cast<int>(epsilon_net(signals, config.net_epsilon, NetMetric::l2()).size()));
    if (config.transform == DiagnoseConfig::Transform::stft) {
      Scalar a = config.norm.weight.kind == WeightSpec::Kind::tf_polynomial ? config.norm.weight.a
                                                                            : 0.0;
      Signal w = family_window(family, config);
      NetMetric metric = NetMetric::modulation(config.norm.p, config.norm.q, a);
      rep.net_metric.push_back("modulation");
      rep.net_size.push_back(static_cast<int>(
          epsilon_net(signals, config.net_epsilon, metric, &w, &config.tf_grid).size()));
    }
  }
  rep.net_small = true;
  for (int size : rep.net_size) rep.net_small = rep.net_small && size <= config.net_bound;
  return rep;
}

void write_report_json(const TightnessReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_report_json: cannot open " + path);
  out << "{\n";
  out << "  \"label\": \"" << json_escape(report.label) << "\",\n";
  out << "  \"transform\": \"" << json_escape(report.transform) << "\",\n";
  out << "  \"epsilon0\": " << format_scalar(report.epsilon0) << ",\n";
  write_pair_table(out, "profile", report.radii, report.profile);
  out << ",\n";
  out << "  \"tight_radius\": ";
  if (report.tight)
    out << format_scalar(report.tight_radius_value);
  else
    out << "null";
  out << ",\n";
  if (report.has_weil) {
    write_pair_table(out, "equicontinuity", report.deltas, report.equicontinuity);
    out << ",\n";
    write_pair_table(out, "weil_spatial", report.weil_radii, report.spatial_tail);
    out << ",\n";
    write_pair_table(out, "weil_spectral", report.weil_radii, report.spectral_tail);
    out << ",\n";
  }
  out << "  \"nets\": [";
  for (size_t i = 0; i < report.net_metric.size(); ++i) {
    if (i) out << ", ";
    out << "{\"metric\": \"" << json_escape(report.net_metric[i])
        << "\", \"size\": " << report.net_size[i] << "}";
  }
  out << "],\n";
  out << "  \"flags\": {\n";
  out << "    \"stft_tight\": " << (report.tight ? "true" : "false") << ",\n";
  out << "    \"weil_spatial_ok\": "
      << (report.has_weil ? (report.weil_spatial_ok ? "true" : "false") : "null") << ",\n";
  out << "    \"weil_spectral_ok\": "
      << (report.has_weil ? (report.weil_spectral_ok ? "true" : "false") : "null") << ",\n";
  out << "    \"weil_ok\": " << (report.has_weil ? (report.weil_ok ? "true" : "false") : "null")
      << ",\n";
  out << "    \"net_small\": " << (report.net_small ? "true" : "false") << ",\n";
  out << "    \"agree\": " << (report.has_weil ? (report.flags_agree ? "true" : "false") : "null")
      << "\n";
  out << "  }\n";
  out << "}\n";
  if (!out) throw std::runtime_error("write_report_json: write failed for " + path);
}

void write_profile_csv(const TightnessReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_profile_csv: cannot open " + path);
  out << "r,eps\n";
  for (size_t k = 0; k < report.radii.size(); ++k)
    out << format_scalar(report.radii[k]) << "," << format_scalar(report.profile[k]) << "\n";
  if (!out) throw std::runtime_error("write_profile_csv: write failed for " + path);
}

}  // namespace tfc
