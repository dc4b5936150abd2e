#pragma once

#include <optional>

#include "tfc/bargmann.hpp"
#include "tfc/norms.hpp"

namespace tfc {

// Nested family of compact regions indexed by a strictly increasing radius
// list. Membership is closed: a point on the boundary counts as inside.
struct RegionFamily {
  enum class Kind { tf_ball, tf_box, scale_window, fock_disk, time_interval };

  Kind kind = Kind::tf_ball;
  std::vector<Scalar> radii;

  RegionFamily() = default;
  RegionFamily(Kind kind_, std::vector<Scalar> radii_);
};

// Finite function family plus the analysis window. Signal families fill
// members; Fock families fill fock_members.
struct FamilySpec {
  std::string label;
  std::vector<SignalSpec> members;
  std::vector<EntireFn> fock_members;
  SignalSpec window = SignalSpec::gaussian();
  bool normalize_members = false;
  bool normalize_window = false;  // L2 for stft runs, admissibility for cwt runs
};

// Distance used by the greedy net: plain L2, or a modulation norm of the
// difference.
struct NetMetric {
  enum class Kind { l2, modulation };

  Kind kind = Kind::l2;
  Scalar p = 2;
  Scalar q = 2;
  Scalar a = 0;

  static NetMetric l2();
  static NetMetric modulation(Scalar p, Scalar q, Scalar a);
};

struct DiagnoseConfig {
  enum class Transform { stft, cwt, fock };

  Transform transform = Transform::stft;
  TimeGrid time_grid;
  TFGrid tf_grid;
  ScaleGrid scale_grid;
  FockGrid fock_grid;
  NormSpec norm;
  RegionFamily region;
  Scalar epsilon0 = 1e-2;
  std::vector<Scalar> deltas;      // equicontinuity offsets, time-lattice points
  std::vector<Scalar> weil_radii;  // spatial / spectral tail radii
  Scalar weil_p = 2;
  Scalar net_epsilon = 0.5;
  int net_bound = 8;
};

struct TightnessReport {
  std::string label;
  std::string transform;

  std::vector<Scalar> radii;
  std::vector<Scalar> profile;  // eps(r) = sup over members of the tail norm
  Scalar epsilon0 = 0;
  bool tight = false;
  Scalar tight_radius_value = 0;  // meaningful only when tight

  std::vector<Scalar> deltas;
  std::vector<Scalar> equicontinuity;  // raw lattice translation moduli
  std::vector<Scalar> weil_radii;
  std::vector<Scalar> spatial_tail;
  std::vector<Scalar> spectral_tail;
  bool has_weil = false;  // false for Fock families
  bool weil_spatial_ok = false;
  bool weil_spectral_ok = false;
  bool weil_ok = false;

  std::vector<std::string> net_metric;
  std::vector<int> net_size;
  bool net_small = false;

  bool flags_agree = false;  // tight == weil_ok, meaningful only when has_weil
};

// mixed_norm of C with every cell whose center lies inside the closed region
// of radius r zeroed.
Scalar tail_norm(const CoefField& C, const NormSpec& spec, const RegionFamily& region, Scalar r);

// Member signals on the grid, normalized per the family flags.
std::vector<Signal> family_signals(const FamilySpec& family, const TimeGrid& grid);

// One coefficient field per member under the configured transform.
std::vector<CoefField> family_fields(const FamilySpec& family, const DiagnoseConfig& config);

// eps(r) = max over fields of tail_norm(field, spec, region, r), one entry
// per region radius.
std::vector<Scalar> tightness_profile(const std::vector<CoefField>& fields, const NormSpec& spec,
                                      const RegionFamily& region);

// Smallest listed radius with profile < eps (strict); nullopt when none.
std::optional<Scalar> tight_radius(const std::vector<Scalar>& radii,
                                   const std::vector<Scalar>& profile, Scalar eps);

// For each delta: max over members and over lattice shifts |h| <= delta of
// the Lp distance between the shifted and the original samples.
RealVec weil_equicontinuity(const std::vector<Signal>& members, Scalar p,
                            const std::vector<Scalar>& deltas);

// For each radius: max over members of the Lp norm of the samples outside
// [-r, r].
RealVec weil_tightness(const std::vector<Signal>& members, Scalar p,
                       const std::vector<Scalar>& radii);

// Spectra as signals on the dual grid (half_width 1/(2 step), step
// 1/(2 half_width)), for spectral-tightness tables.
std::vector<Signal> spectral_family(const std::vector<Signal>& members);

// Greedy cover in member index order: a member joins the net iff its
// distance to every current net member is >= eps. The modulation metric
// needs window and tf_grid; the l2 metric ignores them.
std::vector<int> epsilon_net(const std::vector<Signal>& members, Scalar eps,
                             const NetMetric& metric, const Signal* window = nullptr,
                             const TFGrid* tf_grid = nullptr);
std::vector<int> epsilon_net(const std::vector<EntireFn>& members, Scalar eps,
                             const FockGrid& grid);

// Full diagnostic: profile, tight radius at epsilon0, Weil tables (signal
// families only), net sizes, and the verdict flags.
TightnessReport diagnose(const FamilySpec& family, const DiagnoseConfig& config);

void write_report_json(const TightnessReport& report, const std::string& path);
void write_profile_csv(const TightnessReport& report, const std::string& path);

}  // namespace tfc
