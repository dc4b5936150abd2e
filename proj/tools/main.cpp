#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfc/tightness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tfc;

namespace {

// Config-level failure that can name the offending key.
struct config_error : std::invalid_argument {
  std::string key;

  config_error(std::string key_, const std::string& message)
      : std::invalid_argument("config key \"" + key_ + "\": " + message), key(std::move(key_)) {}
};

std::string join_key(const std::string& context, const std::string& key) {
  return context.empty() ? key : context + "." + key;
}

void check_keys(const json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw config_error(join_key(context, item.key()), "unknown key");
}

const json& require(const json& obj, const std::string& context, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error(join_key(context, key), "missing");
  return *it;
}

Scalar num_at(const json& obj, const std::string& context, const std::string& key) {
  const json& v = require(obj, context, key);
  if (!v.is_number()) throw config_error(join_key(context, key), "must be a number");
  return v.get<Scalar>();
}

Scalar num_or(const json& obj, const std::string& context, const std::string& key, Scalar dflt) {
  if (!obj.contains(key)) return dflt;
  return num_at(obj, context, key);
}

int int_at(const json& obj, const std::string& context, const std::string& key) {
  const json& v = require(obj, context, key);
  if (!v.is_number_integer()) throw config_error(join_key(context, key), "must be an integer");
  return v.get<int>();
}

int int_or(const json& obj, const std::string& context, const std::string& key, int dflt) {
  if (!obj.contains(key)) return dflt;
  return int_at(obj, context, key);
}

std::string str_at(const json& obj, const std::string& context, const std::string& key) {
  const json& v = require(obj, context, key);
  if (!v.is_string()) throw config_error(join_key(context, key), "must be a string");
  return v.get<std::string>();
}

bool bool_or(const json& obj, const std::string& context, const std::string& key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw config_error(join_key(context, key), "must be a boolean");
  return v.get<bool>();
}

std::vector<Scalar> num_list_at(const json& obj, const std::string& context,
                                const std::string& key) {
  const json& v = require(obj, context, key);
  if (!v.is_array()) throw config_error(join_key(context, key), "must be an array of numbers");
  std::vector<Scalar> out;
  for (const json& e : v) {
    if (!e.is_number()) throw config_error(join_key(context, key), "must be an array of numbers");
    out.push_back(e.get<Scalar>());
  }
  return out;
}

SignalSpec parse_signal(const json& obj, const std::string& context, const fs::path& base_dir) {
  if (!obj.is_object()) throw config_error(context, "must be an object");
  check_keys(obj, context, {"label", "kind", "order", "amount", "base", "file"});
  std::string kind = str_at(obj, context, "kind");
  if (kind == "gaussian") return SignalSpec::gaussian();
  if (kind == "mexican_hat") return SignalSpec::mexican_hat();
  if (kind == "hermite") return SignalSpec::hermite(int_at(obj, context, "order"));
  if (kind == "samples") {
    fs::path file = str_at(obj, context, "file");
    if (file.is_relative()) file = base_dir / file;
    return SignalSpec::samples(file.string());
  }
  if (kind == "translate" || kind == "modulate" || kind == "dilate") {
    Scalar amount = num_at(obj, context, "amount");
    SignalSpec base =
        parse_signal(require(obj, context, "base"), join_key(context, "base"), base_dir);
    if (kind == "translate") return SignalSpec::translate(base, amount);
    if (kind == "modulate") return SignalSpec::modulate(base, amount);
    return SignalSpec::dilate(base, amount);
  }
  throw config_error(join_key(context, "kind"), "unknown signal kind \"" + kind + "\"");
}

EntireFn parse_entire(const json& obj, const std::string& context) {
  check_keys(obj, context, {"label", "coeffs"});
  const json& arr = require(obj, context, "coeffs");
  std::string key = join_key(context, "coeffs");
  if (!arr.is_array() || arr.empty())
    throw config_error(key, "must be a non-empty array of numbers or [re, im] pairs");
  EntireFn F;
  F.coeffs.resize(static_cast<Eigen::Index>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (e.is_number())
      F.coeffs[static_cast<Eigen::Index>(i)] = Complex(e.get<Scalar>(), 0.0);
    else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      F.coeffs[static_cast<Eigen::Index>(i)] = Complex(e[0].get<Scalar>(), e[1].get<Scalar>());
    else
      throw config_error(key, "entries must be numbers or [re, im] pairs");
  }
  return F;
}

WeightSpec parse_weight(const json& obj, const std::string& context, Scalar norm_q) {
  if (!obj.is_object()) throw config_error(context, "must be an object");
  check_keys(obj, context, {"kind", "a", "alpha"});
  std::string kind = str_at(obj, context, "kind");
  if (kind == "constant") return WeightSpec::constant();
  if (kind == "tf_polynomial") return WeightSpec::tf_polynomial(num_at(obj, context, "a"));
  if (kind == "scale_power")
    return WeightSpec::scale_power(num_at(obj, context, "alpha"), norm_q);
  throw config_error(join_key(context, "kind"), "unknown weight kind \"" + kind + "\"");
}

NormSpec parse_norm(const json& obj, const std::string& context) {
  if (!obj.is_object()) throw config_error(context, "must be an object");
  check_keys(obj, context, {"p", "q", "weight", "inner_axis"});
  Scalar p = num_at(obj, context, "p");
  Scalar q = num_at(obj, context, "q");
  if (obj.contains("inner_axis") && str_at(obj, context, "inner_axis") != "x")
    throw config_error(join_key(context, "inner_axis"), "the inner axis is fixed to \"x\"");
  WeightSpec weight = obj.contains("weight")
                          ? parse_weight(obj.at("weight"), join_key(context, "weight"), q)
                          : WeightSpec::constant();
  return NormSpec(p, q, weight);
}

RegionFamily parse_region(const json& obj, const std::string& context) {
  if (!obj.is_object()) throw config_error(context, "must be an object");
  check_keys(obj, context, {"kind", "radii"});
  std::string kind = str_at(obj, context, "kind");
  RegionFamily::Kind k;
  if (kind == "tf_ball")
    k = RegionFamily::Kind::tf_ball;
  else if (kind == "tf_box")
    k = RegionFamily::Kind::tf_box;
  else if (kind == "scale_window")
    k = RegionFamily::Kind::scale_window;
  else if (kind == "fock_disk")
    k = RegionFamily::Kind::fock_disk;
  else if (kind == "time_interval")
    k = RegionFamily::Kind::time_interval;
  else
    throw config_error(join_key(context, "kind"), "unknown region kind \"" + kind + "\"");
  return RegionFamily(k, num_list_at(obj, context, "radii"));
}

struct RunConfig {
  DiagnoseConfig diag;
  FamilySpec family;
  std::vector<std::string> member_labels;
  bool has_time_grid = false;
  bool has_tf_grid = false;
  bool has_scale_grid = false;
  bool has_fock_grid = false;
  bool has_region = false;
  bool has_deltas = false;
  bool has_weil_radii = false;
};

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("(file)", "cannot open config " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error("(json)", e.what());
  }
  if (!root.is_object()) throw config_error("(json)", "top level must be an object");
  check_keys(root, "",
             {"time_grid", "tf_grid", "scale_grid", "fock_grid", "transform", "window",
              "normalize_window", "family", "norm", "region", "epsilon0", "deltas", "weil_radii",
              "weil_p", "net_epsilon", "net_bound"});

  RunConfig cfg;
  fs::path base_dir = path.parent_path();

  std::string transform = str_at(root, "", "transform");
  if (transform == "stft")
    cfg.diag.transform = DiagnoseConfig::Transform::stft;
  else if (transform == "cwt")
    cfg.diag.transform = DiagnoseConfig::Transform::cwt;
  else if (transform == "fock")
    cfg.diag.transform = DiagnoseConfig::Transform::fock;
  else
    throw config_error("transform", "unknown transform \"" + transform + "\"");

  if (root.contains("time_grid")) {
    const json& g = root.at("time_grid");
    check_keys(g, "time_grid", {"half_width", "step"});
    cfg.diag.time_grid = TimeGrid(num_at(g, "time_grid", "half_width"),
                                  num_at(g, "time_grid", "step"));
    cfg.has_time_grid = true;
  }
  if (root.contains("tf_grid")) {
    const json& g = root.at("tf_grid");
    check_keys(g, "tf_grid", {"x_half_width", "x_step", "w_half_width", "w_step"});
    cfg.diag.tf_grid =
        TFGrid(num_at(g, "tf_grid", "x_half_width"), num_at(g, "tf_grid", "x_step"),
               num_at(g, "tf_grid", "w_half_width"), num_at(g, "tf_grid", "w_step"));
    cfg.has_tf_grid = true;
  }
  if (root.contains("scale_grid")) {
    const json& g = root.at("scale_grid");
    check_keys(g, "scale_grid", {"x_half_width", "x_step", "s_min", "s_max", "s_count"});
    cfg.diag.scale_grid =
        ScaleGrid(num_at(g, "scale_grid", "x_half_width"), num_at(g, "scale_grid", "x_step"),
                  num_at(g, "scale_grid", "s_min"), num_at(g, "scale_grid", "s_max"),
                  int_at(g, "scale_grid", "s_count"));
    cfg.has_scale_grid = true;
  }
  if (root.contains("fock_grid")) {
    const json& g = root.at("fock_grid");
    check_keys(g, "fock_grid", {"r_max", "r_count", "theta_count"});
    cfg.diag.fock_grid = FockGrid(num_at(g, "fock_grid", "r_max"), int_at(g, "fock_grid", "r_count"),
                                  int_at(g, "fock_grid", "theta_count"));
    cfg.has_fock_grid = true;
  }

  const json& fam = require(root, "", "family");
  if (!fam.is_object()) throw config_error("family", "must be an object");
  check_keys(fam, "family", {"label", "normalize_members", "members", "fock_members"});
  cfg.family.label = fam.contains("label") ? str_at(fam, "family", "label") : "family";
  cfg.family.normalize_members = bool_or(fam, "family", "normalize_members", false);
  if (fam.contains("members")) {
    const json& members = fam.at("members");
    if (!members.is_array()) throw config_error("family.members", "must be an array");
    for (size_t i = 0; i < members.size(); ++i) {
      std::string context = "family.members[" + std::to_string(i) + "]";
      cfg.family.members.push_back(parse_signal(members[i], context, base_dir));
      cfg.member_labels.push_back(members[i].contains("label")
                                      ? str_at(members[i], context, "label")
                                      : "member" + std::to_string(i));
    }
  }
  if (fam.contains("fock_members")) {
    const json& members = fam.at("fock_members");
    if (!members.is_array()) throw config_error("family.fock_members", "must be an array");
    for (size_t i = 0; i < members.size(); ++i) {
      std::string context = "family.fock_members[" + std::to_string(i) + "]";
      if (!members[i].is_object()) throw config_error(context, "must be an object");
      cfg.family.fock_members.push_back(parse_entire(members[i], context));
      cfg.member_labels.push_back(members[i].contains("label")
                                      ? str_at(members[i], context, "label")
                                      : "member" + std::to_string(i));
    }
  }
  std::set<std::string> seen;
  for (const std::string& label : cfg.member_labels)
    if (!seen.insert(label).second)
      throw config_error("family.members", "duplicate member label \"" + label + "\"");

  if (root.contains("window"))
    cfg.family.window = parse_signal(root.at("window"), "window", base_dir);
  cfg.family.normalize_window = bool_or(root, "", "normalize_window", false);

  if (root.contains("norm")) cfg.diag.norm = parse_norm(root.at("norm"), "norm");
  if (root.contains("region")) {
    cfg.diag.region = parse_region(root.at("region"), "region");
    cfg.has_region = true;
  }
  cfg.diag.epsilon0 = num_or(root, "", "epsilon0", 1e-2);
  if (root.contains("deltas")) {
    cfg.diag.deltas = num_list_at(root, "", "deltas");
    cfg.has_deltas = true;
  }
  if (root.contains("weil_radii")) {
    cfg.diag.weil_radii = num_list_at(root, "", "weil_radii");
    cfg.has_weil_radii = true;
  }
  cfg.diag.weil_p = num_or(root, "", "weil_p", 2.0);
  cfg.diag.net_epsilon = num_or(root, "", "net_epsilon", 0.5);
  cfg.diag.net_bound = int_or(root, "", "net_bound", 8);
  return cfg;
}

void need(bool present, const std::string& key, const std::string& why) {
  if (!present) throw config_error(key, "required " + why);
}

void check_grids(const RunConfig& cfg) {
  bool fock = cfg.diag.transform == DiagnoseConfig::Transform::fock;
  if (fock) {
    need(cfg.has_fock_grid, "fock_grid", "for fock runs");
    need(!cfg.family.fock_members.empty(), "family.fock_members", "for fock runs");
  } else {
    need(cfg.has_time_grid, "time_grid", "for signal-domain runs");
    if (cfg.diag.transform == DiagnoseConfig::Transform::stft)
      need(cfg.has_tf_grid, "tf_grid", "for stft runs");
    else
      need(cfg.has_scale_grid, "scale_grid", "for cwt runs");
  }
}

Signal run_window(const RunConfig& cfg) {
  Signal w = make_signal(cfg.family.window, cfg.diag.time_grid);
  if (!cfg.family.normalize_window) return w;
  return cfg.diag.transform == DiagnoseConfig::Transform::cwt ? normalize_admissible(w)
                                                              : normalize_l2(w);
}

int cmd_transform(const RunConfig& cfg, const fs::path& out_dir) {
  check_grids(cfg);
  if (cfg.diag.transform == DiagnoseConfig::Transform::fock) {
    for (size_t i = 0; i < cfg.family.fock_members.size(); ++i) {
      fs::path out = out_dir / (cfg.member_labels[i] + ".csv");
      write_field_csv(out.string(), fock_field(cfg.family.fock_members[i], cfg.diag.fock_grid));
      std::cout << "wrote " << out.string() << "\n";
    }
    return 0;
  }
  Signal w = run_window(cfg);
  for (size_t i = 0; i < cfg.family.members.size(); ++i) {
    Signal f = make_signal(cfg.family.members[i], cfg.diag.time_grid);
    if (cfg.family.normalize_members) f = normalize_l2(f);
    CoefField C = cfg.diag.transform == DiagnoseConfig::Transform::stft
                      ? stft(f, w, cfg.diag.tf_grid)
                      : cwt(f, w, cfg.diag.scale_grid);
    fs::path out = out_dir / (cfg.member_labels[i] + ".csv");
    write_field_csv(out.string(), C);
    std::cout << "wrote " << out.string() << "\n";
  }
  return 0;
}

int cmd_norm(const RunConfig& cfg, const fs::path& out_dir) {
  check_grids(cfg);
  const NormSpec& spec = cfg.diag.norm;
  std::vector<std::pair<std::string, Scalar>> table;
  if (cfg.diag.transform == DiagnoseConfig::Transform::fock) {
    if (spec.weight.kind != WeightSpec::Kind::constant)
      throw config_error("norm.weight", "fock norms support only the constant weight");
    if (spec.p != spec.q) throw config_error("norm", "fock norms need p == q");
    for (size_t i = 0; i < cfg.family.fock_members.size(); ++i)
      table.emplace_back(cfg.member_labels[i],
                         fock_norm(cfg.family.fock_members[i], spec.p, cfg.diag.fock_grid));
  } else {
    Signal w = run_window(cfg);
    for (size_t i = 0; i < cfg.family.members.size(); ++i) {
      Signal f = make_signal(cfg.family.members[i], cfg.diag.time_grid);
      if (cfg.family.normalize_members) f = normalize_l2(f);
      Scalar value;
      if (cfg.diag.transform == DiagnoseConfig::Transform::stft) {
        Scalar a = spec.weight.kind == WeightSpec::Kind::tf_polynomial ? spec.weight.a : 0.0;
        if (spec.weight.kind == WeightSpec::Kind::scale_power)
          throw config_error("norm.weight", "scale_power weight needs a cwt run");
        value = modulation_norm(f, w, spec.p, spec.q, a, cfg.diag.tf_grid);
      } else if (spec.weight.kind == WeightSpec::Kind::scale_power) {
        value = besov_norm(f, w, spec.p, spec.q, spec.weight.alpha, cfg.diag.scale_grid);
      } else {
        value = mixed_norm(cwt(f, w, cfg.diag.scale_grid), spec);
      }
      table.emplace_back(cfg.member_labels[i], value);
    }
  }
  fs::path out = out_dir / "norms.json";
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out.string());
  os << "{\n  \"norms\": {";
  for (size_t i = 0; i < table.size(); ++i) {
    if (i) os << ",";
    os << "\n    \"" << table[i].first << "\": " << format_scalar(table[i].second);
  }
  os << (table.empty() ? "}" : "\n  }") << "\n}\n";
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int cmd_diagnose(RunConfig& cfg, const fs::path& out_dir) {
  check_grids(cfg);
  need(cfg.has_region, "region", "for diagnose runs");
  if (cfg.diag.transform != DiagnoseConfig::Transform::fock) {
    if (!cfg.has_deltas)
      cfg.diag.deltas = {cfg.diag.time_grid.step, 2 * cfg.diag.time_grid.step,
                         4 * cfg.diag.time_grid.step};
    if (!cfg.has_weil_radii) cfg.diag.weil_radii = cfg.diag.region.radii;
  }
  TightnessReport report = diagnose(cfg.family, cfg.diag);
  fs::path report_path = out_dir / "report.json";
  fs::path profile_path = out_dir / "profile.csv";
  write_report_json(report, report_path.string());
  write_profile_csv(report, profile_path.string());
  std::cout << "wrote " << report_path.string() << "\n";
  std::cout << "wrote " << profile_path.string() << "\n";
  return 0;
}

int fail_json(int code, const std::string& key, const std::string& message) {
  json err = {{"error", {{"exit", code}, {"message", message}}}};
  if (!key.empty()) err["error"]["key"] = key;
  std::cout << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency transforms, coefficient-field norms, and tightness diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string benchmark;
  std::string out_dir;
  int workers = 1;

  const std::set<std::string> benchmarks = {"hermite", "translates", "modulates", "dilates",
                                            "fock"};
  std::vector<CLI::App*> cmds;
  for (const char* name : {"transform", "norm", "diagnose"}) {
    CLI::App* cmd = app.add_subcommand(name);
    cmd->add_option("--config", config_path, "Path to a run config JSON file");
    cmd->add_option("--benchmark", benchmark,
                    "Built-in benchmark config: hermite|translates|modulates|dilates|fock");
    cmd->add_option("--out", out_dir, "Output directory")->required();
    cmd->add_option("--workers", workers, "Worker thread count")->check(CLI::PositiveNumber);
    cmds.push_back(cmd);
  }
  cmds[0]->description("Write one coefficient CSV per family member");
  cmds[1]->description("Write a norm table JSON keyed by member label");
  cmds[2]->description("Write a tightness report JSON and profile CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_json(2, "(args)", e.what());
  }

  try {
    fs::path config;
    if (!benchmark.empty()) {
      if (!config_path.empty())
        throw config_error("(args)", "--config and --benchmark are mutually exclusive");
      if (!benchmarks.count(benchmark))
        throw config_error("(args)", "unknown benchmark \"" + benchmark + "\"");
      const char* dir = std::getenv("TFC_CONFIG_DIR");
      config = fs::path(dir != nullptr ? dir : TFC_CONFIG_DIR) / (benchmark + ".json");
    } else if (!config_path.empty()) {
      config = config_path;
    } else {
      throw config_error("(args)", "one of --config or --benchmark is required");
    }

    set_worker_count(workers);
    RunConfig cfg = load_config(config);
    fs::create_directories(out_dir);

    if (app.got_subcommand("transform")) return cmd_transform(cfg, out_dir);
    if (app.got_subcommand("norm")) return cmd_norm(cfg, out_dir);
    return cmd_diagnose(cfg, out_dir);
  } catch (const config_error& e) {
    return fail_json(2, e.key, e.what());
  } catch (const numeric_error& e) {
    return fail_json(3, "", e.what());
  } catch (const std::invalid_argument& e) {
    return fail_json(2, "", e.what());
  } catch (const std::exception& e) {
    return fail_json(1, "", e.what());
  }
}
