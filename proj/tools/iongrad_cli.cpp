// Command-line surface of the iongrad library: every computation the library
// offers, as subcommands emitting deterministic CSV or JSON.
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iongrad/constants.hpp"
#include "iongrad/coupling.hpp"
#include "iongrad/crystal.hpp"
#include "iongrad/dynamics.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/halbach.hpp"
#include "iongrad/hyperfine.hpp"
#include "iongrad/pseudopotential.hpp"
#include "iongrad/spectrum.hpp"

using iongrad::Error;
using iongrad::ErrorKind;
using iongrad::Frequency;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Errors -> machine-readable stderr JSON + exit codes
// ---------------------------------------------------------------------------

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::regime: return "regime";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::capacity: return "capacity";
  }
  return "internal";
}

int kind_exit_code(ErrorKind kind) {
  return kind == ErrorKind::numerical ? 3 : 2;
}

void emit_error(const std::string& kind, const std::string& message) {
  ordered_json e;
  e["error"]["kind"] = kind;
  e["error"]["message"] = message;
  std::fputs((e.dump() + "\n").c_str(), stderr);
}

// ---------------------------------------------------------------------------
// Unit-suffixed value parsing
// ---------------------------------------------------------------------------

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double parse_plain_number(const std::string& text, const std::string& what) {
  std::string s = trim(text);
  if (s.empty()) iongrad::throw_validation("empty " + what + " value");
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || !std::isfinite(v))
    iongrad::throw_validation("malformed " + what + " value '" + text + "'");
  return v;
}

// number followed by an optional unit suffix; bare numbers are in base units.
double parse_suffixed(const std::string& text,
                      const std::vector<std::pair<std::string, double>>& suffixes,
                      const std::string& what) {
  std::string s = trim(text);
  std::string low = lowercase(s);
  for (const auto& [suffix, scale] : suffixes) {
    if (low.size() > suffix.size() &&
        low.compare(low.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return parse_plain_number(s.substr(0, s.size() - suffix.size()), what) * scale;
    }
  }
  return parse_plain_number(s, what);
}

Frequency parse_frequency(const std::string& text) {
  // longest suffixes first so "khz" is not read as "hz"
  double hz = parse_suffixed(
      text, {{"ghz", 1e9}, {"mhz", 1e6}, {"khz", 1e3}, {"hz", 1.0}}, "frequency");
  if (hz < 0.0) iongrad::throw_validation("frequency must be non-negative: '" + text + "'");
  return Frequency::hz(hz);
}

double parse_length(const std::string& text) {
  return parse_suffixed(
      text, {{"um", 1e-6}, {"nm", 1e-9}, {"mm", 1e-3}, {"cm", 1e-2}, {"m", 1.0}},
      "length");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) iongrad::throw_validation("empty entry in list '" + text + "'");
    try {
      size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      iongrad::throw_validation("malformed integer '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter resolution: command-line flag > config-file key > built-in default
// ---------------------------------------------------------------------------

struct SubContext {
  CLI::App* app = nullptr;
  // node-based map: stable addresses for CLI11 string bindings
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> defaults;
  std::set<std::string> flag_names;
};

void add_option(SubContext& ctx, const std::string& name, const std::string& def,
                const std::string& help) {
  ctx.defaults[name] = def;
  auto& slot = ctx.storage[name];
  ctx.options[name] = ctx.app->add_option("--" + name, slot, help)
                          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_flag(SubContext& ctx, const std::string& name, const std::string& help) {
  ctx.flag_names.insert(name);
  ctx.options[name] = ctx.app->add_flag("--" + name, help);
}

void add_common(SubContext& ctx) {
  add_option(ctx, "format", "csv", "output format: csv or json");
  add_option(ctx, "output", "", "output file path (default: stdout)");
  add_option(ctx, "config", "", "JSON config file; flags override its keys");
}

class Params {
 public:
  explicit Params(SubContext& ctx) : ctx_(ctx) {
    std::string config_path;
    if (ctx_.options.at("config")->count() > 0) config_path = ctx_.storage.at("config");
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) iongrad::throw_validation("cannot open config file '" + config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const std::exception& e) {
      iongrad::throw_validation("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) iongrad::throw_validation("config file must hold a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      if (key == "config" || ctx_.options.find(key) == ctx_.options.end())
        iongrad::throw_validation("unknown config key '" + key + "'");
      if (ctx_.flag_names.count(key)) {
        if (!it.value().is_boolean())
          iongrad::throw_validation("config key '" + key + "' must be a boolean");
        config_flags_[key] = it.value().get<bool>();
      } else {
        if (it.value().is_string())
          config_values_[key] = it.value().get<std::string>();
        else if (it.value().is_number() || it.value().is_boolean())
          config_values_[key] = it.value().dump();
        else
          iongrad::throw_validation("config key '" + key + "' must be a scalar");
      }
    }
  }

  std::string str(const std::string& name) const {
    const CLI::Option* opt = ctx_.options.at(name);
    if (opt->count() > 0) return ctx_.storage.at(name);
    auto it = config_values_.find(name);
    if (it != config_values_.end()) return it->second;
    return ctx_.defaults.at(name);
  }

  bool flag(const std::string& name) const {
    if (ctx_.options.at(name)->count() > 0) return true;
    auto it = config_flags_.find(name);
    return it != config_flags_.end() && it->second;
  }

  double number(const std::string& name) const { return parse_plain_number(str(name), name); }
  long integer(const std::string& name) const {
    double v = number(name);
    long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
      iongrad::throw_validation("'" + name + "' must be an integer");
    return n;
  }
  Frequency frequency(const std::string& name) const { return parse_frequency(str(name)); }
  double length(const std::string& name) const { return parse_length(str(name)); }
  std::vector<int> int_list(const std::string& name) const { return parse_int_list(str(name)); }

 private:
  SubContext& ctx_;
  std::map<std::string, std::string> config_values_;
  std::map<std::string, bool> config_flags_;
};

// ---------------------------------------------------------------------------
// Output writers (deterministic: fixed %.12g for CSV numbers)
// ---------------------------------------------------------------------------

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_double(v.get<double>());
  return v.dump();
}

void emit_table(const Params& p, const ordered_json& meta,
                const std::vector<std::string>& columns,
                const std::vector<ordered_json>& rows) {
  std::string format = p.str("format");
  if (format != "csv" && format != "json")
    iongrad::throw_validation("format must be 'csv' or 'json'");

  std::string text;
  if (format == "json") {
    ordered_json doc;
    doc["meta"] = meta;
    doc["rows"] = ordered_json::array();
    for (const ordered_json& r : rows) doc["rows"].push_back(r);
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# meta: " << meta.dump() << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const ordered_json& r : rows) {
      for (size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << csv_cell(r.at(columns[i]));
      os << "\n";
    }
    text = os.str();
  }

  std::string path = p.str("output");
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) iongrad::throw_validation("cannot open output file '" + path + "'");
    out << text;
  }
}

ordered_json base_meta(const std::string& command) {
  ordered_json meta;
  meta["tool"] = "iongrad";
  meta["version"] = iongrad::version;
  meta["command"] = command;
  return meta;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_crystal(SubContext& ctx) {
  Params p(ctx);
  int n = static_cast<int>(p.integer("n"));
  Frequency nu_z = p.frequency("nu-z");
  iongrad::IonSpecies species = iongrad::yb171();

  iongrad::CrystalConfiguration crystal = iongrad::equilibrium_positions(n);
  iongrad::NormalModes modes = iongrad::normal_modes(crystal);
  Eigen::VectorXd z = iongrad::physical_positions(crystal, species, nu_z);

  ordered_json meta = base_meta("crystal");
  meta["inputs"] = {{"n", n}, {"nu_z_Hz", nu_z.in_hz()}, {"species", species.name}};
  meta["length_scale_um"] = iongrad::ion_length_scale(species, nu_z) * 1e6;
  meta["dz_min_um"] = iongrad::min_spacing(species, nu_z, n) * 1e6;
  meta["residual"] = crystal.residual;
  meta["iterations"] = crystal.iterations;

  std::vector<std::string> columns = {"ion", "z_um", "u", "mu"};
  for (int l = 1; l <= n; ++l) columns.push_back("d_mode" + std::to_string(l));
  std::vector<ordered_json> rows;
  for (int i = 0; i < n; ++i) {
    ordered_json row;
    row["ion"] = i + 1;
    row["z_um"] = z[i] * 1e6;
    row["u"] = crystal.positions[i];
    row["mu"] = modes.mu[i];
    for (int l = 0; l < n; ++l) row["d_mode" + std::to_string(l + 1)] = modes.d(i, l);
    rows.push_back(row);
  }
  emit_table(p, meta, columns, rows);
  return 0;
}

int run_table1(SubContext& ctx) {
  Params p(ctx);
  double tolerance = p.number("tolerance");
  iongrad::require(tolerance > 0.0, "tolerance must be positive");
  bool check = p.flag("check");

  std::vector<iongrad::CouplingBenchmarkRow> bench =
      iongrad::coupling_benchmark(iongrad::yb171());

  double max_dev = 0.0;
  std::vector<ordered_json> rows;
  for (const auto& r : bench) {
    double dz_dev = r.dz_um / r.ref_dz_um - 1.0;
    double j_dev = r.j_khz / r.ref_j_khz - 1.0;
    double t_dev = r.t_ms / r.ref_t_ms - 1.0;
    for (double d : {dz_dev, j_dev, t_dev}) max_dev = std::max(max_dev, std::abs(d));
    ordered_json row;
    row["nu_z_kHz"] = r.nu_z_khz;
    row["n_ions"] = r.n_ions;
    row["b_T_per_m"] = r.gradient;
    row["dz_um"] = r.dz_um;
    row["dz_ref_um"] = r.ref_dz_um;
    row["dz_rel_dev"] = dz_dev;
    row["J_kHz"] = r.j_khz;
    row["J_ref_kHz"] = r.ref_j_khz;
    row["J_rel_dev"] = j_dev;
    row["T_ms"] = r.t_ms;
    row["T_ref_ms"] = r.ref_t_ms;
    row["T_rel_dev"] = t_dev;
    rows.push_back(row);
  }

  ordered_json meta = base_meta("table1");
  meta["inputs"] = {{"tolerance", tolerance}, {"check", check}};
  meta["max_abs_rel_dev"] = max_dev;

  emit_table(p, meta,
             {"nu_z_kHz", "n_ions", "b_T_per_m", "dz_um", "dz_ref_um", "dz_rel_dev",
              "J_kHz", "J_ref_kHz", "J_rel_dev", "T_ms", "T_ref_ms", "T_rel_dev"},
             rows);

  if (check && max_dev > tolerance) {
    emit_error("tolerance", "worst relative deviation " + fmt_double(max_dev) +
                                " exceeds tolerance " + fmt_double(tolerance));
    return 4;
  }
  return 0;
}

iongrad::SpinModel parse_model(const std::string& name) {
  if (name == "exact") return iongrad::SpinModel::exact;
  if (name == "natural") return iongrad::SpinModel::natural;
  if (name == "matched") return iongrad::SpinModel::matched;
  if (name == "fitted") return iongrad::SpinModel::fitted;
  iongrad::throw_validation("unknown model '" + name +
                            "' (expected exact|natural|matched|fitted)");
}

int run_levels(SubContext& ctx) {
  Params p(ctx);
  double b = p.number("b");
  iongrad::SpinModel model = parse_model(p.str("model"));
  iongrad::IonSpecies species = iongrad::yb171();

  iongrad::SingleIonHamiltonian h = iongrad::single_ion_hamiltonian(species, b, model);
  iongrad::HyperfineSpectrum s = iongrad::diagonalize(h);
  const double to_ghz = 1e-9 / iongrad::constants::two_pi;

  ordered_json meta = base_meta("levels");
  meta["inputs"] = {{"b_T", b}, {"model", p.str("model")}, {"species", species.name}};
  meta["mixing_angle_rad"] = s.mixing_angle;
  meta["cos_theta"] = std::cos(s.mixing_angle);
  meta["sin_theta"] = std::sin(s.mixing_angle);
  meta["leakage_probability"] = std::sin(s.mixing_angle) * std::sin(s.mixing_angle);

  // comma-free level names (CSV cells are never quoted)
  static const char* level_names[4] = {"uu", "ud", "du", "dd"};
  std::vector<ordered_json> rows;
  for (int k = 0; k < 4; ++k) {
    ordered_json row;
    row["kind"] = "level";
    row["name"] = level_names[k];
    row["value_GHz"] = s.energy[k] * to_ghz;
    rows.push_back(row);
  }
  const struct {
    const char* name;
    int upper, lower;
  } transitions[] = {
      {"nuclear_flip_mS_up", iongrad::basis_uu, iongrad::basis_ud},
      {"nuclear_flip_mS_down", iongrad::basis_dd, iongrad::basis_du},
      {"electron_flip_mI_up", iongrad::basis_uu, iongrad::basis_du},
      {"electron_flip_mI_down", iongrad::basis_ud, iongrad::basis_dd},
  };
  for (const auto& t : transitions) {
    ordered_json row;
    row["kind"] = "transition";
    row["name"] = t.name;
    row["value_GHz"] = (s.energy[t.upper] - s.energy[t.lower]) * to_ghz;
    rows.push_back(row);
  }
  emit_table(p, meta, {"kind", "name", "value_GHz"}, rows);
  return 0;
}

int run_fidelity(SubContext& ctx) {
  Params p(ctx);
  double b_min = p.number("b-min");
  double b_max = p.number("b-max");
  long steps = p.integer("steps");
  iongrad::require(steps >= 1, "steps must be at least 1");
  iongrad::require(b_max >= b_min, "b-max must be >= b-min");
  double rabi = 0.0;
  if (!p.str("rabi").empty()) rabi = parse_frequency(p.str("rabi")).rad_per_s();

  static const std::map<std::string, int> initials = {
      {"uu", iongrad::basis_uu}, {"ud", iongrad::basis_ud},
      {"du", iongrad::basis_du}, {"dd", iongrad::basis_dd}};
  auto init_it = initials.find(p.str("initial"));
  if (init_it == initials.end())
    iongrad::throw_validation("initial state must be one of uu|ud|du|dd");

  std::string model_name = p.str("model");
  std::vector<std::string> model_names;
  if (model_name == "both") {
    model_names = {"matched", "natural"};
  } else {
    parse_model(model_name);  // validation
    model_names = {model_name};
  }

  std::vector<double> b_fields;
  for (long k = 0; k < steps; ++k) {
    b_fields.push_back(steps == 1 ? b_min
                                  : b_min + (b_max - b_min) * static_cast<double>(k) /
                                                static_cast<double>(steps - 1));
  }

  iongrad::IonSpecies species = iongrad::yb171();
  ordered_json meta = base_meta("fidelity");
  meta["inputs"] = {{"b_min_T", b_min},   {"b_max_T", b_max},
                    {"steps", steps},     {"model", model_name},
                    {"initial", p.str("initial")},
                    {"rabi_Hz", rabi / iongrad::constants::two_pi}};

  std::vector<ordered_json> rows;
  for (const std::string& name : model_names) {
    std::vector<iongrad::FidelityPoint> curve = iongrad::cnot_fidelity_curve(
        species, b_fields, parse_model(name), rabi, init_it->second);
    for (const iongrad::FidelityPoint& pt : curve) {
      ordered_json row;
      row["B_T"] = pt.b_field;
      row["B_over_A"] = species.gamma_s * pt.b_field / species.hyperfine_a;
      row["model"] = name;
      row["C"] = pt.fidelity;
      rows.push_back(row);
    }
  }
  emit_table(p, meta, {"B_T", "B_over_A", "model", "C"}, rows);
  return 0;
}

int run_spectrum(SubContext& ctx) {
  Params p(ctx);
  iongrad::ChainConfig config;
  config.species = iongrad::yb171();
  config.n_ions = static_cast<int>(p.integer("n"));
  config.b0 = p.number("b0");
  config.gradient = p.number("b");
  config.nu_z = p.frequency("nu-z");
  config.active = p.int_list("active");
  config.passive_m_s = p.number("passive-ms");
  config.nuclear_m = p.number("nuclear-m");

  std::vector<iongrad::SpectralLine> full = iongrad::full_spectrum(config);
  std::vector<iongrad::SpectralLine> active = iongrad::active_spectrum(config);

  ordered_json meta = base_meta("spectrum");
  ordered_json active_list = ordered_json::array();
  for (int ion : config.active) active_list.push_back(ion);
  meta["inputs"] = {{"n", config.n_ions},
                    {"b0_T", config.b0},
                    {"b_T_per_m", config.gradient},
                    {"nu_z_Hz", config.nu_z.in_hz()},
                    {"active", active_list},
                    {"passive_m_s", config.passive_m_s},
                    {"nuclear_m", config.nuclear_m}};
  meta["addressing_separation_MHz"] =
      iongrad::addressing_separation(config) / iongrad::constants::two_pi * 1e-6;

  auto sigma_string = [](const std::vector<int>& sigma) {
    std::string s;
    for (int v : sigma) s += v > 0 ? '+' : (v < 0 ? '-' : '.');
    return s;
  };

  std::vector<ordered_json> rows;
  auto push_lines = [&](const char* list, const std::vector<iongrad::SpectralLine>& lines) {
    for (const iongrad::SpectralLine& line : lines) {
      ordered_json row;
      row["list"] = list;
      row["ion"] = line.ion;
      row["frequency_GHz"] = line.frequency / iongrad::constants::two_pi * 1e-9;
      row["weight"] = line.weight;
      row["conditioning"] = sigma_string(line.sigma);
      rows.push_back(row);
    }
  };
  push_lines("full", full);
  push_lines("active", active);
  emit_table(p, meta, {"list", "ion", "frequency_GHz", "weight", "conditioning"}, rows);
  return 0;
}

int run_halbach(SubContext& ctx) {
  Params p(ctx);
  iongrad::HalbachGeometry g;
  g.remanence_br = p.number("br");
  g.r_inner = p.length("ri");
  g.r_outer = p.length("ro");
  double delta_t = p.number("delta-t");
  if (delta_t != 0.0)
    g.remanence_br = iongrad::derated_remanence(g.remanence_br, delta_t);

  std::string shape = p.str("shape");
  if (shape == "sphere")
    g.shape = iongrad::HalbachShape::sphere;
  else if (shape != "cylinder")
    iongrad::throw_validation("shape must be 'cylinder' or 'sphere'");

  long segments = p.integer("segments");
  if (segments > 0) g.n_segments = static_cast<int>(segments);
  std::string z0_text = p.str("z0");
  if (!z0_text.empty()) g.half_length = parse_length(z0_text);

  ordered_json meta = base_meta("halbach");
  meta["inputs"] = {{"br_T", g.remanence_br}, {"ri_m", g.r_inner},
                    {"ro_m", g.r_outer},      {"shape", shape},
                    {"segments", segments},   {"z0", z0_text},
                    {"delta_t_K", delta_t}};

  auto field_of = [](const iongrad::HalbachGeometry& geom) {
    if (geom.shape == iongrad::HalbachShape::sphere) return iongrad::sphere_field(geom);
    if (geom.half_length) return iongrad::finite_length_field(geom);
    if (geom.n_segments) return iongrad::segmented_cylinder_field(geom);
    return iongrad::ideal_cylinder_field(geom);
  };

  std::vector<ordered_json> rows;
  std::string sweep = p.str("z0-sweep");
  if (!sweep.empty()) {
    // start:stop:steps, lengths with optional unit suffixes
    std::vector<std::string> parts;
    std::stringstream ss(sweep);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
      iongrad::throw_validation("z0-sweep must be 'start:stop:steps'");
    double z_start = parse_length(parts[0]);
    double z_stop = parse_length(parts[1]);
    long n = static_cast<long>(parse_plain_number(parts[2], "steps"));
    iongrad::require(n >= 2 && z_stop > z_start && z_start > 0.0,
                     "z0-sweep needs start > 0, stop > start, steps >= 2");
    for (long k = 0; k < n; ++k) {
      iongrad::HalbachGeometry gk = g;
      gk.n_segments.reset();
      gk.half_length = z_start + (z_stop - z_start) * static_cast<double>(k) /
                                     static_cast<double>(n - 1);
      ordered_json row;
      row["z0_m"] = *gk.half_length;
      row["field_T"] = iongrad::finite_length_field(gk);
      rows.push_back(row);
    }
    emit_table(p, meta, {"z0_m", "field_T"}, rows);
    return 0;
  }

  ordered_json row;
  row["shape"] = shape;
  row["br_T"] = g.remanence_br;
  row["ri_m"] = g.r_inner;
  row["ro_m"] = g.r_outer;
  row["segments"] = segments;
  row["z0_m"] = g.half_length ? *g.half_length : 0.0;
  row["field_T"] = field_of(g);
  rows.push_back(row);
  emit_table(p, meta, {"shape", "br_T", "ri_m", "ro_m", "segments", "z0_m", "field_T"},
             rows);
  return 0;
}

int run_pseudo(SubContext& ctx) {
  Params p(ctx);
  iongrad::RfTrapParams trap;
  trap.species = iongrad::yb171();
  trap.drive = p.frequency("drive");
  trap.a = p.number("a");
  trap.q = p.number("q");
  double b0 = p.number("b0");

  Frequency wr = iongrad::secular_frequency(trap);
  Frequency wc = iongrad::cyclotron_frequency(trap.species, b0);
  iongrad::ShiftedModes modes = iongrad::shifted_mode_frequencies(wr, wc);

  ordered_json meta = base_meta("pseudo");
  meta["inputs"] = {{"drive_Hz", trap.drive.in_hz()},
                    {"a", trap.a},
                    {"q", trap.q},
                    {"b0_T", b0},
                    {"species", trap.species.name}};

  ordered_json row;
  row["omega_r_MHz"] = wr.in_mhz();
  row["omega_c_kHz"] = wc.in_khz();
  row["omega_plus_MHz"] = modes.plus.in_mhz();
  row["omega_minus_MHz"] = modes.minus.in_mhz();
  row["destabilized"] = modes.destabilized;
  emit_table(p, meta,
             {"omega_r_MHz", "omega_c_kHz", "omega_plus_MHz", "omega_minus_MHz",
              "destabilized"},
             {row});
  return 0;
}

int run_ratios_refit(SubContext& ctx) {
  Params p(ctx);
  double b_min = p.number("b-min");
  double b_max = p.number("b-max");
  long points = p.integer("points");
  iongrad::require(points >= 2 && b_max > b_min, "need points >= 2 and b-max > b-min");

  std::vector<double> grid;
  for (long k = 0; k < points; ++k)
    grid.push_back(b_min + (b_max - b_min) * static_cast<double>(k) /
                               static_cast<double>(points - 1));

  iongrad::IonSpecies species = iongrad::yb171();
  iongrad::RatioRefitResult res = iongrad::refit_effective_ratios(species, grid);
  iongrad::EffectiveRatioFit published = iongrad::yb171_effective_ratio_fit();
  const double to_ghz = 1e-9 / iongrad::constants::two_pi;

  ordered_json meta = base_meta("ratios-refit");
  meta["inputs"] = {{"b_min_T", b_min}, {"b_max_T", b_max}, {"points", points}};
  meta["max_splitting_residual_refit"] = res.max_splitting_residual_refit;
  meta["max_splitting_residual_published"] = res.max_splitting_residual_published;
  meta["max_splitting_residual_matched"] = res.max_splitting_residual_matched;

  std::vector<ordered_json> rows;
  auto add_row = [&](const char* which, const char* ratio, double c0, double c1) {
    ordered_json row;
    row["fit"] = which;
    row["ratio"] = ratio;
    row["c0_GHz_per_T"] = c0 * to_ghz;
    row["c1_GHz_per_T"] = c1 * to_ghz;
    rows.push_back(row);
  };
  add_row("refit", "electron", res.refit.c0_s, res.refit.c1_s);
  add_row("refit", "nuclear", res.refit.c0_i, res.refit.c1_i);
  add_row("published", "electron", published.c0_s, published.c1_s);
  add_row("published", "nuclear", published.c0_i, published.c1_i);
  emit_table(p, meta, {"fit", "ratio", "c0_GHz_per_T", "c1_GHz_per_T"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"trapped-ion chain simulator: crystals, couplings, spectra, gates"};
  app.require_subcommand(1);

  std::map<std::string, SubContext> subs;

  auto make_sub = [&](const std::string& name, const std::string& desc) -> SubContext& {
    SubContext& ctx = subs[name];
    ctx.app = app.add_subcommand(name, desc);
    add_common(ctx);
    return ctx;
  };

  SubContext& crystal = make_sub("crystal", "ion chain equilibrium and normal modes");
  add_option(crystal, "n", "3", "number of ions (2..20)");
  add_option(crystal, "nu-z", "600kHz", "axial trap frequency (e.g. 600kHz)");

  SubContext& table1 = make_sub("table1", "coupling benchmark table vs reference values");
  add_option(table1, "tolerance", "0.01", "relative tolerance for --check");
  add_flag(table1, "check", "exit 4 if any deviation exceeds the tolerance");

  SubContext& levels = make_sub("levels", "single-ion levels and transition frequencies");
  add_option(levels, "b", "1", "field strength, T");
  add_option(levels, "B", "", "alias of --b");
  add_option(levels, "model", "exact", "exact|natural|matched|fitted");

  SubContext& fidelity = make_sub("fidelity", "conditional-flip fidelity vs field sweep");
  add_option(fidelity, "b-min", "0.9", "sweep start, T");
  add_option(fidelity, "b-max", "5", "sweep stop, T");
  add_option(fidelity, "steps", "10", "number of sweep points");
  add_option(fidelity, "model", "matched", "matched|natural|fitted|both");
  add_option(fidelity, "rabi", "", "Rabi rate (frequency; default A/2000)");
  add_option(fidelity, "initial", "uu", "initial basis state uu|ud|du|dd");

  SubContext& spectrum = make_sub("spectrum", "chain electron-flip line lists");
  add_option(spectrum, "n", "3", "number of ions");
  add_option(spectrum, "b0", "1", "offset field, T");
  add_option(spectrum, "b", "500", "axial field gradient, T/m");
  add_option(spectrum, "nu-z", "600kHz", "axial trap frequency");
  add_option(spectrum, "active", "", "comma-separated 1-based active ions (default all)");
  add_option(spectrum, "passive-ms", "0.5", "passive electron polarization, +-0.5");
  add_option(spectrum, "nuclear-m", "0.5", "nuclear projection, +-0.5");

  SubContext& halbach = make_sub("halbach", "permanent-magnet field formulas");
  add_option(halbach, "br", "1.23", "remanence, T");
  add_option(halbach, "ri", "2.5cm", "inner radius (length)");
  add_option(halbach, "ro", "25cm", "outer radius (length)");
  add_option(halbach, "segments", "0", "wedge count (0 = ideal)");
  add_option(halbach, "z0", "", "half-length (length; empty = infinite)");
  add_option(halbach, "shape", "cylinder", "cylinder|sphere");
  add_option(halbach, "z0-sweep", "", "half-length sweep start:stop:steps");
  add_option(halbach, "delta-t", "0", "temperature rise in K for remanence derating");

  SubContext& pseudo = make_sub("pseudo", "rf trap secular and shifted mode frequencies");
  add_option(pseudo, "drive", "10MHz", "rf drive frequency");
  add_option(pseudo, "a", "0", "static stability parameter");
  add_option(pseudo, "q", "0.3", "rf stability parameter");
  add_option(pseudo, "b0", "1", "axial field strength, T");

  SubContext& refit = make_sub("ratios-refit", "refit of the effective-ratio field law");
  add_option(refit, "b-min", "1", "grid start, T");
  add_option(refit, "b-max", "5", "grid stop, T");
  add_option(refit, "points", "9", "grid point count (>= 5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("validation", e.what());
    return 2;
  }

  // --B alias for levels
  if (levels.options.at("B")->count() > 0 && levels.options.at("b")->count() == 0) {
    levels.storage["b"] = levels.storage["B"];
    levels.options["b"] = levels.options["B"];
  }

  if (app.got_subcommand("crystal")) return run_crystal(crystal);
  if (app.got_subcommand("table1")) return run_table1(table1);
  if (app.got_subcommand("levels")) return run_levels(levels);
  if (app.got_subcommand("fidelity")) return run_fidelity(fidelity);
  if (app.got_subcommand("spectrum")) return run_spectrum(spectrum);
  if (app.got_subcommand("halbach")) return run_halbach(halbach);
  if (app.got_subcommand("pseudo")) return run_pseudo(pseudo);
  if (app.got_subcommand("ratios-refit")) return run_ratios_refit(refit);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    emit_error(kind_name(e.kind()), e.what());
    return kind_exit_code(e.kind());
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}
