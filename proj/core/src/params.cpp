#include "polarisim/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "polarisim/units.hpp"

namespace polarisim {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string t; in >> t;) {
    // allow "0, 10, 100" as well as "0 10 100"
    if (!t.empty() && t.back() == ',') t.pop_back();
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Numbers followed by a unit token (unit omitted for dimensionless keys).
struct Quantity {
  std::vector<double> values;
  std::string unit;
};

Quantity split_quantity(const std::string& key, std::string_view raw, Dimension dim,
                        std::vector<std::string>& problems) {
  Quantity q;
  auto toks = tokens(raw);
  if (toks.empty()) {
    problems.push_back(key + ": empty value");
    return q;
  }
  if (dim != Dimension::dimensionless) {
    double probe;
    if (parse_double(toks.back(), probe)) {
      problems.push_back(key + ": missing unit (expected e.g. '" + toks.back() + " " +
                         std::string(canonical_unit(dim)) + "')");
      return q;
    }
    q.unit = toks.back();
    toks.pop_back();
  }
  for (const auto& t : toks) {
    double v;
    if (!parse_double(t, v)) {
      problems.push_back(key + ": '" + t + "' is not a number");
      return q;
    }
    q.values.push_back(v);
  }
  return q;
}

struct Resolver {
  const ConfigDocument& doc;
  std::vector<std::string> problems;
  std::vector<std::string> seen;

  const std::string* find(const std::string& key, bool required) {
    seen.push_back(key);
    auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) problems.push_back("missing required key '" + key + "'");
      return nullptr;
    }
    return &it->second;
  }

  void scalar(const std::string& key, Dimension dim, bool required, double& out) {
    const auto* raw = find(key, required);
    if (!raw) return;
    auto q = split_quantity(key, *raw, dim, problems);
    if (q.values.size() != 1) {
      if (!q.values.empty()) problems.push_back(key + ": expected a single value");
      return;
    }
    try {
      out = to_atomic(q.values[0], q.unit, dim);
    } catch (const UnitError& e) {
      problems.push_back(key + ": " + e.what());
    }
  }

  void list(const std::string& key, Dimension dim, std::vector<double>& out) {
    const auto* raw = find(key, false);
    if (!raw) return;
    auto q = split_quantity(key, *raw, dim, problems);
    if (q.values.empty()) return;
    try {
      out.clear();
      for (double v : q.values) out.push_back(to_atomic(v, q.unit, dim));
    } catch (const UnitError& e) {
      problems.push_back(key + ": " + e.what());
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    const auto* raw = find(key, false);
    if (!raw) return;
    auto t = tokens(*raw);
    if (t.size() != 1 || !parse_int(t[0], out)) problems.push_back(key + ": expected an integer");
  }

  void int_list(const std::string& key, std::vector<int>& out) {
    const auto* raw = find(key, false);
    if (!raw) return;
    std::vector<int> vals;
    for (const auto& t : tokens(*raw)) {
      int v;
      if (!parse_int(t, v)) {
        problems.push_back(key + ": '" + t + "' is not an integer");
        return;
      }
      vals.push_back(v);
    }
    out = std::move(vals);
  }

  template <class Enum>
  void choice(const std::string& key, std::initializer_list<Enum> options, Enum& out) {
    const auto* raw = find(key, false);
    if (!raw) return;
    const auto value = std::string(trim(*raw));
    for (Enum e : options) {
      if (to_string(e) == value) {
        out = e;
        return;
      }
    }
    std::string msg = key + ": unknown value '" + value + "' (expected one of";
    for (Enum e : options) msg += " " + std::string(to_string(e));
    problems.push_back(msg + ")");
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

double ModelParameters::kT() const { return units::kelvin(temperature); }

double ModelParameters::beta() const {
  const double kt = kT();
  return kt > 0.0 ? 1.0 / kt : std::numeric_limits<double>::infinity();
}

std::vector<std::string> validation_errors(const ModelParameters& p) {
  std::vector<std::string> e;
  auto require = [&e](bool ok, std::string msg) {
    if (!ok) e.push_back(std::move(msg));
  };
  require(p.epsilon0 > 0, "epsilon0 must be positive");
  require(p.tau >= 0, "tau must be non-negative");
  require(p.alpha > 0, "alpha must be positive");
  require(p.alpha_y > 0, "alpha_y must be positive");
  require(p.cavity_length > 0, "cavity_length must be positive");
  require(p.omega0_coupling >= 0, "omega0_coupling must be non-negative");
  require(p.phonon_omega > 0, "phonon_omega must be positive");
  require(p.gamma >= 0, "gamma must be non-negative");
  require(p.refractive_index > 0, "refractive_index must be positive");
  require(p.temperature >= 0, "temperature must be non-negative");
  require(p.n_sites >= 4 && p.n_sites % 2 == 0, "n_sites must be even and at least 4");
  require(p.n_layers >= 1, "n_layers must be at least 1");
  if (p.n_layers >= 1 && p.cavity_length > 0 && p.alpha_y > 0) {
    const double half_stack = 0.5 * (p.n_layers - 1) * p.alpha_y;
    const double centre = 0.5 * p.cavity_length + p.stack_offset;
    require((p.n_layers - 1) * p.alpha_y < p.cavity_length,
            "layer stack ((n_layers-1)*alpha_y) does not fit inside the cavity");
    require(centre - half_stack > 0 && centre + half_stack < p.cavity_length,
            "layer positions must lie strictly between the mirrors");
  }
  require(p.dt > 0, "dt must be positive");
  require(p.n_steps >= 0, "n_steps must be non-negative");
  require(p.n_trajectories >= 1, "n_trajectories must be at least 1");
  require(p.excitation_half_width > 0, "excitation_half_width must be positive");
  require(p.excitation_center_energy > 0, "excitation_center_energy must be positive");
  require(p.k_window_halfwidth_units >= 1, "k_window_halfwidth_units must be at least 1");
  require(p.record_interval > 0, "record_interval must be positive");
  for (double t : p.snapshot_times) {
    require(t >= 0 && t <= p.duration() + 0.5 * p.dt,
            "snapshot time " + format_double(units::to_fs(t)) + " fs outside the simulated interval");
  }
  for (int n : p.layer_list) require(n >= 1, "layer_list entries must be at least 1");
  require(p.frohlich_fit_start >= 0, "frohlich_fit_start must be non-negative");
  require(p.analyzer_dt > 0, "analyzer_dt must be positive");
  require(p.analyzer_ensemble >= 1, "analyzer_ensemble must be at least 1");
  require(p.analyzer_k_points >= 1, "analyzer_k_points must be at least 1");
  return e;
}

void validate(const ModelParameters& p) {
  auto e = validation_errors(p);
  if (!e.empty()) throw ConfigError(std::move(e));
}

ConfigDocument parse_document(std::string_view text) {
  ConfigDocument doc;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    auto key = std::string(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    doc[key] = std::string(value);
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return doc;
}

void apply_overrides(ConfigDocument& doc, const std::vector<std::string>& overrides) {
  std::vector<std::string> problems;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      problems.push_back("override '" + o + "' is not of the form key=value");
      continue;
    }
    doc[std::string(trim(std::string_view(o).substr(0, eq)))] =
        std::string(trim(std::string_view(o).substr(eq + 1)));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

ModelParameters resolve(const ConfigDocument& doc) {
  ModelParameters p = default_parameters();
  Resolver r{doc, {}, {}};
  using D = Dimension;
  r.scalar("epsilon0", D::energy, true, p.epsilon0);
  r.scalar("tau", D::energy, true, p.tau);
  r.scalar("alpha", D::length, true, p.alpha);
  r.scalar("alpha_y", D::length, true, p.alpha_y);
  r.scalar("cavity_length", D::length, true, p.cavity_length);
  r.scalar("omega0_coupling", D::energy, true, p.omega0_coupling);
  r.scalar("phonon_omega", D::energy, true, p.phonon_omega);
  r.scalar("gamma", D::coupling, true, p.gamma);
  r.scalar("refractive_index", D::dimensionless, false, p.refractive_index);
  r.scalar("temperature", D::temperature, false, p.temperature);
  r.scalar("stack_offset", D::length, false, p.stack_offset);
  r.integer("n_sites", p.n_sites);
  r.integer("n_layers", p.n_layers);
  r.scalar("dt", D::time, false, p.dt);

  // n_steps may be given directly or through a duration
  const bool has_steps = doc.count("n_steps") > 0;
  const bool has_duration = doc.count("duration") > 0;
  if (has_steps && has_duration) {
    r.problems.push_back("give either n_steps or duration, not both");
  }
  if (has_steps) {
    r.integer("n_steps", p.n_steps);
  } else {
    double duration = default_parameters().duration();
    r.scalar("duration", D::time, false, duration);
    if (p.dt > 0) p.n_steps = static_cast<int>(std::ceil(duration / p.dt - 1e-9));
  }

  r.integer("n_trajectories", p.n_trajectories);
  r.integer("seed", p.seed);
  r.choice("splitting", {Splitting::strang, Splitting::first_order}, p.splitting);
  r.choice("sampling_mode", {SamplingMode::independent, SamplingMode::synchronized},
           p.sampling_mode);
  r.choice("phonon_statistics", {PhononStatistics::classical, PhononStatistics::wigner},
           p.phonon_statistics);
  r.scalar("excitation_center_energy", D::energy, false, p.excitation_center_energy);
  r.scalar("excitation_half_width", D::energy, false, p.excitation_half_width);
  r.choice("excitation_profile", {ExcitationProfile::gaussian, ExcitationProfile::uniform},
           p.excitation_profile);
  r.integer("k_window_halfwidth_units", p.k_window_halfwidth_units);
  r.scalar("record_interval", D::time, false, p.record_interval);
  r.list("snapshot_times", D::time, p.snapshot_times);
  r.int_list("layer_list", p.layer_list);
  r.scalar("frohlich_fit_start", D::time, false, p.frohlich_fit_start);
  r.scalar("analyzer_dt", D::time, false, p.analyzer_dt);
  r.integer("analyzer_ensemble", p.analyzer_ensemble);
  r.integer("analyzer_k_points", p.analyzer_k_points);

  for (const auto& [key, value] : doc) {
    if (key == "n_steps" || key == "duration") continue;
    if (std::find(r.seen.begin(), r.seen.end(), key) == r.seen.end()) {
      r.problems.push_back("unknown key '" + key + "'");
    }
  }

  if (r.problems.empty()) {
    auto e = validation_errors(p);
    r.problems.insert(r.problems.end(), e.begin(), e.end());
  }
  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return p;
}

ModelParameters parse_config(std::string_view text) { return resolve(parse_document(text)); }

ConfigDocument to_document(const ModelParameters& p) {
  ConfigDocument d;
  auto au = [](double x) { return format_double(x) + " au"; };
  auto list_au = [](const std::vector<double>& xs) {
    std::string s;
    for (double x : xs) s += format_double(x) + " ";
    return s + "au";
  };
  d["epsilon0"] = au(p.epsilon0);
  d["tau"] = au(p.tau);
  d["alpha"] = au(p.alpha);
  d["alpha_y"] = au(p.alpha_y);
  d["cavity_length"] = au(p.cavity_length);
  d["omega0_coupling"] = au(p.omega0_coupling);
  d["phonon_omega"] = au(p.phonon_omega);
  d["gamma"] = au(p.gamma);
  d["refractive_index"] = format_double(p.refractive_index);
  d["temperature"] = format_double(p.temperature) + " K";
  d["stack_offset"] = au(p.stack_offset);
  d["n_sites"] = std::to_string(p.n_sites);
  d["n_layers"] = std::to_string(p.n_layers);
  d["dt"] = au(p.dt);
  d["n_steps"] = std::to_string(p.n_steps);
  d["n_trajectories"] = std::to_string(p.n_trajectories);
  d["seed"] = std::to_string(p.seed);
  d["splitting"] = std::string(to_string(p.splitting));
  d["sampling_mode"] = std::string(to_string(p.sampling_mode));
  d["phonon_statistics"] = std::string(to_string(p.phonon_statistics));
  d["excitation_center_energy"] = au(p.excitation_center_energy);
  d["excitation_half_width"] = au(p.excitation_half_width);
  d["excitation_profile"] = std::string(to_string(p.excitation_profile));
  d["k_window_halfwidth_units"] = std::to_string(p.k_window_halfwidth_units);
  d["record_interval"] = au(p.record_interval);
  if (!p.snapshot_times.empty()) d["snapshot_times"] = list_au(p.snapshot_times);
  if (!p.layer_list.empty()) {
    std::string s;
    for (int n : p.layer_list) s += (s.empty() ? "" : " ") + std::to_string(n);
    d["layer_list"] = s;
  }
  d["frohlich_fit_start"] = au(p.frohlich_fit_start);
  d["analyzer_dt"] = au(p.analyzer_dt);
  d["analyzer_ensemble"] = std::to_string(p.analyzer_ensemble);
  d["analyzer_k_points"] = std::to_string(p.analyzer_k_points);
  return d;
}

std::string to_text(const ConfigDocument& doc) {
  std::string out;
  for (const auto& [k, v] : doc) out += k + " = " + v + "\n";
  return out;
}

ModelParameters default_parameters() {
  ModelParameters p;
  p.epsilon0 = units::ev(3.2);
  p.tau = units::wavenumber(400.0);
  p.alpha = units::angstrom(12.0);
  p.alpha_y = units::angstrom(40.0);
  p.cavity_length = units::angstrom(1000.0);
  p.omega0_coupling = units::ev(0.2417);
  p.phonon_omega = units::wavenumber(720.0);
  p.gamma = 3.76e-4;
  p.refractive_index = 2.0;
  p.temperature = 300.0;
  p.n_sites = 1024;
  p.n_layers = 1;
  p.dt = 10.0;
  p.n_steps = static_cast<int>(std::ceil(units::ps(0.3) / p.dt - 1e-9));
  p.n_trajectories = 100;
  p.seed = 20240917;
  p.excitation_center_energy = units::ev(3.5);
  p.excitation_half_width = units::ev(0.2);
  p.k_window_halfwidth_units = 5;
  p.record_interval = units::fs(5.0);
  p.snapshot_times = {0.0, units::ps(0.01), units::ps(0.10), units::ps(0.30)};
  p.layer_list = {1, 2, 3, 5, 7, 10, 15};
  p.frohlich_fit_start = units::fs(10.0);
  p.analyzer_dt = 50.0;
  p.analyzer_ensemble = 1000;
  p.analyzer_k_points = 64;
  return p;
}

std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::independent ? "independent" : "synchronized";
}
std::string_view to_string(PhononStatistics s) {
  return s == PhononStatistics::classical ? "classical" : "wigner";
}
std::string_view to_string(Splitting s) { return s == Splitting::strang ? "strang" : "first_order"; }
std::string_view to_string(ExcitationProfile e) {
  return e == ExcitationProfile::gaussian ? "gaussian" : "uniform";
}

}  // namespace polarisim
