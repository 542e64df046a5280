#include "tbent/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tbent/errors.hpp"
#include "tbent/random.hpp"

namespace tbent {

namespace {

constexpr std::string_view kGenerator = "tbent 0.1.0";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class Int>
Int parse_integer(std::string_view s, std::string_view key) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::string_view method_name(EigenMethod m) {
  return m == EigenMethod::InverseIteration ? "inverse_iteration" : "ql";
}

EigenMethod parse_method(std::string_view s) {
  if (s == "inverse_iteration") return EigenMethod::InverseIteration;
  if (s == "ql") return EigenMethod::QlAccumulate;
  throw ConfigError("method: expected 'inverse_iteration' or 'ql', got '" + std::string(s) + "'");
}

std::string_view binning_name(BinningMode b) { return b == BinningMode::Energy ? "energy" : "state_index"; }

BinningMode parse_binning(std::string_view s) {
  if (s == "energy") return BinningMode::Energy;
  if (s == "state_index") return BinningMode::StateIndex;
  throw ConfigError("binning: expected 'energy' or 'state_index', got '" + std::string(s) + "'");
}

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("format: expected 'csv' or 'json', got '" + std::string(s) + "'");
}

/// Sample counts used when none are configured: 200 realizations, and for
/// long-range hopping 200/100/50 at N = 200/400/800.
int default_samples(Family family, int n) {
  if (family == Family::SlowlyVarying) return 1;
  if (family == Family::LongRangeHopping) {
    if (n <= 200) return 200;
    if (n <= 400) return 100;
    return 50;
  }
  return 200;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "command", "family",  "N",       "t",         "boundary", "lambda",  "alpha_pi",    "nu",
      "Va",      "Vb",      "q",       "alpha",     "W",        "mu",      "J",           "distance",
      "seed",    "method",  "samples", "samples_by_N", "bins",  "e_min",   "e_max",       "binning",
      "realization", "sweep_param", "grid", "sizes", "threshold", "output", "format", "plot_dir", "threads"};
  return keys;
}

/// Last-wins view of the entries that records which keys were consumed.
class KeyReader {
 public:
  explicit KeyReader(const KeyValues& entries) {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : entries) {
      if (!known_keys().contains(k)) {
        unknown.push_back(k);
        continue;
      }
      values_[k] = v;
    }
    if (!unknown.empty()) {
      std::string msg = "unknown key(s):";
      for (const auto& k : unknown) msg += " '" + k + "'";
      throw ConfigError(msg);
    }
  }

  bool has(std::string_view key) const { return values_.find(key) != values_.end(); }

  std::optional<std::string> take(std::string_view key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(std::string(key));
    return it->second;
  }

  double number(std::string_view key, double fallback) {
    const auto v = take(key);
    return v ? parse_double(*v, key) : fallback;
  }

  /// Keys present but never consumed; they do not apply to this run.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.contains(k)) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::set<std::string> used_;
};

std::string sizes_text(const std::vector<int>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
  return s;
}

std::string samples_by_size_text(const std::map<int, int>& m) {
  std::string s;
  for (const auto& [n, c] : m) s += (s.empty() ? "" : ",") + std::to_string(n) + ":" + std::to_string(c);
  return s;
}

bool uses_ensemble(Command c) { return c == Command::Ensemble || c == Command::Edges; }

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Ensemble: return "ensemble";
    case Command::Sweep: return "sweep";
    case Command::Edges: return "edges";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  for (Command c : {Command::Spectrum, Command::Ensemble, Command::Sweep, Command::Edges})
    if (s == to_string(c)) return c;
  throw ConfigError("command: expected spectrum, ensemble, sweep or edges, got '" + std::string(s) + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, std::string_view key) {
  s = trim(s);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  return v;
}

GridSpec parse_grid(std::string_view text) {
  GridSpec g{std::string(trim(text)), {}};
  if (g.text.empty()) throw ConfigError("grid: empty");
  if (g.text.find(':') != std::string::npos) {
    const auto parts = split(g.text, ':');
    if (parts.size() != 3) throw ConfigError("grid: expected start:stop:step, got '" + g.text + "'");
    const double start = parse_double(parts[0], "grid"), stop = parse_double(parts[1], "grid"),
                 step = parse_double(parts[2], "grid");
    if (!(step > 0.0) || !(stop >= start)) throw ConfigError("grid: need step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    if (count > 100000) throw ConfigError("grid: too many points");
    for (long long i = 0; i <= count; ++i) g.values.push_back(start + static_cast<double>(i) * step);
  } else {
    for (auto part : split(g.text, ',')) g.values.push_back(parse_double(part, "grid"));
  }
  for (std::size_t i = 1; i < g.values.size(); ++i)
    if (!(g.values[i] > g.values[i - 1])) throw ConfigError("grid: values must be strictly increasing");
  return g;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.starts_with("#!")) {
      line = trim(line.substr(2));
    } else {
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + std::string(line) + "'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

RunConfig parse_config(std::string_view text) { return parse_config(parse_key_values(text)); }

RunConfig parse_config(const KeyValues& entries) {
  KeyReader r(entries);

  std::vector<std::string> missing;
  for (const char* k : {"command", "family"})
    if (!r.has(k)) missing.push_back(k);
  const bool is_sweep = r.has("command") && r.take("command") == "sweep";
  if (!r.has("N") && !(is_sweep && r.has("sizes"))) missing.push_back("N");
  if (!missing.empty()) {
    std::string msg = "missing required key(s):";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  RunConfig c;
  c.command = parse_command(*r.take("command"));
  ModelParams& m = c.model;
  m.family = parse_family(*r.take("family"));

  if (c.command == Command::Sweep) {
    if (const auto p = r.take("sweep_param")) {
      c.sweep_parameter = parse_sweep_parameter(*p);
    } else {
      throw ConfigError("missing required key(s): sweep_param");
    }
    const auto g = r.take("grid");
    if (!g) throw ConfigError("missing required key(s): grid");
    c.grid = parse_grid(*g);
    if (const auto s = r.take("sizes")) {
      for (auto part : split(*s, ',')) c.sizes.push_back(parse_integer<int>(part, "sizes"));
      if (r.has("N")) throw ConfigError("N: give either N or sizes for a sweep, not both");
    } else {
      c.sizes.push_back(parse_integer<int>(*r.take("N"), "N"));
    }
    m.n = c.sizes.front();
  } else {
    m.n = parse_integer<int>(*r.take("N"), "N");
  }

  m.t = r.number("t", m.t);
  if (const auto b = r.take("boundary")) m.boundary = parse_boundary(*b);
  if (const auto s = r.take("seed")) m.seed = parse_integer<std::uint64_t>(*s, "seed");

  // the swept key is owned by the grid
  auto swept = [&](SweepParameter p) { return c.command == Command::Sweep && c.sweep_parameter == p; };
  auto family_key = [&](std::string_view key, double& field, bool required, SweepParameter p) {
    if (swept(p)) {
      if (r.has(key))
        throw ConfigError(std::string(key) + ": set by the sweep grid, remove it from the config");
      return;
    }
    if (const auto v = r.take(key)) {
      field = parse_double(*v, key);
    } else if (required) {
      throw ConfigError("missing required key(s): " + std::string(key));
    }
  };

  switch (m.family) {
    case Family::SlowlyVarying:
      family_key("lambda", m.lambda, true, SweepParameter::Lambda);
      family_key("alpha_pi", m.alpha_pi, false, SweepParameter::AlphaPi);
      family_key("nu", m.nu, false, SweepParameter::Nu);
      if (r.has("alpha")) throw ConfigError("alpha: slowly_varying takes alpha_pi (the product pi*alpha)");
      break;
    case Family::RandomDimer:
      m.vb = r.number("Vb", m.vb);
      if (swept(SweepParameter::DimerDelta)) {
        if (r.has("Va")) throw ConfigError("Va: set by the delta sweep (Va = Vb + delta), remove it from the config");
      } else {
        family_key("Va", m.va, true, SweepParameter::DimerDelta);
      }
      family_key("q", m.q, false, SweepParameter::Q);
      break;
    case Family::LongRangeCorrelated:
      family_key("alpha", m.alpha, true, SweepParameter::Alpha);
      break;
    case Family::LongRangeHopping:
      family_key("W", m.w, true, SweepParameter::W);
      family_key("mu", m.mu, true, SweepParameter::Mu);
      m.j = r.number("J", m.j);
      if (const auto d = r.take("distance")) m.distance = parse_hopping_distance(*d);
      break;
  }

  EnsembleSpec& e = c.ensemble;
  if (const auto v = r.take("method")) e.solver.method = parse_method(*v);
  if (const auto v = r.take("format")) c.format = parse_format(*v);
  if (const auto v = r.take("output")) c.output = *v;
  if (const auto v = r.take("plot_dir")) c.plot_dir = *v;
  if (const auto v = r.take("threads")) e.threads = parse_integer<int>(*v, "threads");

  switch (c.command) {
    case Command::Spectrum:
      if (const auto v = r.take("realization")) c.realization = parse_integer<std::uint64_t>(*v, "realization");
      break;
    case Command::Ensemble:
    case Command::Edges:
      if (const auto v = r.take("samples")) e.samples = parse_integer<int>(*v, "samples");
      else e.samples = default_samples(m.family, m.n);
      if (const auto v = r.take("bins")) e.energy_bins = parse_integer<int>(*v, "bins");
      if (const auto v = r.take("binning")) e.binning = parse_binning(*v);
      {
        const auto lo = r.take("e_min");
        const auto hi = r.take("e_max");
        if (lo.has_value() != hi.has_value()) throw ConfigError("e_min and e_max must be given together");
        if (lo) e.energy_range = EnergyRange{parse_double(*lo, "e_min"), parse_double(*hi, "e_max")};
      }
      if (c.command == Command::Edges) {
        c.threshold = r.number("threshold", c.threshold);
        if (!std::isfinite(c.threshold)) throw ConfigError("threshold must be finite");
      }
      break;
    case Command::Sweep: {
      const auto samples = r.take("samples");
      if (const auto v = r.take("samples_by_N")) {
        for (auto part : split(*v, ',')) {
          const auto kv = split(part, ':');
          if (kv.size() != 2) throw ConfigError("samples_by_N: expected N:count pairs, got '" + std::string(part) + "'");
          c.samples_by_size[parse_integer<int>(kv[0], "samples_by_N")] = parse_integer<int>(kv[1], "samples_by_N");
        }
      }
      for (int n : c.sizes) {
        if (c.samples_by_size.contains(n)) continue;
        c.samples_by_size[n] = samples ? parse_integer<int>(*samples, "samples") : default_samples(m.family, n);
      }
      for (auto it = c.samples_by_size.begin(); it != c.samples_by_size.end();) {
        if (std::find(c.sizes.begin(), c.sizes.end(), it->first) == c.sizes.end())
          throw ConfigError("samples_by_N: N=" + std::to_string(it->first) + " is not in sizes");
        ++it;
      }
      break;
    }
  }

  if (const auto extra = r.unused(); !extra.empty()) {
    std::string msg = "key(s) not applicable to command " + std::string(to_string(c.command)) + " with family " +
                      std::string(to_string(m.family)) + ":";
    for (const auto& k : extra) msg += " " + k;
    throw ConfigError(msg);
  }

  e.params = m;
  e.base_seed = m.seed;
  if (m.is_deterministic()) e.samples = 1;

  if (c.command == Command::Sweep) {
    c.sweep_spec().validate();
  } else {
    m.validate();
    if (uses_ensemble(c.command)) e.validate();
  }
  return c;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.base = ensemble;
  s.base.params = model;
  s.base.base_seed = model.seed;
  s.parameter = sweep_parameter;
  s.grid = grid.values;
  s.sizes = sizes;
  s.samples_by_size = samples_by_size;
  return s;
}

KeyValues resolved_config(const RunConfig& c) {
  const ModelParams& m = c.model;
  KeyValues kv;
  auto add = [&](std::string key, std::string value) { kv.emplace_back(std::move(key), std::move(value)); };
  auto swept = [&](SweepParameter p) { return c.command == Command::Sweep && c.sweep_parameter == p; };

  add("command", std::string(to_string(c.command)));
  add("family", std::string(to_string(m.family)));
  if (c.command == Command::Sweep) {
    add("sizes", sizes_text(c.sizes));
  } else {
    add("N", std::to_string(m.n));
  }
  add("t", format_double(m.t));
  add("boundary", std::string(to_string(m.resolved_boundary())));
  switch (m.family) {
    case Family::SlowlyVarying:
      if (!swept(SweepParameter::Lambda)) add("lambda", format_double(m.lambda));
      if (!swept(SweepParameter::AlphaPi)) add("alpha_pi", format_double(m.alpha_pi));
      if (!swept(SweepParameter::Nu)) add("nu", format_double(m.nu));
      break;
    case Family::RandomDimer:
      if (!swept(SweepParameter::DimerDelta)) add("Va", format_double(m.va));
      add("Vb", format_double(m.vb));
      if (!swept(SweepParameter::Q)) add("q", format_double(m.q));
      break;
    case Family::LongRangeCorrelated:
      if (!swept(SweepParameter::Alpha)) add("alpha", format_double(m.alpha));
      break;
    case Family::LongRangeHopping:
      if (!swept(SweepParameter::W)) add("W", format_double(m.w));
      if (!swept(SweepParameter::Mu)) add("mu", format_double(m.mu));
      add("J", format_double(m.j));
      add("distance", std::string(to_string(m.distance)));
      break;
  }
  add("seed", std::to_string(m.seed));
  switch (c.command) {
    case Command::Spectrum:
      add("realization", std::to_string(c.realization));
      break;
    case Command::Ensemble:
    case Command::Edges:
      add("samples", std::to_string(c.ensemble.samples));
      add("bins", std::to_string(c.ensemble.energy_bins));
      add("binning", std::string(binning_name(c.ensemble.binning)));
      if (c.ensemble.energy_range) {
        add("e_min", format_double(c.ensemble.energy_range->min));
        add("e_max", format_double(c.ensemble.energy_range->max));
      }
      if (c.command == Command::Edges) add("threshold", format_double(c.threshold));
      break;
    case Command::Sweep:
      add("sweep_param", std::string(to_string(c.sweep_parameter)));
      add("grid", c.grid.text);
      add("samples_by_N", samples_by_size_text(c.samples_by_size));
      break;
  }
  add("method", std::string(method_name(c.ensemble.solver.method)));
  add("format", c.format == OutputFormat::Csv ? "csv" : "json");
  return kv;
}

std::string config_text(const RunConfig& config, std::string_view line_prefix) {
  std::string out;
  for (const auto& [k, v] : resolved_config(config)) {
    out += line_prefix;
    out += k + " = " + v + "\n";
  }
  return out;
}

std::string extract_embedded_config(std::string_view file_text) {
  const auto body = trim(file_text);
  if (body.starts_with("{")) {
    const auto j = nlohmann::ordered_json::parse(body);
    if (!j.contains("config")) throw ConfigError("JSON output has no embedded config");
    std::string out;
    for (const auto& [k, v] : j["config"].items()) out += k + " = " + v.get<std::string>() + "\n";
    return out;
  }
  std::string out;
  for (auto line : split(file_text, '\n'))
    if (line.starts_with("#!")) out += std::string(trim(line.substr(2))) + "\n";
  if (out.empty()) throw ConfigError("output file has no embedded config");
  return out;
}

RunOutput execute(const RunConfig& config) {
  RunOutput out;
  switch (config.command) {
    case Command::Spectrum: {
      const auto h = build_hamiltonian(config.model, config.realization);
      const auto spectrum = diagonalize(h, {config.ensemble.solver.method, true});
      out.spectrum = spectrum_concurrence(spectrum);
      break;
    }
    case Command::Ensemble:
      out.ensemble = run_ensemble(config.ensemble);
      break;
    case Command::Edges:
      out.ensemble = run_ensemble(config.ensemble);
      out.edges = detect_mobility_edges(out.ensemble->curve, config.threshold, config.model.n);
      break;
    case Command::Sweep:
      out.sweep = sweep_parameter(config.sweep_spec());
      break;
  }
  return out;
}

namespace {

std::string field(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::ordered_json json_number(const std::optional<double>& x) {
  return x ? json_number(*x) : nlohmann::ordered_json(nullptr);
}

std::string transition_line(int n, const TransitionReport& t) {
  std::string s = "# transition N=" + std::to_string(n) + ":";
  if (!t.headline) return s + " none";
  auto part = [&](const char* name, const std::optional<TransitionEstimate>& e) {
    s += std::string(" ") + name + "=";
    s += e ? format_double(e->location) + "+-" + format_double(e->uncertainty) + "(strength " +
                 format_double(e->strength) + ")"
           : std::string("none");
  };
  s += " headline=" + std::string(to_string(t.headline->method)) + "@" + format_double(t.headline->location);
  part("max_slope", t.max_slope);
  part("max_curvature", t.max_curvature);
  part("jump", t.jump);
  return s;
}

nlohmann::ordered_json transition_json(const std::optional<TransitionEstimate>& e) {
  if (!e) return nullptr;
  return {{"location", e->location},
          {"method", std::string(to_string(e->method))},
          {"uncertainty", e->uncertainty},
          {"strength", e->strength}};
}

std::string render_csv(const RunConfig& config, const RunOutput& out) {
  std::ostringstream os;
  os << config_text(config, "#! ");
  os << "# generator: " << kGenerator << ", rng " << kRngVersion << "\n";
  if (out.spectrum) {
    const auto& r = *out.spectrum;
    os << "# global: concurrence=" << format_double(r.global) << " scaled_global_concurrence="
       << format_double(r.scaled_global) << " M=" << r.m << "\n";
    os << "index,energy,state_concurrence,scaled_concurrence,participation_ratio\n";
    for (std::size_t i = 0; i < r.per_state.size(); ++i) {
      const auto& s = r.per_state[i];
      os << i << "," << format_double(s.energy) << "," << format_double(s.concurrence) << ","
         << format_double(s.scaled) << "," << format_double(s.participation_ratio) << "\n";
    }
  } else if (out.edges) {
    const auto& g = out.ensemble->global;
    os << "# global: scaled_global_concurrence=" << format_double(g.mean) << " stderr=" << format_double(g.std_error)
       << " samples=" << g.samples << "\n";
    os << "N,threshold,lower_edge,upper_edge\n";
    os << out.edges->n << "," << format_double(out.edges->threshold) << "," << field(out.edges->lower_edge) << ","
       << field(out.edges->upper_edge) << "\n";
  } else if (out.ensemble) {
    const auto& g = out.ensemble->global;
    const auto& c = out.ensemble->curve;
    os << "# global: scaled_global_concurrence=" << format_double(g.mean) << " stderr=" << format_double(g.std_error)
       << " samples=" << g.samples << " out_of_range=" << c.out_of_range << "\n";
    os << "energy,scaled_concurrence_mean,stderr,count\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c.populated(i)) continue;
      os << format_double(c.bin_centers[i]) << "," << format_double(c.mean_scaled_concurrence[i]) << ","
         << format_double(c.std_error[i]) << "," << c.counts[i] << "\n";
    }
  } else if (out.sweep) {
    const auto& s = *out.sweep;
    for (const auto& [n, t] : s.transitions) os << transition_line(n, t) << "\n";
    os << to_string(s.parameter) << ",N,scaled_global_concurrence,stderr\n";
    for (const auto& [n, points] : s.per_n)
      for (std::size_t i = 0; i < points.size(); ++i)
        os << format_double(s.grid[i]) << "," << n << "," << format_double(points[i].mean) << ","
           << format_double(points[i].std_error) << "\n";
  }
  return os.str();
}

std::string render_json(const RunConfig& config, const RunOutput& out) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_config(config)) cfg[k] = v;
  j["config"] = cfg;
  j["generator"] = std::string(kGenerator);
  j["rng"] = std::string(kRngVersion);
  if (out.spectrum) {
    const auto& r = *out.spectrum;
    j["global"] = {{"concurrence", r.global}, {"scaled_global_concurrence", r.scaled_global}, {"M", r.m}};
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.per_state.size(); ++i) {
      const auto& s = r.per_state[i];
      rows.push_back({{"index", i},
                      {"energy", s.energy},
                      {"state_concurrence", s.concurrence},
                      {"scaled_concurrence", s.scaled},
                      {"participation_ratio", s.participation_ratio}});
    }
    j["states"] = rows;
  } else if (out.ensemble) {
    const auto& g = out.ensemble->global;
    j["global"] = {{"scaled_global_concurrence", g.mean}, {"stderr", g.std_error}, {"samples", g.samples}};
    if (out.edges) {
      j["edges"] = {{"N", out.edges->n},
                    {"threshold", out.edges->threshold},
                    {"lower_edge", json_number(out.edges->lower_edge)},
                    {"upper_edge", json_number(out.edges->upper_edge)}};
    } else {
      const auto& c = out.ensemble->curve;
      j["global"]["out_of_range"] = c.out_of_range;
      auto rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c.populated(i)) continue;
        rows.push_back({{"energy", c.bin_centers[i]},
                        {"scaled_concurrence_mean", c.mean_scaled_concurrence[i]},
                        {"stderr", c.std_error[i]},
                        {"count", c.counts[i]}});
      }
      j["curve"] = rows;
    }
  } else if (out.sweep) {
    const auto& s = *out.sweep;
    const std::string name(to_string(s.parameter));
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [n, points] : s.per_n)
      for (std::size_t i = 0; i < points.size(); ++i)
        rows.push_back({{name, s.grid[i]},
                        {"N", n},
                        {"scaled_global_concurrence", json_number(points[i].mean)},
                        {"stderr", json_number(points[i].std_error)}});
    j["sweep"] = rows;
    auto trans = nlohmann::ordered_json::object();
    for (const auto& [n, t] : s.transitions)
      trans[std::to_string(n)] = {{"headline", transition_json(t.headline)},
                                  {"max_slope", transition_json(t.max_slope)},
                                  {"max_curvature", transition_json(t.max_curvature)},
                                  {"jump", transition_json(t.jump)}};
    j["transitions"] = trans;
  }
  // max_digits10 keeps doubles bitwise on re-read
  return j.dump(2) + "\n";
}

}  // namespace

std::string render(const RunConfig& config, const RunOutput& output) {
  return config.format == OutputFormat::Csv ? render_csv(config, output) : render_json(config, output);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir, const RunConfig& config,
                                                  const RunOutput& out) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const std::string provenance = config_text(config, "#! ");
  std::vector<std::pair<std::string, std::string>> series;  // file name, contents

  if (out.sweep) {
    const auto& s = *out.sweep;
    const std::string name(to_string(s.parameter));
    for (const auto& [n, points] : s.per_n) {
      std::string text = provenance + "# " + name + " scaled_global_concurrence stderr\n";
      for (std::size_t i = 0; i < points.size(); ++i)
        text += format_double(s.grid[i]) + " " + format_double(points[i].mean) + " " +
                format_double(points[i].std_error) + "\n";
      series.emplace_back(name + "_N" + std::to_string(n) + ".dat", std::move(text));
    }
  } else if (out.ensemble) {
    const auto& c = out.ensemble->curve;
    std::string text = provenance + "# energy scaled_concurrence_mean stderr count\n";
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c.populated(i))
        text += format_double(c.bin_centers[i]) + " " + format_double(c.mean_scaled_concurrence[i]) + " " +
                format_double(c.std_error[i]) + " " + std::to_string(c.counts[i]) + "\n";
    series.emplace_back("curve_N" + std::to_string(config.model.n) + ".dat", std::move(text));
  } else if (out.spectrum) {
    std::string text = provenance + "# energy scaled_concurrence participation_ratio\n";
    for (const auto& s : out.spectrum->per_state)
      text += format_double(s.energy) + " " + format_double(s.scaled) + " " + format_double(s.participation_ratio) + "\n";
    series.emplace_back("spectrum_N" + std::to_string(config.model.n) + ".dat", std::move(text));
  }

  std::string manifest = provenance + "# series files, ascending N\n";
  std::vector<std::filesystem::path> paths;
  for (const auto& [name, text] : series) {
    write_text_file(dir / name, text);
    manifest += name + "\n";
    paths.push_back(dir / name);
  }
  write_text_file(dir / "manifest.txt", manifest);
  return paths;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool header = true;
  for (auto line : split(text, '\n')) {
    if (line.empty() || line.starts_with("#")) continue;
    const auto cells = split(line, ',');
    if (header) {
      for (auto c : cells) t.columns.emplace_back(c);
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw ConfigError("CSV row has the wrong number of fields");
    std::vector<double> row;
    for (auto c : cells) row.push_back(c.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(c, "csv"));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace tbent
