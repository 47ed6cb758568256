#include "sshchain/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "CLI11.hpp"

namespace sshchain::cli {

namespace {

constexpr Command kCommands[] = {Command::spectrum, Command::polarization, Command::schmidt,
                                 Command::winding,  Command::bands,        Command::sweep,
                                 Command::diagram,  Command::selftest};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "run.command",    "run.workers",       "run.fast",        "run.nk",
      "run.band_points", "run.state",        "run.bell_tol",    "chain.n",
      "chain.v",        "chain.w",           "chain.z",         "chain.boundary",
      "sweep.axis",     "sweep.axis1",       "sweep.axis2",     "sweep.states",
      "sweep.observables", "output.path",    "output.format",   "output.precision",
      "output.timestamp"};
  return keys;
}

double to_double(const std::string& key, std::string_view text) {
  double x = 0.0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, x);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("invalid number '" + std::string(text) + "' for " + key);
  }
  return x;
}

long long to_integer(const std::string& key, std::string_view text) {
  long long x = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, x);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("invalid integer '" + std::string(text) + "' for " + key);
  }
  return x;
}

std::size_t to_count(const std::string& key, std::string_view text, long long min_value) {
  const long long x = to_integer(key, text);
  if (x < min_value) {
    throw ConfigError(key + " out of range: " + std::string(text) + " (minimum " +
                      std::to_string(min_value) + ")");
  }
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + key);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

// Accumulates settings from the config file and then from flags.
struct Builder {
  RunConfig cfg;
  std::optional<Command> command;
  std::vector<Axis> axes;
  std::optional<std::vector<StateLabel>> states;
  std::optional<std::vector<Observable>> observables;
  // Where each of v, w, z was fixed explicitly, for conflict messages.
  std::map<char, std::string> fixed_by;

  void apply(const std::string& key, const std::string& value, const std::string& origin) {
    try {
      apply_unchecked(key, value, origin);
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string(e.what()) + " (" + key + ")");
    }
  }

  void apply_unchecked(const std::string& key, const std::string& value,
                       const std::string& origin) {
    if (key == "run.command") command = parse_command(value);
    else if (key == "run.workers") cfg.workers = to_count(key, value, 0);
    else if (key == "run.fast") cfg.fast = to_bool(key, value);
    else if (key == "run.nk") cfg.n_k = to_count(key, value, 64);
    else if (key == "run.band_points") cfg.band_points = to_count(key, value, 2);
    else if (key == "run.state") cfg.state = StateLabel::parse(value);
    else if (key == "run.bell_tol") {
      cfg.bell_tol = to_double(key, value);
      if (!(cfg.bell_tol >= 0.0)) throw ConfigError("run.bell_tol out of range: " + value);
    } else if (key == "chain.n") cfg.chain.n_cells = to_count(key, value, 1);
    else if (key == "chain.v") set_fixed('v', cfg.chain.v, key, value, origin);
    else if (key == "chain.w") set_fixed('w', cfg.chain.w, key, value, origin);
    else if (key == "chain.z") set_fixed('z', cfg.chain.z, key, value, origin);
    else if (key == "chain.boundary") cfg.chain.boundary = parse_boundary(value);
    else if (key == "sweep.axis" || key == "sweep.axis1" || key == "sweep.axis2") {
      axes.push_back(parse_axis(value));
    } else if (key == "sweep.states") {
      std::vector<StateLabel> s;
      for (const auto& item : split_list(value)) s.push_back(StateLabel::parse(item));
      states = s;
    } else if (key == "sweep.observables") {
      std::vector<Observable> o;
      for (const auto& item : split_list(value)) o.push_back(parse_observable(item));
      observables = o;
    } else if (key == "output.path") cfg.output.path = value;
    else if (key == "output.format") {
      if (value == "csv") cfg.output.format = Format::csv;
      else if (value == "json") cfg.output.format = Format::json;
      else throw ConfigError("unknown output format '" + value + "' (expected csv|json)");
    } else if (key == "output.precision") {
      const long long p = to_integer(key, value);
      if (p < 6 || p > 17) throw ConfigError("output.precision out of range [6, 17]: " + value);
      cfg.output.precision = static_cast<int>(p);
    } else if (key == "output.timestamp") cfg.output.timestamp = to_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }

  void set_fixed(char name, double& slot, const std::string& key, const std::string& value,
                 const std::string& origin) {
    slot = to_double(key, value);
    if (!std::isfinite(slot)) throw ConfigError(key + " must be finite");
    fixed_by[name] = origin;
  }
};

char hopping_of(AxisKind k) {
  switch (k) {
    case AxisKind::v: return 'v';
    case AxisKind::w:
    case AxisKind::w_over_v: return 'w';
    default: return 'z';
  }
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::polarization: return "polarization";
    case Command::schmidt: return "schmidt";
    case Command::winding: return "winding";
    case Command::bands: return "bands";
    case Command::sweep: return "sweep";
    case Command::diagram: return "diagram";
    case Command::selftest: return "selftest";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  for (Command c : kCommands) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("unknown command '" + std::string(s) + "'");
}

Axis parse_axis(std::string_view text) {
  // The name may itself contain '/', so split on ':' only.
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(':', start);
    parts.emplace_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (parts.size() != 4) {
    throw ConfigError("malformed axis '" + std::string(text) + "' (expected name:min:max:n)");
  }
  Axis a;
  try {
    a.kind = parse_axis_kind(parts[0]);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  a.min = to_double("axis min", parts[1]);
  a.max = to_double("axis max", parts[2]);
  a.n_points = to_count("axis n_points", parts[3], 2);
  if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
    throw ConfigError("axis " + parts[0] + " has non-finite bounds");
  }
  return a;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("malformed config file '" + path + "': " + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("config key '" + section + "' is outside a section in '" + path + "'");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().contains(full)) throw ConfigError("unknown config key '" + full + "'");
      out.emplace_back(full, value.get_value<std::string>());
    }
  }
  return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Finite SSH chains with first- and second-neighbour hopping", "sshchain"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string n, v, w, z, boundary, out, format, precision, workers, nk, band_points, state,
      bell_tol, states, observables;
  std::vector<std::string> axes;
  bool fast = false;
  bool no_timestamp = false;

  app.add_option("--config", config_path, "INI file with [run] [chain] [sweep] [output]");
  auto* o_n = app.add_option("--n", n, "Number of unit cells N (default 40)");
  auto* o_v = app.add_option("--v", v, "Intra-cell hopping (default 0.3)");
  auto* o_w = app.add_option("--w", w, "Inter-cell hopping (default 0.5)");
  auto* o_z = app.add_option("--z", z, "Second-neighbour hopping (default 0)");
  auto* o_bc = app.add_option("--boundary", boundary, "open|periodic (default open)");
  auto* o_out = app.add_option("--out", out, "Output file (default stdout)");
  auto* o_fmt = app.add_option("--format", format, "csv|json (default csv)");
  auto* o_prec = app.add_option("--precision", precision, "Significant digits 6..17 (default 12)");
  auto* o_workers = app.add_option("--workers", workers, "Sweep worker threads (default: cores)");
  auto* o_nk = app.add_option("--nk", nk, "k-grid size for winding (default 1024)");
  auto* o_bp = app.add_option("--band-points", band_points, "k points for bands (default 201)");
  auto* o_state = app.add_option("--state", state, "Single state label, e.g. psi1 or edge");
  auto* o_bell = app.add_option("--bell-tol", bell_tol, "Hybrid Bell tolerance (default 0.05)");
  auto* o_axis = app.add_option("--axis", axes, "Sweep axis name:min:max:n (repeatable)");
  auto* o_states = app.add_option("--states", states, "Comma-separated state labels");
  auto* o_obs = app.add_option("--observables", observables,
                               "Comma-separated subset of K,P,zeta_analytic,zeta_numeric,gap,bell");
  auto* o_fast = app.add_flag("--fast", fast, "Desk-scale preset: N=40, 64 points per axis");
  auto* o_nots = app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from output");

  std::map<std::string, CLI::App*> subs;
  const std::map<Command, std::string> help = {
      {Command::spectrum, "Sorted eigenvalues with state labels"},
      {Command::polarization, "Resta polarization per positive-energy state"},
      {Command::schmidt, "Reduced atom state, Schmidt number and Bell diagnostics per state"},
      {Command::winding, "Winding number, Berry phase and topological polarization"},
      {Command::bands, "Bloch bands and h(k) over the Brillouin zone"},
      {Command::sweep, "Observables over a 1- or 2-axis parameter grid"},
      {Command::diagram, "Two-axis sweep exported as heatmap matrices"},
      {Command::selftest, "Built-in oracle and consistency checks"}};
  for (Command c : kCommands) {
    auto* sub = app.add_subcommand(std::string(to_string(c)), help.at(c));
    sub->fallthrough();
    subs[std::string(to_string(c))] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // argv[0]
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  Builder b;
  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config_file(config_path)) {
      b.apply(key, value, "config file key " + key);
    }
  }

  const std::vector<std::pair<CLI::Option*, std::pair<std::string, const std::string*>>> flags = {
      {o_n, {"chain.n", &n}},
      {o_v, {"chain.v", &v}},
      {o_w, {"chain.w", &w}},
      {o_z, {"chain.z", &z}},
      {o_bc, {"chain.boundary", &boundary}},
      {o_out, {"output.path", &out}},
      {o_fmt, {"output.format", &format}},
      {o_prec, {"output.precision", &precision}},
      {o_workers, {"run.workers", &workers}},
      {o_nk, {"run.nk", &nk}},
      {o_bp, {"run.band_points", &band_points}},
      {o_state, {"run.state", &state}},
      {o_bell, {"run.bell_tol", &bell_tol}},
      {o_states, {"sweep.states", &states}},
      {o_obs, {"sweep.observables", &observables}}};
  for (const auto& [opt, kv] : flags) {
    if (opt->count() > 0) b.apply(kv.first, *kv.second, opt->get_name());
  }
  if (o_axis->count() > 0) {
    b.axes.clear();
    for (const auto& a : axes) b.apply("sweep.axis", a, "--axis");
  }
  if (o_fast->count() > 0) b.cfg.fast = fast;
  if (o_nots->count() > 0) b.cfg.output.timestamp = !no_timestamp;

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) b.command = parse_command(name);
  }
  if (!b.command) {
    throw ConfigError("no command given (expected one of spectrum, polarization, schmidt, "
                      "winding, bands, sweep, diagram, selftest)");
  }

  RunConfig cfg = b.cfg;
  cfg.command = *b.command;
  const bool is_scan = cfg.command == Command::sweep || cfg.command == Command::diagram;

  if (is_scan) {
    if (b.axes.empty()) throw ConfigError("sweep needs at least one --axis name:min:max:n");
    if (cfg.command == Command::diagram && b.axes.size() != 2) {
      throw ConfigError("diagram needs exactly two axes, got " + std::to_string(b.axes.size()));
    }
    for (const auto& a : b.axes) {
      const char h = hopping_of(a.kind);
      if (const auto it = b.fixed_by.find(h); it != b.fixed_by.end()) {
        throw ConfigError(std::string("conflict: ") + h + " is swept by axis " + a.name() +
                          " and also fixed by " + it->second);
      }
    }
    if (cfg.fast) {
      cfg.chain.n_cells = 40;
      for (auto& a : b.axes) a.n_points = 64;
    }
    SweepSpec spec;
    spec.fixed = cfg.chain;
    spec.axes = b.axes;
    spec.states = b.states.value_or(std::vector<StateLabel>{StateLabel::psi(1)});
    spec.observables =
        b.observables.value_or(std::vector<Observable>{Observable::K, Observable::P});
    spec.workers = cfg.workers;
    spec.bell_tol = cfg.bell_tol;
    spec.n_k = cfg.n_k;
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    cfg.sweep = spec;
  } else {
    if (o_axis->count() > 0 || o_states->count() > 0 || o_obs->count() > 0) {
      throw ConfigError("--axis, --states and --observables are only valid for sweep and diagram");
    }
    try {
      cfg.chain.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (cfg.command == Command::polarization && cfg.chain.n_cells < 2) {
      throw ConfigError("polarization needs --n >= 2");
    }
  }
  return cfg;
}

}  // namespace sshchain::cli
