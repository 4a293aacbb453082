#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "corrdyn_cli/cli.hpp"

namespace corrdyn::cli {

namespace {

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::Julia, "julia"},
    {Command::Filled, "filled"},
    {Command::Mset, "mset"},
    {Command::Limitset, "limitset"},
    {Command::YoccozDisks, "yoccoz-disks"},
    {Command::YoccozVerify, "yoccoz-verify"},
    {Command::Sturmian, "sturmian"},
    {Command::Minkowski, "minkowski"},
    {Command::Cifs, "cifs"},
    {Command::Motion, "motion"},
};

struct KeySpec {
  const char* key;
  const char* help;
};

constexpr KeySpec kKeys[] = {
    {"p", "exponent numerator (sturmian: fraction numerator)"},
    {"q", "exponent denominator (sturmian: fraction denominator)"},
    {"c", "parameter c as re,im"},
    {"a", "mating parameter a as re,im"},
    {"center", "window center as re,im"},
    {"width", "window width"},
    {"px", "pixels across"},
    {"py", "pixels down (default: px)"},
    {"depth", "orbit or chain depth"},
    {"budget", "node budget per query"},
    {"radius", "escape radius override"},
    {"out", "output path"},
    {"palette", "default | mono"},
    {"workers", "worker threads (default: logical CPUs)"},
    {"mode", "julia: boundary | backward"},
    {"nodes", "julia backward: walk length"},
    {"rng-seed", "julia backward: random seed"},
    {"variant", "mset: zero | connected"},
    {"sub-px", "mset connected: sub-render pixels"},
    {"coords", "limitset: original | covj"},
    {"buffer", "limitset: near-P acceptance radius"},
    {"q-max", "largest denominator"},
    {"extra", "yoccoz-disks: extra fractions, e.g. 1/16,1/10"},
    {"disks", "yoccoz-disks: mating | classical"},
    {"degree", "classical disks: polynomial degree"},
    {"period", "classical disks: cycle period"},
    {"cf", "minkowski: continued fraction, e.g. [1;2,3] or [1;(1)]"},
    {"bits", "minkowski: precision in bits"},
    {"tolerance", "cifs: distance to the attractor"},
    {"rho", "cifs: outer disk radius (default: searched)"},
    {"generations", "cifs: Hutchinson generations (default: from tolerance)"},
    {"c-end", "motion: end of the straight path from 0"},
    {"steps", "motion: path steps"},
    {"n-points", "motion: number of seed points"},
    {"period-max", "motion: largest seed period"},
};

// Keys every command accepts.
const std::set<std::string> kCommon = {"workers"};

const std::map<Command, std::set<std::string>>& applicable() {
  static const std::map<Command, std::set<std::string>> table = {
      {Command::Julia, {"p", "q", "c", "center", "width", "px", "py", "depth", "budget", "radius",
                        "palette", "mode", "nodes", "rng-seed"}},
      {Command::Filled,
       {"p", "q", "c", "center", "width", "px", "py", "depth", "budget", "radius", "palette"}},
      {Command::Mset, {"p", "q", "center", "width", "px", "py", "depth", "budget", "radius",
                       "palette", "variant", "sub-px"}},
      {Command::Limitset,
       {"a", "center", "width", "px", "py", "depth", "budget", "palette", "coords", "buffer"}},
      {Command::YoccozDisks, {"q-max", "extra", "disks", "degree", "period"}},
      {Command::YoccozVerify, {"a", "q-max"}},
      {Command::Sturmian, {"p", "q"}},
      {Command::Minkowski, {"cf", "bits"}},
      {Command::Cifs, {"p", "q", "c", "tolerance", "rho", "generations"}},
      {Command::Motion, {"p", "q", "c-end", "steps", "n-points", "period-max"}},
  };
  return table;
}

bool applies(Command command, const std::string& key) {
  // sturmian and minkowski only print.
  if (key == "out") return command != Command::Sturmian && command != Command::Minkowski;
  return kCommon.count(key) > 0 || applicable().at(command).count(key) > 0;
}

template <class T>
T parse_number(const std::string& text, const std::string& field) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw UsageError(field + ": cannot read '" + text + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw UsageError(field + " must be finite");
  }
  return value;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::pair<int, int>> parse_fractions(const std::string& text, const std::string& field) {
  std::vector<std::pair<int, int>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = trim(text.substr(start, end - start));
    const auto slash = item.find('/');
    if (slash == std::string::npos)
      throw UsageError(field + ": expected fractions like 1/16, got '" + item + "'");
    const int p = parse_number<int>(trim(item.substr(0, slash)), field);
    const int q = parse_number<int>(trim(item.substr(slash + 1)), field);
    if (p <= 0 || q <= 2 * p - 1 || 2 * p > q || std::gcd(p, q) != 1)
      throw UsageError(field + ": " + item + " is not a reduced fraction in (0, 1/2]");
    out.emplace_back(p, q);
    start = end + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Cx z) { return format_double(z.real()) + "," + format_double(z.imag()); }

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& entry : kCommands)
    if (entry.command == command) return entry.name;
  return "unknown";
}

Cx parse_complex(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_number<double>(text, field), 0.0};
  return {parse_number<double>(trim(text.substr(0, comma)), field),
          parse_number<double>(trim(text.substr(comma + 1)), field)};
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Dynamics of multivalued power maps and modular-group matings.", "corrdyn"};
  std::string command;
  std::vector<std::string> names;
  for (const auto& entry : kCommands) names.emplace_back(entry.name);
  app.add_option("command", command, "what to compute")
      ->required()
      ->check(CLI::IsMember(names));
  std::map<std::string, std::string> raw;
  for (const auto& spec : kKeys) app.add_option(std::string("--") + spec.key, raw[spec.key], spec.help);
  app.set_config("--config", "", "flat 'key = value' file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  // Values such as "0.05,0" and "[1;1,2]" are scalars, not arrays.
  app.get_config_formatter_base()->arrayBounds('\0', '\0')->arrayDelimiter('\x1f');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ConfigError& e) {
    const std::string what = e.what();
    const std::string extras = "INI was not able to parse ";
    if (what.rfind(extras, 0) == 0) throw UsageError("unknown config key: " + what.substr(extras.size()));
    throw UsageError(what);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  for (const auto& entry : kCommands)
    if (command == entry.name) cfg.command = entry.command;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());

  const auto given = [&](const std::string& key) {
    return app.get_option("--" + key)->count() > 0;
  };
  for (const auto& spec : kKeys)
    if (given(spec.key) && !applies(cfg.command, spec.key))
      throw UsageError(std::string(spec.key) + " does not apply to the " + command + " command");

  const auto int_at_least = [&](const std::string& key, int min) {
    const int v = parse_number<int>(trim(raw[key]), key);
    if (v < min) throw UsageError(key + " must be >= " + std::to_string(min));
    return v;
  };
  const auto positive = [&](const std::string& key) {
    const double v = parse_number<double>(trim(raw[key]), key);
    if (!(v > 0.0)) throw UsageError(key + " must be > 0");
    return v;
  };
  const auto choice = [&](const std::string& key, std::initializer_list<const char*> allowed) {
    const std::string v = trim(raw[key]);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : " | ") + std::string(a);
    throw UsageError(key + " must be one of " + list);
  };

  if (given("p")) cfg.p = int_at_least("p", 1);
  if (given("q")) cfg.q = int_at_least("q", 1);
  if (given("c")) cfg.c = parse_complex(raw["c"], "c");
  if (given("a")) cfg.a = parse_complex(raw["a"], "a");
  if (given("center")) cfg.center = parse_complex(raw["center"], "center");
  if (given("width")) cfg.width = positive("width");
  if (given("px")) cfg.px = int_at_least("px", 1);
  if (given("py")) cfg.py = int_at_least("py", 1);
  if (given("depth")) cfg.depth = int_at_least("depth", 1);
  if (given("budget")) cfg.budget = static_cast<std::size_t>(int_at_least("budget", 1));
  if (given("radius")) cfg.radius = positive("radius");
  if (given("out")) cfg.out = trim(raw["out"]);
  if (given("palette")) cfg.palette = choice("palette", {"default", "mono"});
  if (given("workers")) cfg.workers = static_cast<std::size_t>(int_at_least("workers", 1));
  if (given("mode")) cfg.mode = choice("mode", {"boundary", "backward"});
  if (given("nodes")) cfg.nodes = static_cast<std::size_t>(int_at_least("nodes", 1));
  if (given("rng-seed"))
    cfg.rng_seed = static_cast<std::uint64_t>(parse_number<unsigned long long>(trim(raw["rng-seed"]), "rng-seed"));
  if (given("variant")) cfg.variant = choice("variant", {"zero", "connected"});
  if (given("sub-px")) cfg.sub_px = int_at_least("sub-px", 8);
  if (given("coords")) cfg.coords = choice("coords", {"original", "covj"});
  if (given("buffer")) cfg.buffer = positive("buffer");
  if (given("q-max")) cfg.q_max = int_at_least("q-max", 2);
  if (given("extra")) cfg.extra = parse_fractions(raw["extra"], "extra");
  if (given("disks")) cfg.disks = choice("disks", {"mating", "classical"});
  if (given("degree")) cfg.degree = int_at_least("degree", 2);
  if (given("period")) cfg.period = int_at_least("period", 1);
  if (given("cf")) cfg.cf = trim(raw["cf"]);
  if (given("bits")) {
    cfg.bits = static_cast<unsigned>(int_at_least("bits", 1));
    if (cfg.bits > 4096) throw UsageError("bits must be <= 4096");
  }
  if (given("tolerance")) cfg.tolerance = positive("tolerance");
  if (given("rho")) cfg.rho = positive("rho");
  if (given("generations")) cfg.generations = int_at_least("generations", 0);
  if (given("c-end")) cfg.c_end = parse_complex(raw["c-end"], "c-end");
  if (given("steps")) cfg.steps = int_at_least("steps", 1);
  if (given("n-points")) cfg.n_points = static_cast<std::size_t>(int_at_least("n-points", 1));
  if (given("period-max")) {
    cfg.period_max = int_at_least("period-max", 1);
    if (cfg.period_max > 12) throw UsageError("period-max must be <= 12");
  }

  // Cross-field checks.
  switch (cfg.command) {
    case Command::Julia:
    case Command::Filled:
    case Command::Mset:
    case Command::Cifs:
    case Command::Motion: {
      const int p = cfg.p.value_or(3);
      const int q = cfg.q.value_or(2);
      if (p <= q) throw UsageError("p must be greater than q (beta = p/q > 1)");
      break;
    }
    case Command::Sturmian:
      if (!cfg.p || !cfg.q) throw UsageError("sturmian needs both p and q");
      if (*cfg.p >= *cfg.q || std::gcd(*cfg.p, *cfg.q) != 1)
        throw UsageError("p/q must be a reduced fraction in (0, 1)");
      break;
    case Command::Minkowski:
      if (cfg.cf.empty()) throw UsageError("minkowski needs cf");
      break;
    case Command::Limitset:
    case Command::YoccozVerify:
      if (cfg.a == Cx{1.0} || !(std::abs(cfg.a - 4.0) <= 3.0 + 1e-12))
        throw UsageError("a must satisfy |a - 4| <= 3 and a != 1");
      break;
    case Command::YoccozDisks:
      break;
  }
  if (cfg.command == Command::Julia && cfg.mode != "backward" && (given("nodes") || given("rng-seed")))
    throw UsageError(std::string(given("nodes") ? "nodes" : "rng-seed") + " needs mode = backward");
  if (cfg.command == Command::Mset && cfg.variant != "connected" && given("sub-px"))
    throw UsageError("sub-px needs variant = connected");
  if (cfg.command == Command::YoccozDisks && cfg.disks != "classical" &&
      (given("degree") || given("period")))
    throw UsageError(std::string(given("degree") ? "degree" : "period") + " needs disks = classical");
  return cfg;
}

std::string to_meta(const RunConfig& cfg) {
  std::string out = "# corrdyn run configuration\n";
  const auto line = [&](const std::string& key, const std::string& value) {
    if (applies(cfg.command, key)) out += key + " = " + value + "\n";
  };
  out += "command = " + std::string(to_string(cfg.command)) + "\n";
  const bool power = cfg.command == Command::Julia || cfg.command == Command::Filled ||
                     cfg.command == Command::Mset || cfg.command == Command::Cifs ||
                     cfg.command == Command::Motion;
  if (power || cfg.command == Command::Sturmian) {
    line("p", std::to_string(cfg.p.value_or(3)));
    line("q", std::to_string(cfg.q.value_or(2)));
  }
  line("c", format_complex(cfg.c));
  line("a", format_complex(cfg.a));
  if (cfg.center) line("center", format_complex(*cfg.center));
  if (cfg.width) line("width", format_double(*cfg.width));
  line("px", std::to_string(cfg.px));
  if (cfg.py) line("py", std::to_string(*cfg.py));
  if (cfg.depth) line("depth", std::to_string(*cfg.depth));
  line("budget", std::to_string(cfg.budget));
  if (cfg.radius) line("radius", format_double(*cfg.radius));
  line("palette", cfg.palette);
  line("mode", cfg.mode);
  if (cfg.mode == "backward") {
    line("nodes", std::to_string(cfg.nodes));
    line("rng-seed", std::to_string(cfg.rng_seed));
  }
  line("variant", cfg.variant);
  if (cfg.variant == "connected") line("sub-px", std::to_string(cfg.sub_px));
  line("coords", cfg.coords);
  line("buffer", format_double(cfg.buffer));
  line("q-max", std::to_string(cfg.q_max));
  if (!cfg.extra.empty()) {
    std::string list;
    for (const auto& [p, q] : cfg.extra)
      list += (list.empty() ? "" : ",") + std::to_string(p) + "/" + std::to_string(q);
    line("extra", list);
  }
  line("disks", cfg.disks);
  if (cfg.disks == "classical") {
    line("degree", std::to_string(cfg.degree));
    line("period", std::to_string(cfg.period));
  }
  if (!cfg.cf.empty()) line("cf", cfg.cf);
  line("bits", std::to_string(cfg.bits));
  line("tolerance", format_double(cfg.tolerance));
  if (cfg.rho) line("rho", format_double(*cfg.rho));
  if (cfg.generations) line("generations", std::to_string(*cfg.generations));
  line("c-end", format_complex(cfg.c_end));
  line("steps", std::to_string(cfg.steps));
  line("n-points", std::to_string(cfg.n_points));
  line("period-max", std::to_string(cfg.period_max));
  return out;
}

}  // namespace corrdyn::cli
