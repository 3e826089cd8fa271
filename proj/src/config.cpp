#include "cmorrey/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cmorrey {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_number(const std::string& w, const std::string& context) {
  try {
    std::size_t used = 0;
    double v = std::stod(w, &used);
    if (used != w.size() || !std::isfinite(v)) throw std::invalid_argument(w);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": '" + w + "' is not a number");
  }
}

// Numeric arguments after the family name; `min`..`max` of them.
std::vector<double> args(const std::vector<std::string>& w, std::size_t min, std::size_t max,
                         const std::string& spec) {
  if (w.size() - 1 < min || w.size() - 1 > max)
    throw ConfigError("'" + spec + "': wrong number of parameters");
  std::vector<double> a;
  for (std::size_t i = 1; i < w.size(); ++i) a.push_back(to_number(w[i], spec));
  return a;
}

Point to_point(const std::vector<double>& v, int n, const std::string& what) {
  if (static_cast<int>(v.size()) != n) throw ConfigError(what + " needs " + std::to_string(n) + " coordinates");
  Point p{};
  for (int i = 0; i < n; ++i) p[i] = v[i];
  return p;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Section* cur = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(where + ": empty section name");
      if (c.has_section(name)) throw ConfigError(where + ": duplicate section [" + name + "]");
      c.sections_.push_back({name, {}});
      cur = &c.sections_.back();
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (!cur) throw ConfigError(where + ": key outside of any section");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (const auto& kv : cur->second)
      if (kv.first == key) throw ConfigError(where + ": duplicate key '" + key + "'");
    cur->second.push_back({key, value});
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str());
}

std::string Config::write() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (i) out << '\n';
    out << '[' << sections_[i].first << "]\n";
    for (const auto& [k, v] : sections_[i].second) out << k << " = " << v << '\n';
  }
  return out.str();
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  for (const auto& s : sections_)
    if (s.first == section)
      for (const auto& kv : s.second)
        if (kv.first == key) return kv.second;
  return std::nullopt;
}

std::string Config::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  auto v = get(section, key);
  return v ? to_number(*v, section + "." + key) : fallback;
}

long Config::integer(const std::string& section, const std::string& key, long fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  double d = to_number(*v, section + "." + key);
  if (d != std::floor(d)) throw ConfigError(section + "." + key + " must be an integer");
  return static_cast<long>(d);
}

bool Config::boolean(const std::string& section, const std::string& key, bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(section + "." + key + " must be true or false");
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  if (auto v = get(section, key))
    for (const auto& w : words(*v)) out.push_back(to_number(w, section + "." + key));
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& s : sections_) {
    if (s.first != section) continue;
    for (auto& kv : s.second)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    s.second.push_back({key, value});
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

bool Config::has_section(const std::string& section) const {
  for (const auto& s : sections_)
    if (s.first == section) return true;
  return false;
}

ExponentField parse_exponent(const std::string& spec, const Point& x0) {
  auto w = words(spec);
  if (w.empty()) throw ConfigError("empty exponent specification");
  const std::string& f = w[0];
  if (f == "constant") return ExponentField::constant(args(w, 1, 1, spec)[0]);
  if (f == "radial_affine") {
    auto a = args(w, 2, 2, spec);
    return ExponentField::radial_affine(x0, a[0], a[1]);
  }
  if (f == "radial_log") {
    auto a = args(w, 3, 3, spec);
    return ExponentField::radial_log(x0, a[0], a[1], a[2]);
  }
  if (f == "radial_cos") {
    auto a = args(w, 3, 3, spec);
    return ExponentField::radial_cos(x0, a[0], a[1], a[2]);
  }
  if (f == "power_jump") {
    auto a = args(w, 3, 4, spec);
    return ExponentField::power_jump(x0, a[0], a[1], a[2], a.size() > 3 ? static_cast<int>(a[3]) : 0);
  }
  throw ConfigError("unknown exponent family '" + f + "'");
}

WeightFunction parse_weight(const std::string& spec) {
  auto w = words(spec);
  if (w.empty()) throw ConfigError("empty weight specification");
  const std::string& f = w[0];
  if (f == "power") {
    auto a = args(w, 1, 2, spec);
    return WeightFunction::power(a[0], a.size() > 1 ? a[1] : 1.0);
  }
  if (f == "power_log") {
    auto a = args(w, 3, 4, spec);
    return WeightFunction::power_log(a[0], a[1], a[2], a.size() > 3 ? a[3] : 1.0);
  }
  if (f == "power_loglog") {
    auto a = args(w, 2, 3, spec);
    return WeightFunction::power_loglog(a[0], a[1], a.size() > 2 ? a[2] : 1.0);
  }
  throw ConfigError("unknown weight family '" + f + "'");
}

ScalarField parse_field(const std::string& spec, const DomainSpec& dom, std::uint64_t seed) {
  auto w = words(spec);
  if (w.empty()) throw ConfigError("empty field specification");
  const std::string& f = w[0];
  const Point& x0 = dom.x0;
  if (f == "constant") return ScalarField::constant(args(w, 1, 1, spec)[0]);
  if (f == "power") return ScalarField::power(x0, args(w, 1, 1, spec)[0]);
  if (f == "power_log") {
    auto a = args(w, 3, 3, spec);
    return ScalarField::power_log(x0, a[0], a[1], a[2]);
  }
  if (f == "power_loglog") {
    auto a = args(w, 2, 2, spec);
    return ScalarField::power_loglog(x0, a[0], a[1]);
  }
  if (f == "ball_indicator") {
    auto a = args(w, 1, 4, spec);
    Point c = x0;
    if (a.size() > 1) c = to_point(std::vector<double>(a.begin() + 1, a.end()), dom.n, "ball_indicator center");
    return ScalarField::ball_indicator(c, a[0]);
  }
  if (f == "annulus_indicator") {
    auto a = args(w, 2, 2, spec);
    return ScalarField::annulus_indicator(x0, a[0], a[1]);
  }
  if (f == "coordinate") {
    int j = static_cast<int>(args(w, 1, 1, spec)[0]);
    if (j < 1 || j > dom.n) throw ConfigError("coordinate index out of range");
    return ScalarField::coordinate(j - 1);
  }
  if (f == "oscillating_power") {
    auto a = args(w, 2, 2, spec);
    return ScalarField::oscillating_power(x0, a[0], a[1]);
  }
  if (f == "random_smooth") {
    auto a = args(w, 1, 2, spec);
    std::uint64_t s = a.size() > 1 ? static_cast<std::uint64_t>(a[1]) : seed;
    return ScalarField::random_smooth(x0, dom.n, dom.ell, a[0], s);
  }
  throw ConfigError("unknown field family '" + f + "'");
}

DomainSpec parse_domain(const Config& cfg) {
  const std::string shape = cfg.get_or("domain", "shape", "ball");
  const long n = cfg.integer("domain", "n", 2);
  if (n < 1 || n > 3) throw ConfigError("domain.n must be 1, 2 or 3");
  const int dim = static_cast<int>(n);
  auto point_or_zero = [&](const std::string& key) {
    auto v = cfg.numbers("domain", key);
    if (v.empty()) return Point{};
    return to_point(v, dim, "domain." + key);
  };
  try {
    if (shape == "ball") {
      return DomainSpec::ball(dim, point_or_zero("center"), cfg.number("domain", "radius", 1.0), point_or_zero("x0"));
    }
    if (shape == "box") {
      auto lo = cfg.numbers("domain", "lo"), hi = cfg.numbers("domain", "hi");
      if (lo.empty() || hi.empty()) throw ConfigError("box domain needs lo and hi");
      return DomainSpec::box(dim, to_point(lo, dim, "domain.lo"), to_point(hi, dim, "domain.hi"),
                             point_or_zero("x0"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid domain: ") + e.what());
  }
  throw ConfigError("unknown domain shape '" + shape + "'");
}

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::embed_chain: return "embed_chain";
    case ExperimentKind::counterexample_f: return "counterexample_f";
    case ExperimentKind::counterexample_g: return "counterexample_g";
    case ExperimentKind::lemma34_fit: return "lemma34_fit";
    case ExperimentKind::maximal_bound: return "maximal_bound";
    case ExperimentKind::fractional_bound: return "fractional_bound";
    case ExperimentKind::potential_bound: return "potential_bound";
    case ExperimentKind::singular_bound: return "singular_bound";
    case ExperimentKind::weak_embed: return "weak_embed";
    case ExperimentKind::zygmund_audit: return "zygmund_audit";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ExperimentKind::zygmund_audit); ++i) {
    auto k = static_cast<ExperimentKind>(i);
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExponentField ExperimentConfig::p() const { return parse_exponent(p_spec, domain.x0); }

std::optional<ExponentField> ExperimentConfig::alpha() const {
  if (!alpha_spec) return std::nullopt;
  return parse_exponent(*alpha_spec, domain.x0);
}

ExponentField ExperimentConfig::target_exponent() const {
  auto a = alpha();
  return a ? sobolev_exponent(p(), *a, domain) : p();
}

namespace {
WeightFunction morrey_weight(double lambda, const ExponentField& p, const DomainSpec& dom) {
  const double pc = p(dom.x0);
  return WeightFunction::power((dom.n - lambda) * (1.0 - 1.0 / pc));
}
}  // namespace

WeightFunction ExperimentConfig::omega1() const {
  return omega1_spec ? parse_weight(*omega1_spec) : morrey_weight(lambda, p(), domain);
}

WeightFunction ExperimentConfig::omega2() const {
  return omega2_spec ? parse_weight(*omega2_spec) : morrey_weight(mu.value_or(lambda), target_exponent(), domain);
}

ExperimentConfig experiment_config(const Config& cfg) {
  ExperimentConfig e;
  e.source = cfg;
  auto name = cfg.get("experiment", "name");
  if (!name) throw ConfigError("experiment.name is required");
  e.experiment = parse_experiment_kind(*name);
  e.domain = parse_domain(cfg);
  e.p_spec = cfg.get_or("exponents", "p", e.p_spec);
  e.alpha_spec = cfg.get("exponents", "alpha");
  e.lambda = cfg.number("weights", "lambda", e.lambda);
  if (cfg.get("weights", "mu")) e.mu = cfg.number("weights", "mu", 0.0);
  e.omega1_spec = cfg.get("weights", "omega1");
  e.omega2_spec = cfg.get("weights", "omega2");
  e.ladder_depth = static_cast<int>(cfg.integer("experiment", "ladder_depth", e.ladder_depth));
  e.probe_angular = static_cast<int>(cfg.integer("experiment", "probe_angular", e.probe_angular));
  e.kernel_component = static_cast<int>(cfg.integer("operator", "component", e.kernel_component));
  long seed = cfg.integer("experiment", "seed", 1);
  if (seed < 0) throw ConfigError("experiment.seed must be nonnegative");
  e.seed = static_cast<std::uint64_t>(seed);

  if (e.ladder_depth < 4 || e.ladder_depth > 40) throw ConfigError("ladder_depth must lie in [4, 40]");
  if (e.probe_angular < 4 || e.probe_angular > 96 || e.probe_angular % 2)
    throw ConfigError("probe_angular must be even and lie in [4, 96]");
  if (e.kernel_component < 1 || e.kernel_component > e.domain.n)
    throw ConfigError("operator.component must lie in 1..n");
  if (!(e.lambda >= 0.0 && e.lambda <= e.domain.n)) throw ConfigError("weights.lambda must lie in [0, n]");
  if (e.mu && !(*e.mu >= 0.0 && *e.mu <= e.domain.n)) throw ConfigError("weights.mu must lie in [0, n]");
  // Evaluate every spec once so that malformed values surface here.
  try {
    ExponentField p = e.p();
    validate_lebesgue_exponent(p, e.domain, true);
    if (auto a = e.alpha()) validate_order(*a, e.domain);
    e.omega1().validate(e.domain.ell);
    e.omega2().validate(e.domain.ell);
    if (auto f = cfg.get("field", "f")) parse_field(*f, e.domain, e.seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  return e;
}

std::string default_config_text(ExperimentKind k) {
  // p(x) = 2 + 1/ln(e^2 ell / |x - x0|) on the unit disc (ell = 2).
  const std::string log_p = "radial_log 2 1 14.778112197861301";
  std::ostringstream s;
  s << "[experiment]\nname = " << to_string(k) << "\nseed = 1\n";
  switch (k) {
    case ExperimentKind::maximal_bound:
    case ExperimentKind::singular_bound:
      s << "ladder_depth = 18\nprobe_angular = 16\n";
      break;
    case ExperimentKind::potential_bound:
    case ExperimentKind::fractional_bound:
      s << "ladder_depth = 18\nprobe_angular = 16\n";
      break;
    default:
      s << "ladder_depth = 24\n";
  }
  s << "\n[domain]\nshape = ball\nn = 2\ncenter = 0 0\nradius = 1\nx0 = 0 0\n";
  s << "\n[exponents]\n";
  switch (k) {
    case ExperimentKind::maximal_bound:
    case ExperimentKind::singular_bound:
      s << "p = " << log_p << '\n';
      break;
    case ExperimentKind::potential_bound:
    case ExperimentKind::fractional_bound:
      s << "p = constant 1.5\nalpha = constant 0.5\n";
      break;
    default:
      s << "p = constant 2\n";
  }
  s << "\n[weights]\nlambda = 1\n";
  if (k == ExperimentKind::potential_bound || k == ExperimentKind::fractional_bound) s << "mu = 0.5714285714285714\n";
  if (k == ExperimentKind::singular_bound) s << "\n[operator]\ncomponent = 1\n";
  return s.str();
}

}  // namespace cmorrey
