#include "cmorrey/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "cmorrey/harness.hpp"
#include "cmorrey/kernels.hpp"
#include "cmorrey/norms.hpp"

namespace cmorrey {

namespace {

struct Common {
  std::string config;
  std::string out;
  int ladder_depth = 0;
  int threads = 0;
  bool force = false;
  long seed = -1;
};

ExperimentConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  Config cfg = Config::load(c.config);
  if (c.ladder_depth > 0) cfg.set("experiment", "ladder_depth", std::to_string(c.ladder_depth));
  if (c.seed >= 0) cfg.set("experiment", "seed", std::to_string(c.seed));
  // norm / op / check configs may omit the experiment name.
  if (!cfg.get("experiment", "name")) cfg.set("experiment", "name", "embed_chain");
  return experiment_config(cfg);
}

void emit(const Common& c, const std::vector<CsvTable>& tables) {
  if (c.out.empty()) {
    for (const auto& t : tables) std::cout << "# " << t.name << '\n' << format_csv(t);
    return;
  }
  std::filesystem::create_directories(c.out);
  for (const auto& t : tables) {
    std::ofstream f(std::filesystem::path(c.out) / (t.name + ".csv"));
    f << format_csv(t);
  }
}

int print_checks(const std::vector<ExperimentReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << r.experiment << ": " << c.name;
      if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
      std::cout << '\n';
      ok = ok && c.pass;
    }
    if (!r.conforming) std::cout << "NOTE " << r.experiment << ": non-conforming run (--force)\n";
  }
  std::cout << (ok ? "SUMMARY PASS" : "SUMMARY FAIL") << '\n';
  return ok ? 0 : 1;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_norm(const Common& c) {
  ExperimentConfig e = load(c);
  const Config& cfg = e.source;
  auto fs = cfg.get("field", "f");
  if (!fs) throw ConfigError("field.f is required");
  const ScalarField f = parse_field(*fs, e.domain, e.seed);
  const ExponentField p = e.p();
  const std::string kind = cfg.get_or("norm", "kind", "luxemburg");
  GridOptions go;
  go.depth = e.ladder_depth;
  const QuadratureGrid g(e.domain, go);
  auto constant_p = [&] {
    if (!p.is_constant()) throw ConfigError(kind + " norm needs a constant exponent");
    return p(e.domain.x0);
  };
  const double nu = cfg.number("norm", "nu", e.lambda * (p(e.domain.x0) - 1.0));
  NormReport r;
  if (kind == "luxemburg") {
    r = luxemburg_norm(f, p, e.domain, cfg.number("norm", "r_in", 0.0),
                       cfg.number("norm", "r_out", std::numeric_limits<double>::infinity()), go);
  } else if (kind == "complementary") {
    r = complementary_morrey_norm(f, p, e.omega1(), g);
  } else if (kind == "weighted") {
    r = weighted_lebesgue_norm(f, constant_p(), WeightedMeasure::power(nu), g);
  } else if (kind == "weak") {
    r = weak_weighted_norm(f, constant_p(), WeightedMeasure::power(nu), g);
  } else if (kind == "classical") {
    r = classical_morrey_norm(f, p, ExponentField::constant(e.lambda), g);
  } else {
    throw ConfigError("unknown norm kind '" + kind + "'");
  }
  emit(c, {{"norm", norm_csv_header(), {to_csv(r)}}});
  return 0;
}

int cmd_op(const Common& c) {
  ExperimentConfig e = load(c);
  const Config& cfg = e.source;
  auto fs = cfg.get("field", "f");
  if (!fs) throw ConfigError("field.f is required");
  const ScalarField f = parse_field(*fs, e.domain, e.seed);
  const std::string kind = cfg.get_or("operator", "kind", "maximal");
  OperatorSpec spec;
  if (kind == "maximal") {
    spec = OperatorSpec::maximal_op();
  } else if (kind == "fractional" || kind == "potential") {
    auto a = e.alpha();
    if (!a) throw ConfigError(kind + " needs exponents.alpha");
    spec = kind == "fractional" ? OperatorSpec::fractional(*a) : OperatorSpec::potential(*a);
  } else if (kind == "singular") {
    spec = OperatorSpec::singular_op(KernelSpec::riesz_transform(e.domain.n, e.kernel_component));
  } else {
    throw ConfigError("unknown operator kind '" + kind + "'");
  }
  const long count = cfg.integer("operator", "probes", 16);
  if (count < 1) throw ConfigError("operator.probes must be positive");
  // Uniform probes in the domain from the seed.
  std::mt19937_64 gen(e.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const DomainSpec& d = e.domain;
  std::vector<Point> pts;
  while (static_cast<long>(pts.size()) < count) {
    Point y{};
    for (int i = 0; i < d.n; ++i) {
      double lo = d.shape == Shape::ball ? d.center[i] - d.radius : d.lo[i];
      double hi = d.shape == Shape::ball ? d.center[i] + d.radius : d.hi[i];
      y[i] = lo + 0.5 * (u(gen) + 1.0) * (hi - lo);
    }
    if (d.contains(y) && distance(y, d.x0) > 0.0) pts.push_back(y);
  }
  std::vector<ScalarField> fields{f};
  SampledField s = apply_operator(spec, fields, d, pts).front();
  CsvTable t{"operator_" + kind, "x1,x2,x3,value,error", {}};
  for (std::size_t i = 0; i < pts.size(); ++i)
    t.rows.push_back(num(pts[i][0]) + ',' + num(pts[i][1]) + ',' + num(pts[i][2]) + ',' + num(s.values[i]) + ',' +
                     num(s.errors[i]));
  emit(c, {t});
  return 0;
}

int cmd_check(const Common& c) {
  ExperimentConfig e = load(c);
  const Config& cfg = e.source;
  const std::string cond = cfg.get_or("check", "condition", "zygmund");
  const bool quad = cfg.boolean("check", "force_quadrature", false);
  ConditionVerdict v;
  if (cond == "nontriviality") {
    v = check_nontriviality(e.omega1(), e.p(), e.domain, e.ladder_depth);
  } else if (cond == "degeneracy") {
    v = check_degeneracy(e.omega1(), e.p(), e.domain, e.ladder_depth);
  } else if (cond == "dini") {
    v = check_dini(e.omega1(), e.domain.ell, quad);
  } else if (cond == "zygmund") {
    auto a = e.alpha();
    double a0 = cfg.number("check", "alpha", a ? (*a)(e.domain.x0) : 0.0);
    v = check_zygmund_pair(e.omega1(), e.omega2(), a0, e.domain.ell, quad, e.ladder_depth);
  } else if (cond == "weighted_embedding") {
    auto rho = cfg.get("check", "rho");
    if (!rho) throw ConfigError("check.rho is required");
    ExponentField p = e.p();
    if (!p.is_constant()) throw ConfigError("weighted_embedding needs a constant exponent");
    v = check_weighted_embedding_condition(parse_weight(*rho), e.omega1(), p(e.domain.x0), e.domain.n,
                                           e.domain.ell, e.ladder_depth);
  } else {
    throw ConfigError("unknown condition '" + cond + "'");
  }
  emit(c, {{"verdict", verdict_csv_header(), {to_csv(v)}}});
  if (cfg.get("check", "expect")) return cfg.boolean("check", "expect", true) == v.holds ? 0 : 1;
  return 0;
}

int cmd_experiment(const Common& c) {
  ExperimentConfig e = load(c);
  ExperimentReport r = run_experiment(e, c.force);
  emit(c, r.tables);
  return print_checks({r});
}

int cmd_audit(const Common& c) {
  AuditOptions o;
  if (c.seed >= 0) o.seed = static_cast<std::uint64_t>(c.seed);
  if (c.ladder_depth > 0) o.ladder_depth = c.ladder_depth;
  std::vector<ExperimentReport> reports = run_audit(o);
  std::vector<CsvTable> tables;
  for (const auto& r : reports) tables.insert(tables.end(), r.tables.begin(), r.tables.end());
  if (!c.out.empty()) emit(c, tables);
  return print_checks(reports);
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Complementary Morrey norms, operators and admissibility checks"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s, bool needs_config) {
    auto* opt = s->add_option("--config", c.config, "experiment config file");
    if (needs_config) opt->required();
    s->add_option("--out", c.out, "directory for CSV output (stdout when omitted)");
    s->add_option("--ladder-depth", c.ladder_depth, "ladder depth K")->check(CLI::Range(4, 40));
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::NonNegativeNumber);
    s->add_flag("--force", c.force, "run boundedness experiments with unverified hypotheses");
    s->add_option("--seed", c.seed, "random seed")->check(CLI::NonNegativeNumber);
  };
  auto* norm = app.add_subcommand("norm", "compute a norm of a config-specified field");
  auto* op = app.add_subcommand("op", "evaluate an operator at probe points");
  auto* check = app.add_subcommand("check", "run a condition verdict");
  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  auto* audit = app.add_subcommand("audit", "run the full acceptance suite");
  for (auto* s : {norm, op, check, exp}) add_common(s, true);
  add_common(audit, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  kernels::set_threads(c.threads);
  try {
    if (*norm) return cmd_norm(c);
    if (*op) return cmd_op(c);
    if (*check) return cmd_check(c);
    if (*exp) return cmd_experiment(c);
    return cmd_audit(c);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cmorrey
