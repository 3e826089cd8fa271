#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "cmorrey/config.hpp"
#include "cmorrey/harness.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {

const ExperimentKind kAllKinds[] = {
    ExperimentKind::embed_chain,     ExperimentKind::counterexample_f, ExperimentKind::counterexample_g,
    ExperimentKind::lemma34_fit,     ExperimentKind::maximal_bound,    ExperimentKind::fractional_bound,
    ExperimentKind::potential_bound, ExperimentKind::singular_bound,   ExperimentKind::weak_embed,
    ExperimentKind::zygmund_audit,
};

const char* kSmall = R"(# comment line
[experiment]
name = maximal_bound
seed = 3
ladder_depth = 6
probe_angular = 8

[domain]
shape = ball
n = 2
center = 0 0
radius = 1
x0 = 0 0

[exponents]
p = constant 2   # trailing comment

[weights]
lambda = 1
)";

}  // namespace

TEST_CASE("config: parse, lookup and round trip") {
  Config c = Config::parse(kSmall);
  CHECK(c.get("experiment", "name") == std::string("maximal_bound"));
  CHECK(c.get("exponents", "p") == std::string("constant 2"));
  CHECK(c.integer("experiment", "seed", 0) == 3);
  CHECK(c.number("weights", "lambda", 0.0) == 1.0);
  CHECK(c.number("weights", "missing", 4.5) == 4.5);
  CHECK(c.numbers("domain", "center") == std::vector<double>{0.0, 0.0});
  CHECK_FALSE(c.get("nosuch", "key"));
  CHECK(Config::parse(c.write()) == c);

  c.set("weights", "mu", "0.5");
  c.set("operator", "component", "2");
  CHECK(Config::parse(c.write()) == c);
}

TEST_CASE("config: malformed input is rejected") {
  CHECK_THROWS_AS(Config::parse("[a\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a]\nnovalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a]\n[a]\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[]\n"), ConfigError);
  Config c = Config::parse("[a]\nx = abc\ny = 1.5\nb = maybe\n");
  CHECK_THROWS_AS(c.number("a", "x", 0.0), ConfigError);
  CHECK_THROWS_AS(c.integer("a", "y", 0), ConfigError);
  CHECK_THROWS_AS(c.boolean("a", "b", false), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST_CASE("experiment config validation") {
  auto with = [](const std::string& s, const std::string& k, const std::string& v) {
    Config c = Config::parse(kSmall);
    c.set(s, k, v);
    return c;
  };
  ExperimentConfig e = experiment_config(Config::parse(kSmall));
  CHECK(e.experiment == ExperimentKind::maximal_bound);
  CHECK(e.ladder_depth == 6);
  CHECK(e.seed == 3u);
  CHECK(e.domain.n == 2);

  CHECK_THROWS_AS(experiment_config(with("experiment", "name", "nonsense")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("experiment", "ladder_depth", "2")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("experiment", "ladder_depth", "6.5")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("experiment", "probe_angular", "7")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("experiment", "seed", "-1")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("domain", "n", "4")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("domain", "shape", "torus")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("domain", "radius", "-1")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("domain", "center", "0 0 0")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("weights", "lambda", "3")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("exponents", "p", "constant 0.5")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("exponents", "p", "wiggly 2")), ConfigError);
  CHECK_THROWS_AS(experiment_config(with("operator", "component", "3")), ConfigError);
  Config missing = Config::parse(kSmall);
  missing = Config::parse("[domain]\nshape = ball\nn = 2\ncenter = 0 0\nradius = 1\nx0 = 0 0\n");
  CHECK_THROWS_AS(experiment_config(missing), ConfigError);
}

TEST_CASE("built-in configurations parse for every experiment") {
  for (ExperimentKind k : kAllKinds) {
    CAPTURE(to_string(k));
    ExperimentConfig e = experiment_config(Config::parse(default_config_text(k)));
    CHECK(e.experiment == k);
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  // The potential default keeps q from the Sobolev relation.
  ExperimentConfig pot = experiment_config(Config::parse(default_config_text(ExperimentKind::potential_bound)));
  CHECK(pot.target_exponent()(pot.domain.x0) == Approx(2.4).epsilon(1e-12));
}

TEST_CASE("test families") {
  DomainSpec dom = DomainSpec::ball(2, Point{}, 1.0, Point{});
  auto fam = operator_family(dom, WeightFunction::power(1.0), 5);
  REQUIRE(fam.size() == 12);
  std::set<std::string> names;
  for (const auto& m : fam) names.insert(m.name);
  CHECK(names.size() == 12);
  CHECK(names.count("critical") == 1);
  // Seeded members depend on the seed, closed-form ones do not.
  auto fam2 = operator_family(dom, WeightFunction::power(1.0), 6);
  Point x{0.31, -0.12, 0.0};
  CHECK(fam[0].f(x) == fam2[0].f(x));
  CHECK(fam[10].f(x) != fam2[10].f(x));
  CHECK(operator_family(dom, WeightFunction::power(1.0), 5)[10].f(x) == fam[10].f(x));

  auto emb = embedding_family(dom, 2.0, 1.0);
  REQUIRE(emb.size() == 6);
  // Critical power n/p + lambda/p' = 1.5 for n = 2, p = 2, lambda = 1.
  Point r{0.25, 0.0, 0.0};
  CHECK(emb[4].f(r) == Approx(std::pow(0.25, -1.5)));
  auto probes = embedding_outside_probes(dom);
  REQUIRE(probes.size() == 2);
  CHECK(probes[0].f(Point{}) == 1.0);
  CHECK(probes[0].f(Point{0.9, 0.0, 0.0}) == 0.0);
}

TEST_CASE("csv formatting") {
  CsvTable t{"x", "a,b", {"1,2", "3,4"}};
  CHECK(format_csv(t) == "a,b\n1,2\n3,4\n");
  CHECK(format_csv(CsvTable{"y", "h", {}}) == "h\n");
}

TEST_CASE("zygmund audit and counterexample f pass with built-in configs") {
  for (auto run : {&run_zygmund_audit, &run_counterexample_f}) {
    ExperimentReport r = run(experiment_config(Config::parse(default_config_text(
        run == &run_zygmund_audit ? ExperimentKind::zygmund_audit : ExperimentKind::counterexample_f))));
    CAPTURE(r.experiment);
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
    CHECK(r.passed());
    CHECK_FALSE(r.tables.empty());
  }
}

TEST_CASE("bound experiments refuse unverified hypotheses unless forced") {
  Config c = Config::parse(kSmall);
  // omega1 = 1/ln(4/r) is not Dini-integrable, so the Zygmund pair fails.
  c.set("weights", "omega1", "power_log 0 -1 4");
  c.set("weights", "omega2", "power_log 0.1 -1 4");
  ExperimentConfig e = experiment_config(c);
  CHECK_THROWS_AS(run_operator_bound(e, OperatorKind::maximal), HypothesisError);
  CHECK_THROWS_AS(run_experiment(e), HypothesisError);

  BoundOptions forced;
  forced.force = true;
  BoundednessReport b = run_operator_bound(e, OperatorKind::maximal, forced);
  CHECK_FALSE(b.conforming);
  CHECK(b.verdict != Verdict::bounded);
}

TEST_CASE("ratios are invariant under scaling the test fields") {
  ExperimentConfig e = experiment_config(Config::parse(kSmall));
  BoundednessReport a = run_operator_bound(e, OperatorKind::maximal);
  BoundOptions scaled;
  scaled.field_scale = 37.5;
  BoundednessReport b = run_operator_bound(e, OperatorKind::maximal, scaled);
  REQUIRE(a.ratios.size() == b.ratios.size());
  for (std::size_t i = 0; i < a.ratios.size(); ++i)
    for (std::size_t j = 0; j < a.ratios[i].size(); ++j) {
      CAPTURE(a.fields[i]);
      CHECK(b.ratios[i][j] == Approx(a.ratios[i][j]).epsilon(1e-8));
      CHECK(b.source[i][j] == Approx(37.5 * a.source[i][j]).epsilon(1e-8));
    }
  CHECK(a.verdict == b.verdict);
}
