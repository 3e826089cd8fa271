// Runs the audit suite twice and prints one PASS/FAIL line per acceptance
// criterion. Exit status is the number of failed criteria (capped at 1).
#include <cstdio>
#include <string>
#include <vector>

#include "cmorrey/harness.hpp"
#include "cmorrey/kernels.hpp"

using namespace cmorrey;

namespace {

struct Criterion {
  std::string name;
  std::vector<std::string> experiments;  // audit reports that make it up
  double max_seconds;
};

const ExperimentReport* find(const std::vector<ExperimentReport>& rs, const std::string& name, std::size_t nth) {
  std::size_t seen = 0;
  for (const auto& r : rs)
    if (r.experiment == name && seen++ == nth) return &r;
  return nullptr;
}

std::string all_csv(const std::vector<ExperimentReport>& rs) {
  std::string s;
  for (const auto& r : rs)
    for (const auto& t : r.tables) s += "# " + t.name + '\n' + format_csv(t);
  return s;
}

}  // namespace

int main() {
  kernels::set_threads(kernels::max_threads());
  AuditOptions opt;
  opt.seed = 1;
  double first_seconds = 0.0;
  std::vector<ExperimentReport> a = run_audit(opt);
  for (const auto& r : a) first_seconds += r.seconds;
  std::vector<ExperimentReport> b = run_audit(opt);

  const std::vector<Criterion> criteria = {
      {"constant-exponent Luxemburg norms match closed-form L^2 norms", {"luxemburg_consistency"}, 10.0},
      {"exterior-norm exponent law for three (p, nu) configurations",
       {"lemma34_fit", "lemma34_fit", "lemma34_fit"}, 60.0},
      {"counterexample f: finite complementary norm, linear modular growth", {"counterexample_f"}, 60.0},
      {"counterexample g: divergent complementary norm, finite damped norms", {"counterexample_g"}, 120.0},
      {"weak embedding with the explicit constant, zero violations", {"weak_embed"}, 60.0},
      {"embedding chain with computed constants", {"embed_chain"}, 120.0},
      {"Zygmund checker matches closed forms", {"zygmund_audit"}, 5.0},
      {"maximal operator bounded under variable log-Holder p", {"maximal_bound"}, 600.0},
      {"Riesz potential: closed form at the center and bounded verdict",
       {"operator_special_cases", "potential_bound"}, 600.0},
      {"Riesz transform: odd zero test, principal value and bounded verdict",
       {"operator_special_cases", "singular_bound"}, 600.0},
      {"negative control with a failing weight pair is not bounded", {"negative_control"}, 600.0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    bool pass = true;
    double seconds = 0.0;
    std::string detail;
    std::size_t lemma_seen = 0;
    for (const auto& name : c.experiments) {
      const ExperimentReport* r = find(a, name, name == "lemma34_fit" ? lemma_seen++ : 0);
      if (!r) {
        pass = false;
        detail += " missing " + name;
        continue;
      }
      // The special-case report serves two criteria; each is gated only by
      // its own checks.
      const bool shared = name == "operator_special_cases";
      seconds += r->seconds;
      for (const auto& ch : r->checks) {
        const bool potential_check = ch.name.find("potential") != std::string::npos;
        if (shared && (c.experiments.back() == "potential_bound") != potential_check) continue;
        if (!ch.pass) {
          pass = false;
          detail += " [" + ch.name + ": " + ch.detail + "]";
        }
      }
      if (!r->conforming && name != "negative_control") {
        pass = false;
        detail += " non-conforming";
      }
    }
    if (seconds > c.max_seconds) {
      pass = false;
      detail += " runtime " + std::to_string(seconds) + " s over " + std::to_string(c.max_seconds) + " s";
    }
    std::printf("%s %s (%.1f s)%s\n", pass ? "PASS" : "FAIL", c.name.c_str(), seconds, detail.c_str());
    failed += pass ? 0 : 1;
  }

  const bool same = all_csv(a) == all_csv(b);
  std::printf("%s audit CSV is bit-identical across two runs with seed %llu and %d threads (%.1f s per run)\n",
              same ? "PASS" : "FAIL", static_cast<unsigned long long>(opt.seed), kernels::max_threads(),
              first_seconds);
  failed += same ? 0 : 1;
  std::printf("%s\n", failed == 0 ? "ALL PASS" : "SOME FAILED");
  return failed == 0 ? 0 : 1;
}
