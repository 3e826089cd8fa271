#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmorrey/conditions.hpp"
#include "cmorrey/config.hpp"
#include "cmorrey/operators.hpp"

namespace cmorrey {

inline constexpr const char* kFamilyVersion = "family-v1";

struct FamilyMember {
  std::string name;
  ScalarField f;
};

// Fixed test family for the operator experiments: ten closed-form fields built
// around the saturation exponent s = n - a of omega1 = r^a ln^m(...), plus two
// seeded random fields.
std::vector<FamilyMember> operator_family(const DomainSpec& dom, const WeightFunction& omega1, std::uint64_t seed);

// Radial family around the critical power n/p + lambda/p' for constant p,
// including both strictness counterexamples.
std::vector<FamilyMember> embedding_family(const DomainSpec& dom, double p, double lambda);

// Indicator bumps, reported next to the embedding family but not gating: the
// weak-embedding constant from the proof does not hold for functions
// concentrated near x0.
std::vector<FamilyMember> embedding_outside_probes(const DomainSpec& dom);

// Theorem hypotheses of a boundedness experiment were not verified.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CsvTable {
  std::string name;
  std::string header;
  std::vector<std::string> rows;
};

struct ExperimentReport {
  std::string experiment;
  bool conforming = true;  // false when run with --force past failed hypotheses
  std::vector<Check> checks;
  std::vector<CsvTable> tables;
  double seconds = 0.0;

  bool passed() const;
};

enum class Verdict { bounded, inconclusive, growing };
const char* to_string(Verdict v);

struct BoundednessReport {
  std::string op;
  std::vector<int> depths;  // K, K+1, K+2
  std::vector<std::string> fields;
  std::vector<std::vector<double>> ratios;  // [field][depth]
  std::vector<std::vector<double>> source;  // source norm per field and depth
  std::vector<std::vector<double>> target;
  std::vector<double> max_ratio;  // per depth
  double drift = 0.0;             // max_ratio(K+2) / max_ratio(K) - 1
  std::vector<Verdict> field_verdicts;
  Verdict verdict = Verdict::inconclusive;
  bool conforming = true;
  std::vector<ConditionVerdict> hypotheses;
  std::vector<std::string> notes;
};

// Drift policy: a field is bounded when its ratio moves by less than 5% from K
// to K+2 and growing when it rises by more than 5% at each single refinement
// (or becomes infinite). The family is bounded only when every field is and
// the maximal ratio drifts by less than 5%; growing when any field grows.
inline constexpr double kDriftTolerance = 0.05;

struct BoundOptions {
  bool force = false;
  double field_scale = 1.0;  // multiplies every family member (scale-invariance check)
  ProbeOptions probe{};
};

BoundednessReport run_operator_bound(const ExperimentConfig& cfg, OperatorKind which, const BoundOptions& opt = {});
ExperimentReport to_report(const BoundednessReport& b);

ExperimentReport run_embed_chain(const ExperimentConfig& cfg);
ExperimentReport run_counterexample_f(const ExperimentConfig& cfg);
ExperimentReport run_counterexample_g(const ExperimentConfig& cfg);
ExperimentReport run_lemma34_fit(const ExperimentConfig& cfg);
ExperimentReport run_weak_embed(const ExperimentConfig& cfg);
ExperimentReport run_zygmund_audit(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment. Bound experiments check their verdict against
// `expect_bounded`; the negative control passes when the verdict is not bounded.
ExperimentReport run_experiment(const ExperimentConfig& cfg, bool force = false);

struct AuditOptions {
  std::uint64_t seed = 1;
  std::optional<int> ladder_depth;  // overrides the bound experiments' K
};

// Every named experiment with its built-in configuration, plus the operator
// special cases and a negative control.
std::vector<ExperimentReport> run_audit(const AuditOptions& opt = {});

std::string format_csv(const CsvTable& t);

}  // namespace cmorrey
