#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmorrey/exponents.hpp"
#include "cmorrey/fields.hpp"
#include "cmorrey/geometry.hpp"
#include "cmorrey/weights.hpp"

namespace cmorrey {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// `key = value` lines under `[section]` headers; `#` starts a comment.
// Section and key order is kept so that write() round-trips.
class Config {
 public:
  using Section = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  std::string write() const;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key, long fallback) const;
  bool boolean(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has_section(const std::string& section) const;
  const std::vector<Section>& sections() const { return sections_; }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::vector<Section> sections_;
};

// "constant c" | "radial_affine a b" | "radial_log a b C" | "radial_cos a b c" | "power_jump a b gamma [j]"
ExponentField parse_exponent(const std::string& spec, const Point& x0);
// "power s [c]" | "power_log s m A [c]" | "power_loglog s B [c]"
WeightFunction parse_weight(const std::string& spec);
// "constant c" | "power s" | "power_log s m A" | "power_loglog s B" | "ball_indicator r [c1 c2 c3]"
// | "annulus_indicator a b" | "coordinate j" | "oscillating_power s freq" | "random_smooth s [seed]"
ScalarField parse_field(const std::string& spec, const DomainSpec& dom, std::uint64_t seed = 1);
DomainSpec parse_domain(const Config& cfg);

enum class ExperimentKind {
  embed_chain,
  counterexample_f,
  counterexample_g,
  lemma34_fit,
  maximal_bound,
  fractional_bound,
  potential_bound,
  singular_bound,
  weak_embed,
  zygmund_audit,
};

const char* to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  Config source;
  ExperimentKind experiment = ExperimentKind::embed_chain;
  DomainSpec domain;
  std::string p_spec = "constant 2";
  std::optional<std::string> alpha_spec;
  double lambda = 1.0;
  std::optional<double> mu;              // target Morrey parameter
  std::optional<std::string> omega1_spec;  // explicit weights override lambda / mu
  std::optional<std::string> omega2_spec;
  int ladder_depth = 18;
  int probe_angular = 16;
  int kernel_component = 1;
  std::uint64_t seed = 1;

  ExponentField p() const;
  std::optional<ExponentField> alpha() const;
  // Exponent of the target space: p, or the Sobolev exponent when alpha is set.
  ExponentField target_exponent() const;
  // omega(r) = r^{(n - lambda)/p'(x0)} unless given explicitly.
  WeightFunction omega1() const;
  WeightFunction omega2() const;
};

// Parses and validates; every failure is a ConfigError.
ExperimentConfig experiment_config(const Config& cfg);
// Built-in configuration of each named experiment.
std::string default_config_text(ExperimentKind k);

}  // namespace cmorrey
