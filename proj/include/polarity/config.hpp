#ifndef POLARITY_CONFIG_HPP
#define POLARITY_CONFIG_HPP

// JSON run configuration shared by all CLI subcommands. Defaults mirror the
// reference parameter table (d=1, gamma=400, a1=0.02, ..., V_init=5.1).

#include <cstdint>
#include <optional>
#include <string>

#include "polarity/kinetics.hpp"
#include "polarity/nondim.hpp"
#include "polarity/simulate.hpp"

namespace polarity::cli {

enum class ScanScale { Linear, Log };

struct ScanSpec {
  std::string param;  // any KineticParams field name
  double lower = 0.0;
  double upper = 0.0;
  int count = 0;
  ScanScale scale = ScanScale::Linear;
};

struct RunConfig {
  kinetics::KineticParams params;
  sim::SimConfig sim;
  std::optional<ScanSpec> scan;
  std::optional<nondim::DimensionalParams> dimensional;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int stability_l_max = 10;
  std::string model_override;  // "", "full", or "reduced"
};

// Parses and validates a JSON document; ValidationError lists every
// violated invariant, ParseError carries the json library context.
RunConfig parse_config(const std::string& text);

// Scan points in declared order (log scale requires positive bounds).
std::vector<double> scan_points(const ScanSpec& spec);

// Resolves the named scan parameter to a member of KineticParams.
double* scan_target(kinetics::KineticParams& p, const std::string& name);

}  // namespace polarity::cli

#endif
