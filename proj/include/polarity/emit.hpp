#ifndef POLARITY_EMIT_HPP
#define POLARITY_EMIT_HPP

// CSV/JSON artifact emission: deterministic 17-significant-digit floats,
// atomic write-temp-then-rename file creation, FNV-1a content digests and
// a summary.json per run.

#include <map>
#include <string>
#include <vector>

#include "polarity/kinetics.hpp"
#include "polarity/linstab_full.hpp"
#include "polarity/linstab_reduced.hpp"
#include "polarity/simulate.hpp"

namespace polarity::cli {

std::string format_g17(double x);
std::string version_string();
std::string fnv1a_hex(const std::string& bytes);

// Writes every (filename -> content) pair atomically into output_dir, then
// a summary.json with the config echo, version, seed, wall time and per-file
// digests. Returns the digest map.
std::map<std::string, std::string> emit_outputs(
    const std::string& output_dir,
    const std::map<std::string, std::string>& files,
    const std::string& config_echo_json, std::uint64_t seed,
    double wall_time_seconds);

std::string equilibria_csv(const std::vector<kinetics::Equilibrium>& states);
std::string stability_csv(const std::vector<linstab_full::DispersionReport>& rows);
std::string reduced_stability_csv(
    const std::vector<double>& mu, const std::vector<double>& constant_term,
    const std::vector<std::optional<double>>& root,
    const std::vector<const char*>& verdict, const char* case_label);
std::string dispersion_csv(const std::vector<int>& l,
                           const std::vector<double>& omega,
                           const std::vector<double>& G);
std::string growth_curve_csv(const std::vector<linstab_reduced::GrowthPoint>& curve);
std::string snapshots_csv(const sim::SimRecord& record, bool full_model);
std::string diagnostics_csv(const sim::SimRecord& record);

}  // namespace polarity::cli

#endif
