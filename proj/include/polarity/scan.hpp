#ifndef POLARITY_SCAN_HPP
#define POLARITY_SCAN_HPP

// Parameter scans producing a stability map; points run independently (and
// concurrently), per-point failures land in the row's error column.

#include <string>
#include <vector>

#include "polarity/config.hpp"
#include "polarity/linstab_full.hpp"

namespace polarity::cli {

struct ScanRow {
  int index = 0;
  double value = 0.0;
  bool equilibrium_found = false;
  double S = 0.0;
  std::vector<linstab_full::Verdict> verdicts;  // l = 1..l_max
  linstab_full::InstabilityCase instability_case =
      linstab_full::InstabilityCase::None;
  std::string error;
};

// Thread count from POLARITY_LAB_THREADS, else hardware concurrency.
int scan_thread_count();

std::vector<ScanRow> run_scan(const RunConfig& cfg);

std::string scan_csv(const std::vector<ScanRow>& rows, int l_max,
                     const std::string& param_name);

}  // namespace polarity::cli

#endif
