#include "polarity/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "polarity/emit.hpp"
#include "polarity/errors.hpp"
#include "polarity/linstab_reduced.hpp"

namespace polarity::cli {

namespace {

using linstab_full::InstabilityCase;
using linstab_full::Verdict;

const kinetics::Equilibrium* pick_state(
    const std::vector<kinetics::Equilibrium>& states) {
  for (const kinetics::Equilibrium& eq : states) {
    if (eq.u_star > 0.0 && eq.v_star > 0.0 && eq.V_star > 0.0 &&
        kinetics::stability_value_S(eq) > 0.0) {
      return &eq;
    }
  }
  return states.empty() ? nullptr : &states.front();
}

ScanRow evaluate_point(const RunConfig& cfg, int index, double value,
                       int l_max) {
  ScanRow row;
  row.index = index;
  row.value = value;
  row.verdicts.assign(l_max, Verdict::Inconclusive);
  try {
    kinetics::KineticParams p = cfg.params;
    double* target = scan_target(p, cfg.scan->param);
    if (target == nullptr) {
      throw Error(ErrorCode::ValidationError, "unknown scan parameter");
    }
    *target = value;
    p.validate();

    const kinetics::EquilibriaResult eqs = kinetics::find_equilibria(p);
    const kinetics::Equilibrium* eq = pick_state(eqs.states);
    if (eq == nullptr) {
      row.error = "NoEquilibrium";
      return row;
    }
    row.equilibrium_found = true;
    row.S = kinetics::stability_value_S(*eq);

    const bool reduced =
        p.reduced_model() || cfg.model_override == "reduced";
    if (reduced) {
      const linstab_reduced::SpectrumSpec spec =
          linstab_reduced::SpectrumSpec::unit_sphere(l_max);
      const linstab_reduced::ReducedCaseReport cases =
          linstab_reduced::classify_case_reduced(*eq, p, spec);
      row.instability_case = cases.instability_case;
      for (int l = 1; l <= l_max; ++l) {
        const double mu = static_cast<double>(l) * (l + 1);
        const linstab_reduced::QuadraticRoots roots =
            linstab_reduced::quadratic_dispersion_roots(mu, *eq, p);
        row.verdicts[l - 1] =
            roots.positive_root ? Verdict::Unstable : Verdict::Stable;
      }
    } else {
      const linstab_full::CaseReport cases = linstab_full::classify_case(*eq, p);
      row.instability_case = cases.instability_case;
      for (int l = 1; l <= l_max; ++l) {
        row.verdicts[l - 1] = linstab_full::mode_instability(l, *eq, p).verdict;
      }
    }
  } catch (const Error& e) {
    row.error = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

int scan_thread_count() {
  if (const char* env = std::getenv("POLARITY_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<ScanRow> run_scan(const RunConfig& cfg) {
  if (!cfg.scan) {
    throw Error(ErrorCode::ValidationError, "scan requires a scan spec");
  }
  const std::vector<double> points = scan_points(*cfg.scan);
  const int l_max = cfg.stability_l_max;
  std::vector<ScanRow> rows(points.size());

  const int threads =
      std::min<int>(scan_thread_count(), static_cast<int>(points.size()));
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (size_t i = cursor.fetch_add(1); i < points.size();
         i = cursor.fetch_add(1)) {
      rows[i] = evaluate_point(cfg, static_cast<int>(i), points[i], l_max);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows, int l_max,
                     const std::string& param_name) {
  std::string out = "index," + param_name + ",equilibrium_found,S";
  for (int l = 1; l <= l_max; ++l) out += ",verdict_l" + std::to_string(l);
  out += ",case,error\n";
  for (const ScanRow& row : rows) {
    out += std::to_string(row.index) + "," + format_g17(row.value) + "," +
           (row.equilibrium_found ? "1" : "0") + "," +
           (row.equilibrium_found ? format_g17(row.S) : std::string());
    for (const Verdict verdict : row.verdicts) {
      out += ",";
      if (row.error.empty() && row.equilibrium_found) {
        out += linstab_full::verdict_name(verdict);
      }
    }
    out += ",";
    if (row.error.empty() && row.equilibrium_found) {
      out += linstab_full::case_name(row.instability_case);
    }
    std::string sanitized = row.error;
    for (char& c : sanitized) {
      if (c == ',' || c == '\n') c = ';';
    }
    out += "," + sanitized + "\n";
  }
  return out;
}

}  // namespace polarity::cli
