#include "polarity/emit.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "polarity/errors.hpp"

#ifndef POLARITY_VERSION
#define POLARITY_VERSION "unversioned"
#endif

namespace polarity::cli {

namespace fs = std::filesystem;

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string version_string() { return POLARITY_VERSION; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void atomic_write(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error(ErrorCode::IoError,
                "rename to " + target.string() + " failed: " + ec.message());
  }
}

}  // namespace

std::map<std::string, std::string> emit_outputs(
    const std::string& output_dir,
    const std::map<std::string, std::string>& files,
    const std::string& config_echo_json, std::uint64_t seed,
    double wall_time_seconds) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError,
                "cannot create output dir " + output_dir + ": " + ec.message());
  }
  std::map<std::string, std::string> digests;
  for (const auto& [name, content] : files) {
    atomic_write(fs::path(output_dir) / name, content);
    digests[name] = fnv1a_hex(content);
  }

  nlohmann::json summary;
  try {
    summary["config"] = nlohmann::json::parse(config_echo_json);
  } catch (const nlohmann::json::parse_error&) {
    summary["config"] = config_echo_json;
  }
  summary["version"] = version_string();
  summary["seed"] = seed;
  summary["wall_time_s"] = wall_time_seconds;
  summary["digests"] = digests;
  atomic_write(fs::path(output_dir) / "summary.json", summary.dump(2) + "\n");
  return digests;
}

std::string equilibria_csv(const std::vector<kinetics::Equilibrium>& states) {
  std::string out =
      "u,v,V,f_u,f_v,q_u,q_v,q_V,residual_f,residual_q,S\n";
  for (const kinetics::Equilibrium& eq : states) {
    out += format_g17(eq.u_star) + "," + format_g17(eq.v_star) + "," +
           format_g17(eq.V_star) + "," + format_g17(eq.f_u) + "," +
           format_g17(eq.f_v) + "," + format_g17(eq.q_u) + "," +
           format_g17(eq.q_v) + "," + format_g17(eq.q_V) + "," +
           format_g17(eq.residual_f) + "," + format_g17(eq.residual_q) + "," +
           format_g17(kinetics::stability_value_S(eq)) + "\n";
  }
  return out;
}

std::string stability_csv(
    const std::vector<linstab_full::DispersionReport>& rows) {
  std::string out = "l,G0,root_omega,verdict,case\n";
  for (const linstab_full::DispersionReport& row : rows) {
    out += std::to_string(row.l) + "," + format_g17(row.G_at_zero) + ",";
    if (row.root_omega) out += format_g17(*row.root_omega);
    out += ",";
    out += linstab_full::verdict_name(row.verdict);
    out += ",";
    out += linstab_full::case_name(row.instability_case);
    out += "\n";
  }
  return out;
}

std::string reduced_stability_csv(
    const std::vector<double>& mu, const std::vector<double>& constant_term,
    const std::vector<std::optional<double>>& root,
    const std::vector<const char*>& verdict, const char* case_label) {
  std::string out = "l,G0,root_omega,verdict,case\n";
  for (size_t k = 0; k < mu.size(); ++k) {
    // mode index l recovered from mu = l(l+1)
    const int l =
        static_cast<int>(std::lround(0.5 * (std::sqrt(1.0 + 4.0 * mu[k]) - 1.0)));
    out += std::to_string(l) + "," + format_g17(constant_term[k]) + ",";
    if (root[k]) out += format_g17(*root[k]);
    out += ",";
    out += verdict[k];
    out += ",";
    out += case_label;
    out += "\n";
  }
  return out;
}

std::string dispersion_csv(const std::vector<int>& l,
                           const std::vector<double>& omega,
                           const std::vector<double>& G) {
  std::string out = "l,omega,G\n";
  for (size_t k = 0; k < l.size(); ++k) {
    out += std::to_string(l[k]) + "," + format_g17(omega[k]) + "," +
           format_g17(G[k]) + "\n";
  }
  return out;
}

std::string growth_curve_csv(
    const std::vector<linstab_reduced::GrowthPoint>& curve) {
  std::string out = "mu,omega_plus,s\n";
  for (const linstab_reduced::GrowthPoint& point : curve) {
    out += format_g17(point.mu) + ",";
    if (point.omega_plus) out += format_g17(*point.omega_plus);
    out += ",";
    if (point.mode_sum) out += format_g17(*point.mode_sum);
    out += "\n";
  }
  return out;
}

std::string snapshots_csv(const sim::SimRecord& record, bool full_model) {
  std::string out = full_model ? "t,theta,u,v,V_trace\n" : "t,theta,u,v\n";
  for (const sim::Snapshot& snap : record.snapshots) {
    const int n = static_cast<int>(snap.u.size());
    const double dth = std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
      out += format_g17(snap.t) + "," + format_g17((j + 0.5) * dth) + "," +
             format_g17(snap.u[j]) + "," + format_g17(snap.v[j]);
      if (full_model) {
        out += "," + format_g17(snap.V_trace[j]);
      }
      out += "\n";
    }
  }
  return out;
}

std::string diagnostics_csv(const sim::SimRecord& record) {
  const int lmax =
      record.legendre.empty() ? -1
                              : static_cast<int>(record.legendre.front().size()) - 1;
  std::string out = "t,mass,u_min,u_max,v_min,v_max";
  for (int l = 0; l <= lmax; ++l) out += ",a" + std::to_string(l);
  out += "\n";
  for (size_t k = 0; k < record.times.size(); ++k) {
    out += format_g17(record.times[k]) + "," + format_g17(record.mass[k]) +
           "," + format_g17(record.u_min[k]) + "," +
           format_g17(record.u_max[k]) + "," + format_g17(record.v_min[k]) +
           "," + format_g17(record.v_max[k]);
    for (int l = 0; l <= lmax; ++l) {
      out += "," + format_g17(record.legendre[k][l]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace polarity::cli
