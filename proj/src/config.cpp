#include "polarity/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "polarity/errors.hpp"

namespace polarity::cli {

namespace {

using nlohmann::json;

class Violations {
 public:
  void add(const std::string& msg) {
    if (!text_.empty()) text_ += "; ";
    text_ += msg;
  }
  bool any() const { return !text_.empty(); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where, Violations& v) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) {
      v.add("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double read_number(const json& obj, const std::string& key, double fallback,
                   Violations& v) {
  if (!obj.contains(key)) return fallback;
  const json& field = obj.at(key);
  if (!field.is_number()) {
    v.add("field '" + key + "' must be a number");
    return fallback;
  }
  return field.get<double>();
}

std::uint64_t read_seed(const json& obj, const std::string& key,
                        std::uint64_t fallback, Violations& v) {
  if (!obj.contains(key)) return fallback;
  const json& field = obj.at(key);
  if (!field.is_number_integer() && !field.is_number_unsigned()) {
    v.add("field '" + key + "' must be an integer");
    return fallback;
  }
  return field.get<std::uint64_t>();
}

int read_int(const json& obj, const std::string& key, int fallback,
             Violations& v) {
  if (!obj.contains(key)) return fallback;
  const json& field = obj.at(key);
  if (!field.is_number_integer()) {
    v.add("field '" + key + "' must be an integer");
    return fallback;
  }
  return field.get<int>();
}

void parse_params(const json& obj, kinetics::KineticParams& p, Violations& v) {
  reject_unknown_keys(obj,
                      {"a1", "a2", "a3", "a4", "a5", "a6", "a_m6", "gamma",
                       "d", "D", "V_init"},
                      "params", v);
  p.a1 = read_number(obj, "a1", p.a1, v);
  p.a2 = read_number(obj, "a2", p.a2, v);
  p.a3 = read_number(obj, "a3", p.a3, v);
  p.a4 = read_number(obj, "a4", p.a4, v);
  p.a5 = read_number(obj, "a5", p.a5, v);
  p.a6 = read_number(obj, "a6", p.a6, v);
  p.a_m6 = read_number(obj, "a_m6", p.a_m6, v);
  p.gamma = read_number(obj, "gamma", p.gamma, v);
  p.d = read_number(obj, "d", p.d, v);
  p.V_init = read_number(obj, "V_init", p.V_init, v);
  if (obj.contains("D")) {
    const json& field = obj.at("D");
    if (field.is_string()) {
      const std::string s = field.get<std::string>();
      if (s == "inf" || s == "infinity" || s == "Infinity") {
        p.D = kinetics::kInfiniteD;
      } else {
        v.add("field 'D' string must be \"inf\"");
      }
    } else if (field.is_number()) {
      p.D = field.get<double>();
    } else {
      v.add("field 'D' must be a number or \"inf\"");
    }
  }

  auto positive = [&v](double value, const char* name) {
    if (!(value > 0.0)) v.add(std::string("field ") + name + " must be > 0");
  };
  positive(p.a1, "a1");
  positive(p.a2, "a2");
  positive(p.a3, "a3");
  positive(p.a4, "a4");
  positive(p.a5, "a5");
  positive(p.a6, "a6");
  positive(p.a_m6, "a_m6");
  positive(p.gamma, "gamma");
  if (!(p.d >= 0.0)) v.add("field d must be >= 0");
  if (!(p.V_init >= 0.0)) v.add("field V_init must be >= 0");
  if (!(p.D > 0.0)) v.add("field D must be > 0 or \"inf\"");
  if (!(p.a1 < p.a3)) v.add("params require a1 < a3");
}

void parse_sim(const json& obj, sim::SimConfig& cfg, Violations& v) {
  reject_unknown_keys(
      obj,
      {"model", "n_theta", "n_r", "dt", "t_end", "ic", "ic_amplitude",
       "perturb_l", "perturb_amplitude", "snapshot_stride", "field_stride",
       "legendre_l_max"},
      "sim", v);
  if (obj.contains("model")) {
    const std::string m = obj.at("model").is_string()
                              ? obj.at("model").get<std::string>()
                              : std::string();
    if (m == "reduced") {
      cfg.model = sim::Model::Reduced;
    } else if (m == "full") {
      cfg.model = sim::Model::Full;
    } else {
      v.add("sim.model must be \"reduced\" or \"full\"");
    }
  }
  cfg.n_theta = read_int(obj, "n_theta", cfg.n_theta, v);
  cfg.n_r = read_int(obj, "n_r", cfg.n_r, v);
  cfg.dt = read_number(obj, "dt", cfg.dt, v);
  cfg.t_end = read_number(obj, "t_end", cfg.t_end, v);
  cfg.ic_amplitude = read_number(obj, "ic_amplitude", cfg.ic_amplitude, v);
  cfg.perturb_l = read_int(obj, "perturb_l", cfg.perturb_l, v);
  cfg.perturb_amplitude =
      read_number(obj, "perturb_amplitude", cfg.perturb_amplitude, v);
  cfg.snapshot_stride = read_int(obj, "snapshot_stride", cfg.snapshot_stride, v);
  cfg.field_stride = read_int(obj, "field_stride", cfg.field_stride, v);
  cfg.legendre_l_max = read_int(obj, "legendre_l_max", cfg.legendre_l_max, v);
  if (obj.contains("ic")) {
    const std::string ic = obj.at("ic").is_string()
                               ? obj.at("ic").get<std::string>()
                               : std::string();
    if (ic == "random") {
      cfg.ic = sim::InitialConditionKind::RandomUniform;
    } else if (ic == "uniform") {
      cfg.ic = sim::InitialConditionKind::UniformMean;
    } else if (ic == "mode") {
      cfg.ic = sim::InitialConditionKind::ModePerturbation;
    } else {
      v.add("sim.ic must be \"random\", \"uniform\" or \"mode\"");
    }
  }
}

void parse_scan(const json& obj, ScanSpec& spec, Violations& v) {
  reject_unknown_keys(obj, {"param", "lower", "upper", "count", "scale"},
                      "scan", v);
  if (obj.contains("param") && obj.at("param").is_string()) {
    spec.param = obj.at("param").get<std::string>();
  } else {
    v.add("scan.param must be a string");
  }
  spec.lower = read_number(obj, "lower", spec.lower, v);
  spec.upper = read_number(obj, "upper", spec.upper, v);
  spec.count = read_int(obj, "count", spec.count, v);
  if (obj.contains("scale")) {
    const std::string s = obj.at("scale").is_string()
                              ? obj.at("scale").get<std::string>()
                              : std::string();
    if (s == "linear") {
      spec.scale = ScanScale::Linear;
    } else if (s == "log") {
      spec.scale = ScanScale::Log;
    } else {
      v.add("scan.scale must be \"linear\" or \"log\"");
    }
  }
  if (spec.count < 2) v.add("scan.count must be >= 2");
  if (!(spec.upper > spec.lower)) v.add("scan range is empty (upper <= lower)");
  if (spec.scale == ScanScale::Log && !(spec.lower > 0.0)) {
    v.add("log scan requires lower > 0");
  }
  kinetics::KineticParams probe;
  if (!spec.param.empty() && scan_target(probe, spec.param) == nullptr) {
    v.add("scan.param '" + spec.param + "' is not a kinetic parameter");
  }
}

void parse_dimensional(const json& obj, nondim::DimensionalParams& dp,
                       Violations& v) {
  const std::set<std::string> keys = {
      "k1_m2_per_mol_s", "k2_m2_per_mol_s", "k3_mol_per_m2_s",
      "k4_mol_per_m2",   "K5_m2_per_mol",   "g0_mol_per_m2",
      "b6_m2_per_mol_s", "b_m6_per_s",      "D_m2_per_s",
      "du_m2_per_s",     "dv_m2_per_s",     "c_max_mol_per_m2",
      "R_m",             "vol_B_m3",        "area_Gamma_m2",
      "V_init"};
  reject_unknown_keys(obj, keys, "nondim", v);
  dp.k1_m2_per_mol_s = read_number(obj, "k1_m2_per_mol_s", 0.0, v);
  dp.k2_m2_per_mol_s = read_number(obj, "k2_m2_per_mol_s", 0.0, v);
  dp.k3_mol_per_m2_s = read_number(obj, "k3_mol_per_m2_s", 0.0, v);
  dp.k4_mol_per_m2 = read_number(obj, "k4_mol_per_m2", 0.0, v);
  dp.K5_m2_per_mol = read_number(obj, "K5_m2_per_mol", 0.0, v);
  dp.g0_mol_per_m2 = read_number(obj, "g0_mol_per_m2", 0.0, v);
  dp.b6_m2_per_mol_s = read_number(obj, "b6_m2_per_mol_s", 0.0, v);
  dp.b_m6_per_s = read_number(obj, "b_m6_per_s", 0.0, v);
  dp.D_m2_per_s = read_number(obj, "D_m2_per_s", 0.0, v);
  dp.du_m2_per_s = read_number(obj, "du_m2_per_s", 0.0, v);
  dp.dv_m2_per_s = read_number(obj, "dv_m2_per_s", 0.0, v);
  dp.c_max_mol_per_m2 = read_number(obj, "c_max_mol_per_m2", 0.0, v);
  dp.R_m = read_number(obj, "R_m", 0.0, v);
  dp.vol_B_m3 = read_number(obj, "vol_B_m3", 0.0, v);
  dp.area_Gamma_m2 = read_number(obj, "area_Gamma_m2", 0.0, v);
  dp.V_init = read_number(obj, "V_init", 5.1, v);
}

}  // namespace

double* scan_target(kinetics::KineticParams& p, const std::string& name) {
  if (name == "a1") return &p.a1;
  if (name == "a2") return &p.a2;
  if (name == "a3") return &p.a3;
  if (name == "a4") return &p.a4;
  if (name == "a5") return &p.a5;
  if (name == "a6") return &p.a6;
  if (name == "a_m6") return &p.a_m6;
  if (name == "gamma") return &p.gamma;
  if (name == "d") return &p.d;
  if (name == "D") return &p.D;
  if (name == "V_init") return &p.V_init;
  return nullptr;
}

std::vector<double> scan_points(const ScanSpec& spec) {
  if (spec.count < 2 || !(spec.upper > spec.lower) ||
      (spec.scale == ScanScale::Log && !(spec.lower > 0.0))) {
    throw Error(ErrorCode::ValidationError, "invalid scan specification");
  }
  std::vector<double> points(spec.count);
  if (spec.scale == ScanScale::Linear) {
    const double step = (spec.upper - spec.lower) / (spec.count - 1);
    for (int i = 0; i < spec.count; ++i) points[i] = spec.lower + i * step;
  } else {
    const double ll = std::log(spec.lower);
    const double lu = std::log(spec.upper);
    const double step = (lu - ll) / (spec.count - 1);
    for (int i = 0; i < spec.count; ++i) points[i] = std::exp(ll + i * step);
  }
  points.front() = spec.lower;
  points.back() = spec.upper;
  return points;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "config root must be a JSON object");
  }

  Violations v;
  RunConfig cfg;
  reject_unknown_keys(doc,
                      {"params", "sim", "scan", "nondim", "output_dir", "seed",
                       "stability_l_max", "model"},
                      "config", v);

  if (doc.contains("params")) {
    if (doc.at("params").is_object()) {
      parse_params(doc.at("params"), cfg.params, v);
    } else {
      v.add("'params' must be an object");
    }
  } else {
    kinetics::KineticParams defaults;
    parse_params(json::object(), defaults, v);
    cfg.params = defaults;
  }
  if (doc.contains("sim")) {
    if (doc.at("sim").is_object()) {
      parse_sim(doc.at("sim"), cfg.sim, v);
    } else {
      v.add("'sim' must be an object");
    }
  }
  if (doc.contains("scan")) {
    if (doc.at("scan").is_object()) {
      ScanSpec spec;
      parse_scan(doc.at("scan"), spec, v);
      cfg.scan = spec;
    } else {
      v.add("'scan' must be an object");
    }
  }
  if (doc.contains("nondim")) {
    if (doc.at("nondim").is_object()) {
      nondim::DimensionalParams dp;
      parse_dimensional(doc.at("nondim"), dp, v);
      cfg.dimensional = dp;
    } else {
      v.add("'nondim' must be an object");
    }
  }
  if (doc.contains("output_dir")) {
    if (doc.at("output_dir").is_string()) {
      cfg.output_dir = doc.at("output_dir").get<std::string>();
    } else {
      v.add("'output_dir' must be a string");
    }
  }
  cfg.seed = read_seed(doc, "seed", cfg.seed, v);
  cfg.stability_l_max = read_int(doc, "stability_l_max", cfg.stability_l_max, v);
  if (cfg.stability_l_max < 1 || cfg.stability_l_max > 200) {
    v.add("stability_l_max must be in [1, 200]");
  }
  if (doc.contains("model")) {
    const std::string m = doc.at("model").is_string()
                              ? doc.at("model").get<std::string>()
                              : std::string();
    if (m == "full" || m == "reduced") {
      cfg.model_override = m;
    } else {
      v.add("'model' must be \"full\" or \"reduced\"");
    }
  }

  if (v.any()) {
    throw Error(ErrorCode::ValidationError, v.text());
  }
  cfg.sim.params = cfg.params;
  cfg.sim.seed = cfg.seed;
  return cfg;
}

}  // namespace polarity::cli
