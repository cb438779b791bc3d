#include "bayesreg/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bayesreg {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string("missing or non-numeric field \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

VectorXd pair(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2 ||
      !j.at(key)[0].is_number() || !j.at(key)[1].is_number()) {
    throw ConfigError(std::string("field \"") + key + "\" must be a two-element numeric array");
  }
  return (VectorXd(2) << j.at(key)[0].get<double>(), j.at(key)[1].get<double>()).finished();
}

json json_pair(const VectorXd& v) { return json::array({v(0), v(1)}); }

void check_model_name(const std::string& model) {
  if (model != "homodyne" && model != "three-path" && model != "squeezed") {
    throw ConfigError("unknown model \"" + model + "\" (homodyne, three-path, squeezed)");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::unique_ptr<StatisticalModel> ExperimentConfig::make() const {
  check_model_name(model);
  return make_model(model, zeta);
}

void ExperimentConfig::validate() const {
  check_model_name(model);
  if (model == "homodyne" && !(zeta >= 0.0 && std::isfinite(zeta))) {
    throw ConfigError("zeta must be finite and nonnegative");
  }
  if (scheme != "adaptive" && scheme != "nonadaptive") {
    throw ConfigError("scheme must be adaptive or nonadaptive");
  }
  if (runs < 1) {
    throw ConfigError("runs must be at least 1");
  }
  const auto m = make();
  if (true_params.size() != m->dim() || !m->param_space().contains(true_params)) {
    throw ConfigError("true parameter missing or outside the parameter box");
  }
  try {
    run.validate(*m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RegionSpec parse_region(const std::string& name, double s0, double c0) {
  try {
    if (name == "fixed-s") {
      return RegionSpec::fixed_size(s0);
    }
    if (name == "fixed-c") {
      return RegionSpec::fixed_credibility(c0);
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (name == "plausible") {
    return RegionSpec::plausible();
  }
  throw ConfigError("region must be fixed-s, fixed-c or plausible");
}

json params_to_json(const std::string& model, const VectorXd& params) {
  if (model == "homodyne") {
    return {{"phi", params(0)}};
  }
  if (model == "three-path") {
    return {{"phi", json_pair(params)}};
  }
  return {{"nu", params(0)}, {"alpha", params(1)}};
}

json setting_to_json(const std::string& model, const VectorXd& setting) {
  if (model == "homodyne") {
    return {{"theta", setting(0)}};
  }
  if (model == "three-path") {
    return {{"psi1", setting(0)}, {"psi2", setting(1)}};
  }
  return {{"theta", json_pair(setting)}};
}

VectorXd params_from_json(const std::string& model, const json& j) {
  check_model_name(model);
  if (!j.is_object()) {
    throw ConfigError("parameter block must be an object");
  }
  if (model == "homodyne") {
    return VectorXd::Constant(1, number(j, "phi"));
  }
  if (model == "three-path") {
    return pair(j, "phi");
  }
  return (VectorXd(2) << number(j, "nu"), number(j, "alpha")).finished();
}

VectorXd setting_from_json(const std::string& model, const json& j) {
  check_model_name(model);
  if (!j.is_object()) {
    throw ConfigError("setting block must be an object");
  }
  if (model == "homodyne") {
    return VectorXd::Constant(1, number(j, "theta"));
  }
  if (model == "three-path") {
    return (VectorXd(2) << number(j, "psi1"), number(j, "psi2")).finished();
  }
  return pair(j, "theta");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  ExperimentConfig c;
  try {
    c.model = j.value("model", c.model);
    check_model_name(c.model);
    c.zeta = j.value("zeta", c.zeta);
    c.scheme = j.value("scheme", c.scheme);
    c.run.spec = parse_region(j.value("region", std::string("plausible")), j.value("s0", 0.05),
                              j.value("c0", 0.95));
    c.run.N = j.value("N", c.run.N);
    c.run.K = j.value("K", c.run.K);
    c.run.L = j.value("L", c.run.L);
    c.run.n_m = j.value("n_m", c.run.n_m);
    c.run.seed = j.value("seed", c.run.seed);
    c.runs = j.value("runs", c.runs);
    c.out = j.value("out", c.out);
    if (!j.contains("truth")) {
      throw ConfigError("missing \"truth\" block");
    }
    c.true_params = params_from_json(c.model, j.at("truth"));
    if (!j.contains("initial_setting")) {
      throw ConfigError("missing \"initial_setting\" block");
    }
    c.run.initial_setting = setting_from_json(c.model, j.at("initial_setting"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j = {{"model", c.model},
            {"scheme", c.scheme},
            {"region", c.run.spec.name()},
            {"N", c.run.N},
            {"K", c.run.K},
            {"L", c.run.L},
            {"n_m", c.run.n_m},
            {"seed", c.run.seed},
            {"runs", c.runs},
            {"truth", params_to_json(c.model, c.true_params)},
            {"initial_setting", setting_to_json(c.model, c.run.initial_setting)}};
  if (c.model == "homodyne") {
    j["zeta"] = c.zeta;
  }
  if (c.run.spec.kind == RegionSpec::Kind::FixedSize) {
    j["s0"] = c.run.spec.value;
  } else if (c.run.spec.kind == RegionSpec::Kind::FixedCredibility) {
    j["c0"] = c.run.spec.value;
  }
  return j;
}

std::string csv_header(int setting_dim, int param_dim) {
  std::string h = "run,k";
  for (int i = 1; i <= setting_dim; ++i) {
    h += ",setting_" + std::to_string(i);
  }
  for (int i = 1; i <= param_dim; ++i) {
    h += ",ml_" + std::to_string(i);
  }
  return h + ",mrse_pred,mrse_true,s,c,lambda,lambda_crit_flag";
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  if (records.empty() || records.front().steps.empty()) {
    os << csv_header(1, 1) << '\n';
    return;
  }
  const auto& first = records.front().steps.front();
  os << csv_header(static_cast<int>(first.setting.size()), static_cast<int>(first.ml.size()))
     << '\n';
  for (std::size_t run = 0; run < records.size(); ++run) {
    for (const auto& s : records[run].steps) {
      os << run << ',' << s.k;
      for (Eigen::Index i = 0; i < s.setting.size(); ++i) {
        os << ',' << fmt(s.setting(i));
      }
      for (Eigen::Index i = 0; i < s.ml.size(); ++i) {
        os << ',' << fmt(s.ml(i));
      }
      os << ',' << fmt(s.mrse_pred) << ',' << fmt(s.mrse_true) << ',' << fmt(s.size) << ','
         << fmt(s.credibility) << ',' << fmt(s.lambda) << ',' << (s.lambda_crit_flag ? 1 : 0)
         << '\n';
    }
  }
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i));
  }
  return a;
}

}  // namespace

json to_json(const RunRecord& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    json fisher = json::array();
    for (Eigen::Index i = 0; i < s.fisher_ml.rows(); ++i) {
      fisher.push_back(vec(s.fisher_ml.row(i).transpose()));
    }
    steps.push_back({{"k", s.k},
                     {"setting", vec(s.setting)},
                     {"ml", vec(s.ml)},
                     {"fisher_ml", fisher},
                     {"mrse_pred", finite_or_null(s.mrse_pred)},
                     {"mrse_true", finite_or_null(s.mrse_true)},
                     {"s", finite_or_null(s.size)},
                     {"c", finite_or_null(s.credibility)},
                     {"lambda", finite_or_null(s.lambda)},
                     {"lambda_crit_flag", s.lambda_crit_flag},
                     {"selection_objective", finite_or_null(s.selection_objective)},
                     {"dropped_replicates", s.dropped_replicates}});
  }
  return {{"model", r.model},
          {"scheme", r.scheme},
          {"region", r.spec.name()},
          {"true_params", vec(r.true_params)},
          {"steps", steps}};
}

json runs_to_json(const ExperimentConfig& config, const std::vector<RunRecord>& records) {
  json runs = json::array();
  for (const auto& r : records) {
    runs.push_back(to_json(r));
  }
  return {{"schema", kSchema}, {"config", to_json(config)}, {"runs", runs}};
}

json dataset_to_json(const Dataset& data) {
  json batches = json::array();
  for (const auto& b : data.batches()) {
    json outcomes = json::array();
    for (const auto& o : b.outcomes) {
      std::visit([&](const auto& v) { outcomes.push_back(v); }, o);
    }
    batches.push_back({{"setting", vec(b.setting)}, {"outcomes", outcomes}});
  }
  return {{"schema", kSchema}, {"batches", batches}};
}

Dataset dataset_from_json(const StatisticalModel& model, const json& j) {
  Dataset data;
  try {
    for (const auto& jb : j.at("batches")) {
      const auto values = jb.at("setting").get<std::vector<double>>();
      VectorXd setting = Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
      std::vector<Outcome> outcomes;
      for (const auto& jo : jb.at("outcomes")) {
        switch (model.outcome_kind()) {
          case OutcomeKind::Discrete: outcomes.emplace_back(jo.get<int>()); break;
          case OutcomeKind::Continuous: outcomes.emplace_back(jo.get<double>()); break;
          case OutcomeKind::ContinuousPair: outcomes.emplace_back(jo.get<std::array<double, 2>>()); break;
        }
      }
      data.add(Batch(model, std::move(setting), std::move(outcomes)));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
  return data;
}

json to_json(const MCRegionEstimate& e) {
  return {{"lambda", e.lambda},
          {"size", e.size},
          {"size_se", e.size_se},
          {"credibility", finite_or_null(e.credibility)},
          {"credibility_se", finite_or_null(e.credibility_se)},
          {"accepted", e.accepted},
          {"samples", e.samples},
          {"proposal", to_string(e.proposal)},
          {"zero_acceptance", e.zero_acceptance}};
}

json to_json(const MCRseEstimate& e) {
  return {{"rse", finite_or_null(e.rse)},
          {"rse_se", finite_or_null(e.rse_se)},
          {"accepted", e.accepted},
          {"samples", e.samples},
          {"proposal", to_string(e.proposal)},
          {"zero_acceptance", e.zero_acceptance}};
}

}  // namespace bayesreg
