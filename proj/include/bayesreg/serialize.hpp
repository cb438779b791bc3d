#ifndef BAYESREG_SERIALIZE_HPP
#define BAYESREG_SERIALIZE_HPP

// JSON experiment configs and CSV / JSON output of run records and oracle reports.

#include "bayesreg/adaptive.hpp"
#include "bayesreg/mc_oracle.hpp"

#include <json.hpp>

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bayesreg {

inline constexpr const char* kSchema = "bayesreg/1";

/// Bad or inconsistent configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string model = "homodyne";
  double zeta = 0.7;  // homodyne squeezing strength
  VectorXd true_params;
  std::string scheme = "adaptive";
  AdaptiveConfig run;
  int runs = 1;
  std::string out;  // output stem; empty writes CSV to stdout

  std::unique_ptr<StatisticalModel> make() const;
  /// Checks model names, ranges and the adaptive-config contract.
  void validate() const;
};

/// Field names per model:
///   homodyne:   truth {"phi"}, setting {"theta"}, plus top-level "zeta"
///   three-path: truth {"phi": [p1, p2]}, setting {"psi1", "psi2"}
///   squeezed:   truth {"nu", "alpha"}, setting {"theta": [t1, t2]}
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

RegionSpec parse_region(const std::string& name, double s0, double c0);

nlohmann::json params_to_json(const std::string& model, const VectorXd& params);
nlohmann::json setting_to_json(const std::string& model, const VectorXd& setting);
VectorXd params_from_json(const std::string& model, const nlohmann::json& j);
VectorXd setting_from_json(const std::string& model, const nlohmann::json& j);

/// CSV columns: run, k, setting_1..setting_dm, ml_1..ml_d, mrse_pred,
/// mrse_true, s, c, lambda, lambda_crit_flag.
std::string csv_header(int setting_dim, int param_dim);
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);

nlohmann::json to_json(const RunRecord& record);
nlohmann::json runs_to_json(const ExperimentConfig& config, const std::vector<RunRecord>& records);

/// Per-batch setting vector and outcome array (integers, doubles or pairs).
nlohmann::json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const StatisticalModel& model, const nlohmann::json& j);

nlohmann::json to_json(const MCRegionEstimate& est);
nlohmann::json to_json(const MCRseEstimate& est);

}  // namespace bayesreg

#endif  // BAYESREG_SERIALIZE_HPP
