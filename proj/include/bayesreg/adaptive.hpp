#ifndef BAYESREG_ADAPTIVE_HPP
#define BAYESREG_ADAPTIVE_HPP

// Greedy MRSE-minimising setting selection and the fixed-setting baseline.

#include "bayesreg/inference.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bayesreg {

struct AdaptiveConfig {
  int K = 10;              // steps
  std::int64_t N = 1000;   // total copies, N / K per step
  int L = 20;              // simulated datasets per candidate setting
  int n_m = 32;            // settings-grid count
  RegionSpec spec = RegionSpec::plausible();
  VectorXd initial_setting;
  std::uint64_t seed = 1;
  MLOptions ml;            // for the measured data
  double projection_tol = 1e-6;  // simplex tolerance of the projected ML fits
  /// Replicate l reuses one stream across all grid settings, so settings are
  /// compared on paired simulated data. Off: a separate stream per (setting, replicate).
  bool common_streams = false;

  std::int64_t copies_per_step() const { return N / K; }

  /// Throws std::invalid_argument when the configuration does not fit the model.
  void validate(const StatisticalModel& model) const;
};

struct StepRecord {
  int k = 0;  // 1-based
  VectorXd setting;
  VectorXd ml;
  FisherMatrix fisher_ml;
  double mrse_pred = 0.0;  // objective at the Fisher of the ML estimate
  double mrse_true = std::numeric_limits<double>::quiet_NaN();  // objective at the true Fisher
  double size = 0.0;
  double credibility = 0.0;
  double lambda = 1.0;
  bool lambda_crit_flag = false;  // lambda_crit >= 1 at the ML Fisher
  /// Averaged objective of the setting chosen for the next step; NaN on the last step.
  double selection_objective = std::numeric_limits<double>::quiet_NaN();
  int dropped_replicates = 0;
};

struct RunRecord {
  std::string model;
  std::string scheme;  // "adaptive" or "nonadaptive"
  RegionSpec spec;
  VectorXd true_params;
  std::vector<StepRecord> steps;
};

/// MRSE of the region selected by `spec` for Fisher matrix F; +inf when F is
/// not positive definite. The plausible variant uses lambda = min(lambda_crit, 1).
double mrse_objective(const RegionSpec& spec, const FisherMatrix& fisher,
                      const ParamSpace<double>& space);

/// Region properties reported alongside the objective.
RegionProps<double> region_props_for(const RegionSpec& spec, const FisherMatrix& fisher,
                                     const ParamSpace<double>& space);

/// Uniform lattice over the setting box with endpoints: n_m points for one
/// setting dimension, ceil(sqrt(n_m)) per axis for two (first axis outer).
/// n_m = 1 gives the lower corner.
std::vector<VectorXd> settings_grid(const ParamSpace<double>& space, int n_m);

struct SelectionDiagnostics {
  std::vector<double> objective;  // averaged over surviving replicates, per grid point
  std::size_t chosen = 0;
  int dropped_replicates = 0;
};

/// One greedy selection. `step` is the 1-based index of the step whose data
/// has just been collected; `rho0` is the ML estimate of `accumulated`.
VectorXd choose_setting(const StatisticalModel& model, std::span<const BatchSummary> accumulated,
                        const VectorXd& rho0, const AdaptiveConfig& config, int step,
                        const std::vector<VectorXd>& grid, SelectionDiagnostics* diagnostics = nullptr);

/// K adaptive steps against data drawn from `true_params`.
RunRecord run_adaptive(const StatisticalModel& model, const VectorXd& true_params,
                       const AdaptiveConfig& config);

/// Same data streams and records, with config.initial_setting throughout.
RunRecord run_nonadaptive(const StatisticalModel& model, const VectorXd& true_params,
                          const AdaptiveConfig& config);

}  // namespace bayesreg

#endif  // BAYESREG_ADAPTIVE_HPP
