#include "bayesreg/adaptive.hpp"

#include "bayesreg/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayesreg {

namespace {

constexpr std::uint64_t kMeasuredTag = 0x6d65617375726564ULL;

Rng measured_stream(std::uint64_t seed, int step) {
  return make_stream(seed, {kMeasuredTag, static_cast<std::uint64_t>(step)});
}

}  // namespace

void AdaptiveConfig::validate(const StatisticalModel& model) const {
  if (K < 1) {
    throw std::invalid_argument("K must be at least 1");
  }
  if (N < K || N % K != 0) {
    throw std::invalid_argument("N must be a positive multiple of K");
  }
  if (L < 1) {
    throw std::invalid_argument("L must be at least 1");
  }
  if (n_m < 1) {
    throw std::invalid_argument("n_m must be at least 1");
  }
  if (initial_setting.size() != model.setting_dim()) {
    throw std::invalid_argument("initial setting length differs from the model's setting dimension");
  }
  if (!model.setting_space().contains(initial_setting)) {
    throw std::invalid_argument("initial setting lies outside the setting box");
  }
}

double mrse_objective(const RegionSpec& spec, const FisherMatrix& fisher,
                      const ParamSpace<double>& space) {
  try {
    switch (spec.kind) {
      case RegionSpec::Kind::FixedSize:
        return mrse_credible_fixed_s(spec.value, fisher, space);
      case RegionSpec::Kind::FixedCredibility:
        return mrse_credible_fixed_c(spec.value, fisher);
      case RegionSpec::Kind::Plausible: {
        const double lambda = std::min(lambda_crit(fisher, space).value, 1.0);
        return mrse_asymptotic(lambda, fisher);
      }
    }
  } catch (const SingularFisherError&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

RegionProps<double> region_props_for(const RegionSpec& spec, const FisherMatrix& fisher,
                                     const ParamSpace<double>& space) {
  const int d = static_cast<int>(fisher.rows());
  RegionProps<double> props;
  try {
    switch (spec.kind) {
      case RegionSpec::Kind::FixedSize: {
        props.lambda = lambda_of_size(spec.value, fisher, space);
        props.size = spec.value;
        props.credibility = props.lambda > 0.0 ? credibility_of_lambda(d, props.lambda) : 1.0;
        props.case1_valid = props.lambda > 0.0;
        break;
      }
      case RegionSpec::Kind::FixedCredibility: {
        props.lambda = lambda_of_credibility(d, spec.value);
        props.credibility = spec.value;
        props.size = size_from_credibility(spec.value, fisher, space);
        props.case1_valid = props.size <= 1.0;
        break;
      }
      case RegionSpec::Kind::Plausible:
        props = size_of_lambda(std::min(lambda_crit(fisher, space).value, 1.0), fisher, space);
        break;
    }
  } catch (const SingularFisherError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    props = {nan, nan, nan, false};
  }
  return props;
}

std::vector<VectorXd> settings_grid(const ParamSpace<double>& space, int n_m) {
  if (n_m < 1) {
    throw std::invalid_argument("settings_grid: n_m must be at least 1");
  }
  const int dm = space.dim();
  if (dm > 2) {
    throw std::invalid_argument("settings_grid: setting dimension above 2 is not supported");
  }
  if (n_m == 1) {
    return {space.lower()};
  }
  const int per_axis =
      dm == 1 ? n_m : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_m)) - 1e-12));
  auto coord = [&](int axis, int i) {
    if (i == per_axis - 1) {
      return space.upper()(axis);
    }
    return space.lower()(axis) + space.edges()(axis) * i / (per_axis - 1);
  };
  std::vector<VectorXd> grid;
  if (dm == 1) {
    for (int i = 0; i < per_axis; ++i) {
      grid.push_back(VectorXd::Constant(1, coord(0, i)));
    }
  } else {
    for (int i = 0; i < per_axis; ++i) {
      for (int j = 0; j < per_axis; ++j) {
        grid.push_back((VectorXd(2) << coord(0, i), coord(1, j)).finished());
      }
    }
  }
  return grid;
}

VectorXd choose_setting(const StatisticalModel& model, std::span<const BatchSummary> accumulated,
                        const VectorXd& rho0, const AdaptiveConfig& config, int step,
                        const std::vector<VectorXd>& grid, SelectionDiagnostics* diagnostics) {
  if (grid.empty()) {
    throw std::invalid_argument("choose_setting: empty settings grid");
  }
  const std::size_t n_grid = grid.size();
  const auto L = static_cast<std::size_t>(config.L);
  const std::int64_t copies = config.copies_per_step();

  MLOptions projection = config.ml;
  projection.param_tol = config.projection_tol;

  std::vector<double> values(n_grid * L, 0.0);
  std::vector<char> dropped(n_grid * L, 0);
  parallel_for(n_grid * L, [&](std::size_t cell) {
    const std::size_t j = cell / L;
    const std::size_t l = cell % L;
    const auto k = static_cast<std::uint64_t>(step);
    Rng rng = config.common_streams ? make_stream(config.seed, {k, l}) : make_stream(config.seed, {k, j, l});
    std::vector<BatchSummary> combined(accumulated.begin(), accumulated.end());
    combined.push_back({grid[j], model.sample_stats(rho0, grid[j], copies, rng)});
    const MLResult fit = ml_refine(model, combined, rho0, projection);
    if (!fit.converged) {
      dropped[cell] = 1;
      return;
    }
    values[cell] = mrse_objective(config.spec, fit.fisher_at_ml, model.param_space());
  });

  SelectionDiagnostics diag;
  diag.objective.assign(n_grid, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n_grid; ++j) {
    double sum = 0.0;
    int kept = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (dropped[j * L + l]) {
        ++diag.dropped_replicates;
      } else {
        sum += values[j * L + l];
        ++kept;
      }
    }
    if (kept == 0) {
      throw std::runtime_error("choose_setting: every projected ML fit failed for a grid setting");
    }
    diag.objective[j] = sum / kept;
  }
  diag.chosen = 0;
  for (std::size_t j = 1; j < n_grid; ++j) {
    if (diag.objective[j] < diag.objective[diag.chosen]) {
      diag.chosen = j;
    }
  }
  const VectorXd chosen = grid[diag.chosen];
  if (diagnostics) {
    *diagnostics = std::move(diag);
  }
  return chosen;
}

namespace {

RunRecord run_scheme(const StatisticalModel& model, const VectorXd& true_params,
                     const AdaptiveConfig& config, bool adaptive) {
  config.validate(model);
  if (true_params.size() != model.dim() || !model.param_space().contains(true_params)) {
    throw std::invalid_argument("true parameter must lie in the parameter box");
  }
  const auto grid = adaptive ? settings_grid(model.setting_space(), config.n_m)
                             : std::vector<VectorXd>{};
  const auto& space = model.param_space();

  RunRecord record;
  record.model = model.name();
  record.scheme = adaptive ? "adaptive" : "nonadaptive";
  record.spec = config.spec;
  record.true_params = true_params;

  std::vector<BatchSummary> data;
  VectorXd setting = config.initial_setting;
  for (int k = 1; k <= config.K; ++k) {
    Rng rng = measured_stream(config.seed, k);
    data.push_back({setting, model.sample_stats(true_params, setting, config.copies_per_step(), rng)});
    const MLResult ml = ml_estimate(model, data, config.ml);

    StepRecord step;
    step.k = k;
    step.setting = setting;
    step.ml = ml.estimate;
    step.fisher_ml = ml.fisher_at_ml;
    step.mrse_pred = mrse_objective(config.spec, ml.fisher_at_ml, space);
    step.mrse_true = mrse_objective(config.spec, fisher_at(model, data, true_params).matrix, space);
    const RegionProps<double> props = region_props_for(config.spec, ml.fisher_at_ml, space);
    step.size = props.size;
    step.credibility = props.credibility;
    step.lambda = props.lambda;
    try {
      step.lambda_crit_flag = lambda_crit(ml.fisher_at_ml, space).degenerate();
    } catch (const SingularFisherError&) {
      step.lambda_crit_flag = true;
    }

    if (adaptive && k < config.K) {
      SelectionDiagnostics diag;
      setting = choose_setting(model, data, ml.estimate, config, k, grid, &diag);
      step.selection_objective = diag.objective[diag.chosen];
      step.dropped_replicates = diag.dropped_replicates;
    }
    record.steps.push_back(std::move(step));
  }
  return record;
}

}  // namespace

RunRecord run_adaptive(const StatisticalModel& model, const VectorXd& true_params,
                       const AdaptiveConfig& config) {
  return run_scheme(model, true_params, config, true);
}

RunRecord run_nonadaptive(const StatisticalModel& model, const VectorXd& true_params,
                          const AdaptiveConfig& config) {
  return run_scheme(model, true_params, config, false);
}

}  // namespace bayesreg
