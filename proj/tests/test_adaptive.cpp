#include "bayesreg/adaptive.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace bayesreg;

namespace {

constexpr double kPi = oracle::kPi;

AdaptiveConfig homodyne_config() {
  AdaptiveConfig c;
  c.N = 400;
  c.K = 4;
  c.L = 4;
  c.n_m = 8;
  c.initial_setting = VectorXd::Constant(1, 1.837);
  c.seed = 11;
  return c;
}

bool same(const RunRecord& a, const RunRecord& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    const auto& x = a.steps[k];
    const auto& y = b.steps[k];
    if (x.setting != y.setting || x.ml != y.ml || x.fisher_ml != y.fisher_ml) return false;
    if (x.mrse_pred != y.mrse_pred || x.mrse_true != y.mrse_true) return false;
    if (x.size != y.size || x.credibility != y.credibility || x.lambda != y.lambda) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("objective matches the region closed forms") {
  gen::Rng rng(40);
  for (int i = 0; i < 200; ++i) {
    const int d = gen::integer(rng, 1, 3);
    const MatrixXd F = gen::spd(rng, d, 3.0);
    const auto space = ParamSpace<double>::cube(d, 0.0, 1.0);
    const double lc = lambda_crit(F, space).value;
    if (lc < 1.0) {
      CHECK(mrse_objective(RegionSpec::plausible(), F, space) == doctest::Approx(mrse_plausible(F, space)).epsilon(1e-10));
    } else {
      CHECK(mrse_objective(RegionSpec::plausible(), F, space) == doctest::Approx(trace_inverse(F)).epsilon(1e-12));
    }
    CHECK(mrse_objective(RegionSpec::fixed_credibility(0.9), F, space) ==
          doctest::Approx(mrse_credible_fixed_c(0.9, F)).epsilon(1e-12));
    CHECK(mrse_objective(RegionSpec::fixed_credibility(1e-12), F, space) ==
          doctest::Approx(trace_inverse(F)).epsilon(1e-6));
    for (const RegionSpec& spec :
         {RegionSpec::plausible(), RegionSpec::fixed_size(0.05), RegionSpec::fixed_credibility(0.95)}) {
      const double once = mrse_objective(spec, F, space);
      const double twice = mrse_objective(spec, MatrixXd(2.0 * F), space);
      CHECK(twice < once);
    }
  }
  const MatrixXd singular = MatrixXd::Zero(2, 2);
  CHECK(std::isinf(mrse_objective(RegionSpec::plausible(), singular, ParamSpace<double>::cube(2, 0.0, 1.0))));
}

TEST_CASE("settings grid") {
  const auto line = settings_grid(ParamSpace<double>::interval(0.0, kPi), 5);
  REQUIRE(line.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(line[i](0) - i * kPi / 4) < 1e-15);

  const auto box = ParamSpace<double>::cube(2, 0.0, 2.0);
  const auto square = settings_grid(box, 9);
  REQUIRE(square.size() == 9);
  CHECK(square[1](0) == 0.0);
  CHECK(square[1](1) == 1.0);
  CHECK(square[3](0) == 1.0);
  const auto rounded = settings_grid(box, 10);
  CHECK(rounded.size() == 16);
  for (const auto& p : rounded) CHECK(box.contains(p));
  CHECK(settings_grid(box, 1).front() == box.lower());
  const auto again = settings_grid(box, 10);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == rounded[i]);
}

TEST_CASE("greedy selection avoids the zero-information setting") {
  const auto model = make_model("homodyne", 0.7);
  const VectorXd truth = VectorXd::Constant(1, 1.179);
  const VectorXd start = VectorXd::Constant(1, 1.837);
  Rng rng = make_stream(3, {0});
  std::vector<BatchSummary> data{{start, model->sample_stats(truth, start, 100, rng)}};
  const MLResult ml = ml_estimate(*model, data);
  const double good = homodyne_phase_opt_setting(ml.estimate(0), 0.7).theta;
  AdaptiveConfig config = homodyne_config();
  config.L = 30;
  config.N = 1000;
  config.K = 10;
  for (int step = 1; step <= 5; ++step) {
    for (bool good_first : {true, false}) {
      std::vector<VectorXd> grid{VectorXd::Constant(1, good), ml.estimate};
      if (!good_first) std::swap(grid[0], grid[1]);
      SelectionDiagnostics diag;
      const VectorXd chosen = choose_setting(*model, data, ml.estimate, config, step, grid, &diag);
      CHECK(chosen(0) == good);
      CHECK(diag.objective.size() == 2);
      CHECK(diag.dropped_replicates == 0);
    }
  }
}

TEST_CASE("run records") {
  const auto model = make_model("homodyne", 0.7);
  const VectorXd truth = VectorXd::Constant(1, 1.179);
  AdaptiveConfig config = homodyne_config();

  const RunRecord run = run_adaptive(*model, truth, config);
  CHECK(run.steps.size() == 4);
  CHECK(config.copies_per_step() * config.K == config.N);
  CHECK(run.steps.front().setting == config.initial_setting);
  CHECK(std::isnan(run.steps.back().selection_objective));
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    CHECK(run.steps[k].k == static_cast<int>(k) + 1);
    CHECK(std::isfinite(run.steps[k].mrse_true));
  }

  config.K = 1;
  config.N = 100;
  const RunRecord single = run_adaptive(*model, truth, config);
  REQUIRE(single.steps.size() == 1);
  CHECK(single.steps[0].setting == config.initial_setting);

  config.K = 2;
  config.N = 101;
  CHECK_THROWS_AS(config.validate(*model), std::invalid_argument);
}

TEST_CASE("degenerate grid reproduces the nonadaptive scheme") {
  for (const char* name : {"homodyne", "three-path"}) {
    const auto model = make_model(name, 0.7);
    AdaptiveConfig config;
    config.N = 300;
    config.K = 3;
    config.L = 1;
    config.n_m = 1;
    config.initial_setting = model->setting_space().lower();
    const VectorXd truth = model->param_space().lower() + 0.6 * model->param_space().edges();
    const RunRecord a = run_adaptive(*model, truth, config);
    const RunRecord b = run_nonadaptive(*model, truth, config);
    CHECK(same(a, b));
    CHECK(a.scheme == "adaptive");
    CHECK(b.scheme == "nonadaptive");
  }
}

TEST_CASE("runs are reproducible regardless of thread count") {
  const auto model = make_model("squeezed");
  AdaptiveConfig config;
  config.N = 2000;
  config.K = 2;
  config.L = 3;
  config.n_m = 16;
  config.initial_setting = (VectorXd(2) << 0.27, 1.0).finished();
  const VectorXd truth = (VectorXd(2) << 3.258, 1.0517).finished();
  const RunRecord a = run_adaptive(*model, truth, config);
  const RunRecord b = run_adaptive(*model, truth, config);
  CHECK(same(a, b));
  ::setenv("BAYESREG_THREADS", "1", 1);
  const RunRecord c = run_adaptive(*model, truth, config);
  ::unsetenv("BAYESREG_THREADS");
  CHECK(same(a, c));
  config.seed = 2;
  const RunRecord d = run_adaptive(*model, truth, config);
  CHECK_FALSE(same(a, d));
}

TEST_CASE("true-parameter MRSE decays as 1/N under a fixed setting") {
  const auto model = make_model("three-path");
  AdaptiveConfig config;
  config.N = 5000;
  config.K = 10;
  config.spec = RegionSpec::fixed_credibility(0.9);
  config.initial_setting = VectorXd::Zero(2);
  const RunRecord run = run_nonadaptive(*model, (VectorXd(2) << 0.5, 1.0).finished(), config);
  const double first = run.steps.front().mrse_true;
  for (const auto& s : run.steps) {
    CHECK(s.setting == config.initial_setting);
    CHECK(s.mrse_true * s.k == doctest::Approx(first).epsilon(1e-10));
  }
}
