// bayesreg: region properties, validation suites and adaptive campaigns.
//
// Exit codes: 0 success, 1 numerical or statistical failure, 2 usage or
// config error.

#include "bayesreg/adaptive.hpp"
#include "bayesreg/parallel.hpp"
#include "bayesreg/serialize.hpp"
#include "bayesreg/validation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace bayesreg;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

const char* kCsvHelp =
    "CSV columns (one row per run and step):\n"
    "  run               replica index, from 0\n"
    "  k                 step index, from 1\n"
    "  setting_i         measurement setting used in step k\n"
    "  ml_i              ML estimate after step k\n"
    "  mrse_pred         region MRSE at the Fisher information of the ML estimate\n"
    "  mrse_true         region MRSE at the Fisher information of the true parameter\n"
    "  s, c, lambda      size, credibility and lambda of the reported region\n"
    "  lambda_crit_flag  1 when lambda_crit >= 1 (no proper plausible region)\n"
    "JSON output carries the schema string \"bayesreg/1\".";

ExperimentConfig default_config(const std::string& model) {
  json j = {{"model", model}};
  if (model == "homodyne") {
    j["zeta"] = 0.7;
    j["truth"] = {{"phi", 1.179}};
    j["initial_setting"] = {{"theta", 1.837}};
  } else if (model == "squeezed") {
    j["truth"] = {{"nu", 3.2580}, {"alpha", 1.0517}};
    j["initial_setting"] = {{"theta", {0.27, 1.0}}};
  } else if (model == "three-path") {
    j["truth"] = {{"phi", {0.5, 1.0}}};
    j["initial_setting"] = {{"psi1", 0.0}, {"psi2", 0.0}};
  }
  return parse_config(j);
}

struct SimulateArgs {
  std::string config;
  std::optional<std::string> model, scheme, region, out;
  std::optional<double> s0, c0;
  std::optional<std::int64_t> N;
  std::optional<int> K, L, nm, runs;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a) {
  ExperimentConfig c = a.config.empty() ? default_config(a.model.value_or("homodyne"))
                                        : load_config(a.config);
  if (a.model && *a.model != c.model) {
    const ExperimentConfig d = default_config(*a.model);
    c.model = d.model;
    c.true_params = d.true_params;
    c.run.initial_setting = d.run.initial_setting;
  }
  if (a.scheme) c.scheme = *a.scheme;
  if (a.region || a.s0 || a.c0) {
    const double s0 = a.s0.value_or(c.run.spec.kind == RegionSpec::Kind::FixedSize ? c.run.spec.value : 0.05);
    const double c0 = a.c0.value_or(c.run.spec.kind == RegionSpec::Kind::FixedCredibility ? c.run.spec.value : 0.95);
    c.run.spec = parse_region(a.region.value_or(c.run.spec.name()), s0, c0);
  }
  if (a.N) c.run.N = *a.N;
  if (a.K) c.run.K = *a.K;
  if (a.L) c.run.L = *a.L;
  if (a.nm) c.run.n_m = *a.nm;
  if (a.runs) c.runs = *a.runs;
  if (a.seed) c.run.seed = *a.seed;
  if (a.out) c.out = *a.out;
  c.validate();

  const auto model = c.make();
  std::vector<RunRecord> records(static_cast<std::size_t>(c.runs));
  parallel_for(records.size(), [&](std::size_t r) {
    AdaptiveConfig run = c.run;
    run.seed = stream_id(c.run.seed, {r});
    records[r] = c.scheme == "adaptive" ? run_adaptive(*model, c.true_params, run)
                                        : run_nonadaptive(*model, c.true_params, run);
  });

  if (c.out.empty()) {
    write_csv(std::cout, records);
    return kOk;
  }
  std::ofstream csv(c.out + ".csv");
  std::ofstream js(c.out + ".json");
  if (!csv || !js) {
    throw ConfigError("cannot write output files with stem " + c.out);
  }
  write_csv(csv, records);
  js << runs_to_json(c, records).dump(1) << '\n';
  return kOk;
}

struct RegionArgs {
  int d = 1;
  std::vector<double> fisher;
  double volume = 1.0;
  std::optional<double> lambda, c, s;
};

int cmd_region_props(const RegionArgs& a) {
  if (a.d < 1) {
    throw ConfigError("--d must be at least 1");
  }
  if (static_cast<int>(a.fisher.size()) != a.d * a.d) {
    throw ConfigError("--fisher needs d*d entries in row-major order");
  }
  if (!(a.volume > 0.0)) {
    throw ConfigError("--volume must be positive");
  }
  if ((a.lambda ? 1 : 0) + (a.c ? 1 : 0) + (a.s ? 1 : 0) > 1) {
    throw ConfigError("give at most one of --lambda, --c, --s");
  }
  FisherMatrix F(a.d, a.d);
  for (int i = 0; i < a.d; ++i) {
    for (int j = 0; j < a.d; ++j) {
      F(i, j) = a.fisher[static_cast<std::size_t>(i * a.d + j)];
    }
  }
  if (!F.allFinite() || (F - F.transpose()).cwiseAbs().maxCoeff() > 1e-12 * F.cwiseAbs().maxCoeff()) {
    throw ConfigError("--fisher must be a finite symmetric matrix");
  }
  // Region formulas only need the volume; a cube with that volume stands in for R0.
  const auto space = ParamSpace<double>::cube(a.d, 0.0, std::pow(a.volume, 1.0 / a.d));
  RegionProps<double> props;
  CriticalLambda<double> crit{1.0};
  try {
    crit = lambda_crit(F, space);
    if (a.lambda) {
      props = size_of_lambda(*a.lambda, F, space);
    } else if (a.c) {
      props.credibility = *a.c;
      props.lambda = lambda_of_credibility(a.d, *a.c);
      props.size = size_from_credibility(*a.c, F, space);
      props.case1_valid = props.size <= 1.0;
    } else if (a.s) {
      props.size = *a.s;
      props.lambda = lambda_of_size(*a.s, F, space);
      props.credibility = props.lambda > 0.0 ? credibility_of_lambda(a.d, props.lambda) : 1.0;
      props.case1_valid = props.lambda > 0.0 && *a.s <= 1.0;
    } else {
      props = size_of_lambda(std::min(crit.value, 1.0), F, space);
    }
  } catch (const SingularFisherError& e) {
    throw ConfigError(std::string("--fisher: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  json out = {{"schema", kSchema},
              {"d", a.d},
              {"volume", a.volume},
              {"lambda_crit", crit.value},
              {"lambda_crit_degenerate", crit.degenerate()},
              {"lambda", props.lambda},
              {"size", props.size},
              {"credibility", props.credibility},
              {"case1_valid", props.case1_valid},
              {"trace_inverse", trace_inverse(F)},
              {"mrse", mrse_asymptotic(props.lambda > 0.0 ? props.lambda : 1e-300, F)}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_validate(const std::string& suite, const ValidationOptions& options) {
  const auto& names = validation_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("unknown suite \"" + suite + "\"");
  }
  const ValidationReport report = run_validation(suite, options);
  json out = {{"schema", kSchema},
              {"suite", report.suite},
              {"passed", report.passed},
              {"details", report.details}};
  std::cout << out.dump(2) << '\n';
  return report.passed ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian error-region accuracy for ML estimators"};
  app.require_subcommand(1);

  RegionArgs region;
  auto* rp = app.add_subcommand("region-props", "Size, credibility and lambda of a Case-1 region");
  rp->add_option("--d", region.d, "Parameter dimension")->required();
  rp->add_option("--fisher", region.fisher, "Fisher matrix entries, row-major")->required();
  rp->add_option("--volume", region.volume, "Parameter-box volume V");
  rp->add_option("--lambda", region.lambda, "Likelihood threshold in (0, 1]");
  rp->add_option("--c", region.c, "Credibility in (0, 1)");
  rp->add_option("--s", region.s, "Size in (0, 1]");

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate", "Adaptive or nonadaptive campaign");
  sm->add_option("--config", sim.config, "JSON experiment config");
  sm->add_option("--model", sim.model, "homodyne | three-path | squeezed");
  sm->add_option("--scheme", sim.scheme, "adaptive | nonadaptive");
  sm->add_option("--region", sim.region, "fixed-s | fixed-c | plausible");
  sm->add_option("--s0", sim.s0, "Fixed size");
  sm->add_option("--c0", sim.c0, "Fixed credibility");
  sm->add_option("--N", sim.N, "Total copies");
  sm->add_option("--K", sim.K, "Steps");
  sm->add_option("--L", sim.L, "Simulated datasets per candidate setting");
  sm->add_option("--nm", sim.nm, "Settings-grid count");
  sm->add_option("--runs", sim.runs, "Replicas");
  sm->add_option("--seed", sim.seed, "Root seed");
  sm->add_option("--out", sim.out, "Output stem for .csv and .json; CSV to stdout if absent");
  sm->footer(kCsvHelp);

  std::string suite;
  ValidationOptions vopt;
  auto* va = app.add_subcommand("validate", "Run a self-check suite: mc-region, lemma, conservativeness");
  va->add_option("suite", suite, "Suite name")->required();
  va->add_option("--cases", vopt.cases, "Randomised cases");
  va->add_option("--seed", vopt.seed, "Root seed");
  va->add_option("--samples", vopt.samples, "Monte Carlo draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (rp->parsed()) {
      return cmd_region_props(region);
    }
    if (sm->parsed()) {
      return cmd_simulate(sim);
    }
    return cmd_validate(suite, vopt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
