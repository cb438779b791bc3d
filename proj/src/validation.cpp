#include "bayesreg/validation.hpp"

#include "bayesreg/mc_oracle.hpp"
#include "bayesreg/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bayesreg {

using nlohmann::json;

namespace {

// Homodyne operating point of the fixed-phase benchmark.
constexpr double kPhi = 1.179;
constexpr double kTheta = 1.837;
constexpr double kZeta = 0.7;

ValidationReport mc_region_suite(const ValidationOptions& opt) {
  const HomodynePhaseModel model(kZeta);
  const VectorXd truth = VectorXd::Constant(1, kPhi);
  const VectorXd setting = VectorXd::Constant(1, kTheta);
  Rng rng = make_stream(opt.seed, {0});
  std::vector<BatchSummary> data{{setting, model.sample_stats(truth, setting, 10000, rng)}};
  const MLResult ml = ml_estimate(model, data);
  const FisherMatrix observed = observed_information(model, data, ml.estimate);

  MCConfig mc;
  mc.samples = opt.samples;
  mc.stream = stream_id(opt.seed, {1});
  const std::vector<double> lambdas{0.5, 0.1, 0.01};
  const auto estimates = mc_region_props(model, data, ml, lambdas, mc);

  ValidationReport report{"mc-region", true, json::object()};
  json rows = json::array();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto& e = estimates[i];
    const RegionProps<double> closed = size_of_lambda(lambdas[i], observed, model.param_space());
    const MCRseEstimate rse = mc_rse(model, data, ml, lambdas[i], truth, mc);
    const double rse_closed = rse_asymptotic(lambdas[i], ml.estimate, truth, observed);
    const bool size_ok = std::abs(e.size - closed.size) <= 3.0 * e.size_se;
    const bool cred_ok = std::abs(e.credibility - closed.credibility) <= 3.0 * e.credibility_se;
    const bool rse_ok = std::abs(rse.rse - rse_closed) <= 0.1 * rse_closed;
    report.passed = report.passed && size_ok && cred_ok && rse_ok && !e.zero_acceptance;
    rows.push_back({{"mc", to_json(e)},
                    {"rse", to_json(rse)},
                    {"size_closed", closed.size},
                    {"credibility_closed", closed.credibility},
                    {"rse_closed", rse_closed},
                    {"size_ok", size_ok},
                    {"credibility_ok", cred_ok},
                    {"rse_ok", rse_ok}});
  }
  report.details = {{"ml", ml.estimate(0)}, {"observed_information", observed(0, 0)},
                    {"lambdas", rows}};
  return report;
}

ValidationReport lemma_suite(const ValidationOptions& opt) {
  Rng rng = make_stream(opt.seed, {2});
  std::uniform_int_distribution<int> length(2, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  int rejected = 0;
  for (int c = 0; c < opt.cases; ++c) {
    const int n = length(rng);
    std::vector<double> ratios(n);
    for (auto& r : ratios) {
      r = unit(rng);
    }
    std::sort(ratios.begin(), ratios.end());
    if (std::adjacent_find(ratios.begin(), ratios.end()) != ratios.end()) {
      continue;  // equal draws, not strictly increasing
    }
    std::vector<double> a(n + 1), b(n + 1);
    double sa = 0.0, sb = 0.0;
    for (int j = 1; j <= n; ++j) {
      b[j] = 0.1 + unit(rng);
      a[j] = ratios[j - 1] * b[j];
      sa += a[j];
      sb += b[j];
    }
    b[0] = 0.1 + unit(rng);
    a[0] = b[0] * sa / sb;
    try {
      if (!lemma_check(a, b).holds) {
        ++failures;
      }
    } catch (const std::invalid_argument&) {
      ++rejected;
    }
  }
  return {"lemma", failures == 0 && rejected == 0,
          {{"cases", opt.cases}, {"failures", failures}, {"rejected", rejected}}};
}

ValidationReport conservativeness_suite(const ValidationOptions& opt) {
  ValidationReport report{"conservativeness", true, json::object()};
  json caps = json::array();
  for (int d = 1; d <= 4; ++d) {
    const double bound = d / (d + 2.0);
    const int points = 200;
    std::vector<double> rse(points);
    for (int i = 0; i < points; ++i) {
      rse[i] = cap_integrals({d, 1.0, static_cast<double>(i) / (points - 1)}).rse;
    }
    bool below = true;
    for (double v : rse) {
      below = below && v <= bound + 1e-12;
    }
    const bool endpoints =
        std::abs(rse.front() - bound) <= 1e-9 && std::abs(rse.back() - bound) <= 1e-9;
    const auto low = std::min_element(rse.begin(), rse.end());
    const bool unimodal = std::is_sorted(rse.begin(), low, std::greater<>()) &&
                          std::is_sorted(low, rse.end());
    const auto slices = cap_slice_sequences(d, 1.0, 50);
    bool lemma_ok = false;
    try {
      lemma_ok = lemma_check(slices.a, slices.b).holds;
    } catch (const std::invalid_argument&) {
      lemma_ok = false;
    }
    report.passed = report.passed && below && endpoints && unimodal && lemma_ok;
    caps.push_back({{"d", d}, {"below_bound", below}, {"endpoint_equality", endpoints},
                    {"unimodal", unimodal}, {"min_rse", *low}, {"slices_lemma", lemma_ok}});
  }

  Rng rng = make_stream(opt.seed, {3});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int identity_failures = 0;
  int order_failures = 0;
  for (int c = 0; c < opt.cases; ++c) {
    const double a = unit(rng);
    const double r_ml = a + 0.01 + unit(rng);
    const double b = r_ml + (r_ml - a) * unit(rng);  // r_ml <= b <= 2 r_ml - a
    const double r = a + (b - a) * unit(rng);
    const double diff = rse_interval_actual(r, a, b) - rse_interval_categorical(r, a, r_ml);
    if (std::abs(diff - rse_interval_difference(r, a, b, r_ml)) > 1e-12) {
      ++identity_failures;
    }
    if (rse_interval_categorical(r_ml, a, r_ml) < rse_interval_actual(r_ml, a, b) - 1e-15) {
      ++order_failures;
    }
  }
  report.passed = report.passed && identity_failures == 0 && order_failures == 0;
  report.details = {{"caps", caps},
                    {"cases", opt.cases},
                    {"identity_failures", identity_failures},
                    {"categorical_below_actual", order_failures}};
  return report;
}

}  // namespace

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names{"mc-region", "lemma", "conservativeness"};
  return names;
}

ValidationReport run_validation(const std::string& suite, const ValidationOptions& options) {
  if (options.cases < 1 || options.samples < 1000) {
    throw std::invalid_argument("validate: need cases >= 1 and samples >= 1000");
  }
  if (suite == "mc-region") {
    return mc_region_suite(options);
  }
  if (suite == "lemma") {
    return lemma_suite(options);
  }
  if (suite == "conservativeness") {
    return conservativeness_suite(options);
  }
  throw std::invalid_argument("unknown validation suite \"" + suite + "\"");
}

}  // namespace bayesreg
