#include "bayesreg/mc_oracle.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace bayesreg;

namespace {

struct Fixture {
  std::unique_ptr<StatisticalModel> model;
  std::vector<BatchSummary> batches;
  MLResult ml;
};

Fixture homodyne_fixture(std::int64_t copies, std::uint64_t seed) {
  Fixture f;
  f.model = make_model("homodyne", 0.7);
  const VectorXd setting = VectorXd::Constant(1, 1.837);
  Rng rng = make_stream(seed, {0});
  f.batches.push_back({setting, f.model->sample_stats(VectorXd::Constant(1, 1.179), setting, copies, rng)});
  f.ml = ml_estimate(*f.model, f.batches);
  return f;
}

}  // namespace

TEST_CASE("whole-box region reproduces the uniform second moment") {
  SUBCASE("homodyne") {
    const Fixture f = homodyne_fixture(3, 2);
    MCConfig config;
    config.proposal = Proposal::Uniform;
    config.samples = 200000;
    const auto& space = f.model->param_space();
    const auto est = mc_rse(*f.model, f.batches, f.ml, 1e-30, space.center(), config);
    const double expect = space.edges().squaredNorm() / 12.0;
    CHECK(est.accepted == est.samples);
    CHECK(std::abs(est.rse - expect) < 3.0 * est.rse_se);
    const auto props = mc_region_props(*f.model, f.batches, f.ml, 1e-30, config);
    CHECK(props.size == doctest::Approx(1.0));
  }
  SUBCASE("squeezed") {
    const auto model = make_model("squeezed");
    const VectorXd setting = (VectorXd(2) << 0.27, 1.0).finished();
    Rng rng = make_stream(3, {0});
    std::vector<BatchSummary> batches{{setting, model->sample_stats((VectorXd(2) << 3.0, 1.0).finished(), setting, 2, rng)}};
    const MLResult ml = ml_estimate(*model, batches);
    MCConfig config;
    config.proposal = Proposal::Uniform;
    config.samples = 200000;
    const auto& space = model->param_space();
    const auto est = mc_rse(*model, batches, ml, 1e-30, space.center(), config);
    CHECK(std::abs(est.rse - space.edges().squaredNorm() / 12.0) < 3.0 * est.rse_se);
  }
}

TEST_CASE("lambda near one collapses the region onto the ML estimate") {
  const Fixture f = homodyne_fixture(10000, 1);
  MCConfig config;
  config.samples = 200000;
  const VectorXd reference = VectorXd::Constant(1, 1.179);
  const auto est = mc_rse(*f.model, f.batches, f.ml, 1.0 - 1e-6, reference, config);
  REQUIRE_FALSE(est.zero_acceptance);
  const double dist2 = (f.ml.estimate - reference).squaredNorm();
  const double width = std::sqrt(2e-6 / f.ml.fisher_at_ml(0, 0));
  CHECK(std::abs(est.rse - dist2) < 2.0 * std::sqrt(dist2) * width + width * width);
}

TEST_CASE("region estimates") {
  const Fixture f = homodyne_fixture(10000, 1);
  MCConfig small;
  small.samples = 25000;
  MCConfig large = small;
  large.samples = 100000;
  const auto a = mc_region_props(*f.model, f.batches, f.ml, 0.1, small);
  const auto b = mc_region_props(*f.model, f.batches, f.ml, 0.1, large);
  CHECK(a.size_se / b.size_se == doctest::Approx(2.0).epsilon(0.2));
  CHECK(a.credibility_se / b.credibility_se == doctest::Approx(2.0).epsilon(0.2));
  for (double lambda : {0.9, 0.5, 0.1, 0.01}) {
    const auto e = mc_region_props(*f.model, f.batches, f.ml, lambda, small);
    CHECK(e.credibility >= e.size * lambda);
    CHECK(e.size > 0.0);
    CHECK(e.credibility < 1.0);
  }
  const auto many = mc_region_props(*f.model, f.batches, f.ml, std::vector<double>{0.5, 0.1}, small);
  REQUIRE(many.size() == 2);
  CHECK(many[0].size < many[1].size);
  CHECK(many[0].credibility < many[1].credibility);
  const auto again = mc_region_props(*f.model, f.batches, f.ml, 0.1, small);
  CHECK(again.size == a.size);
  CHECK(again.credibility == a.credibility);
}

TEST_CASE("interval RSE forms") {
  CHECK(std::abs(rse_interval_actual(0.5, 0.0, 1.0) - 1.0 / 12.0) < 1e-15);
  CHECK(std::abs(rse_interval_categorical(0.5, 0.0, 0.6) - 0.13) < 1e-12);
  const double diff = rse_interval_actual(0.5, 0.0, 1.0) - rse_interval_categorical(0.5, 0.0, 0.6);
  CHECK(std::abs(diff - (-0.0466666666666667)) < 1e-12);
  CHECK(std::abs(diff - rse_interval_difference(0.5, 0.0, 1.0, 0.6)) < 1e-12);
  CHECK_THROWS_AS(rse_interval_actual(0.5, 1.0, 1.0), std::invalid_argument);

  gen::Rng rng(14);
  for (int i = 0; i < 10000; ++i) {
    const double a = gen::uniform(rng, -2.0, 2.0);
    const double r_ml = a + gen::uniform(rng, 0.01, 2.0);
    const double b = gen::uniform(rng, r_ml, 2 * r_ml - a);
    const double r = gen::uniform(rng, a, b);
    CHECK(rse_interval_actual(r, a, b) >= 0.0);
    CHECK(std::abs(rse_interval_actual(r, a, 2 * r_ml - a) - rse_interval_categorical(r, a, r_ml)) < 1e-10);
    CHECK(rse_interval_categorical(r_ml, a, r_ml) >= rse_interval_actual(r_ml, a, b) - 1e-12);
    CHECK(std::abs(rse_interval_actual(r, a, b) - rse_interval_categorical(r, a, r_ml) -
                   rse_interval_difference(r, a, b, r_ml)) < 1e-10);
  }
}

TEST_CASE("cap integrals") {
  for (int d = 1; d <= 4; ++d) {
    for (double R : {0.5, 1.0, 2.0}) {
      const double full = d * R * R / (d + 2.0);
      CHECK(std::abs(cap_integrals({d, R, 0.0}).rse - full) < 1e-12 * full);
      CHECK(std::abs(cap_integrals({d, R, R}).rse - full) < 1e-9 * full);
    }
  }
  CHECK(std::abs(cap_integrals({1, 1.0, 0.5}).rse - 0.25) < 1e-14);
  const auto ball = cap_integrals({3, 1.0, 0.0});
  CHECK(std::abs(ball.volume - 4.0 * oracle::kPi / 3.0) < 1e-12);
  CHECK_THROWS_AS(cap_integrals({0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(cap_integrals({2, 1.0, 1.5}), std::invalid_argument);

  std::mt19937_64 rng(17);
  for (int d = 1; d <= 4; ++d) {
    for (double frac : {0.2, 0.5, 0.8}) {
      const auto mc = oracle::cap_rse_mc(d, 1.0, frac, 200000, rng);
      const auto exact = cap_integrals({d, 1.0, frac});
      CHECK(std::abs(exact.rse - mc.rse) < 3.0 * mc.se);
      CHECK(exact.rse < d / (d + 2.0));
    }
  }
}

TEST_CASE("lemma check") {
  const auto two = lemma_check({2.0, 1.0, 3.0}, {1.0, 1.0, 1.0});
  CHECK(two.holds);
  CHECK(two.k_star == 1);
  CHECK_THROWS_AS(lemma_check({1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  // ratios not increasing
  CHECK_THROWS_AS(lemma_check({2.0, 3.0, 1.0}, {1.0, 1.0, 1.0}), std::invalid_argument);
  // endpoint equality violated
  CHECK_THROWS_AS(lemma_check({5.0, 1.0, 3.0}, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(lemma_check({2.0, -1.0, 3.0}, {1.0, 1.0, 1.0}), std::invalid_argument);

  const auto slices = cap_slice_sequences(3, 1.0, 200);
  const auto on_caps = lemma_check(slices.a, slices.b);
  CHECK(on_caps.holds);
  CHECK(on_caps.k_star > 0);
  CHECK(on_caps.k_star < 200);
}
