#include "bayesreg/serialize.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

using namespace bayesreg;
using nlohmann::json;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + std::string(BAYESREG_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

json homodyne_json() {
  return {{"model", "homodyne"},
          {"zeta", 0.7},
          {"truth", {{"phi", 1.179}}},
          {"initial_setting", {{"theta", 1.837}}},
          {"N", 200},
          {"K", 2},
          {"L", 2},
          {"n_m", 4},
          {"region", "fixed-c"},
          {"c0", 0.9},
          {"runs", 2},
          {"seed", 5}};
}

}  // namespace

TEST_CASE("config round trip") {
  const ExperimentConfig c = parse_config(homodyne_json());
  CHECK(c.model == "homodyne");
  CHECK(c.run.N == 200);
  CHECK(c.run.spec.kind == RegionSpec::Kind::FixedCredibility);
  CHECK(c.run.spec.value == 0.9);
  CHECK(c.true_params(0) == 1.179);
  c.validate();
  const ExperimentConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));

  json three = {{"model", "three-path"},
                {"truth", {{"phi", {0.5, 1.0}}}},
                {"initial_setting", {{"psi1", 0.1}, {"psi2", 0.2}}}};
  const ExperimentConfig t = parse_config(three);
  CHECK(t.run.initial_setting(1) == 0.2);
  CHECK(parse_config(to_json(t)).true_params == t.true_params);

  json squeezed = {{"model", "squeezed"},
                   {"truth", {{"nu", 3.258}, {"alpha", 1.0517}}},
                   {"initial_setting", {{"theta", {0.27, 1.0}}}}};
  const ExperimentConfig s = parse_config(squeezed);
  CHECK(s.true_params(0) == 3.258);
  CHECK(setting_to_json("squeezed", s.run.initial_setting) == squeezed["initial_setting"]);
}

TEST_CASE("config errors") {
  json bad = homodyne_json();
  bad["model"] = "nope";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = homodyne_json();
  bad.erase("truth");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = homodyne_json();
  bad["c0"] = 1.5;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = homodyne_json();
  bad["N"] = 201;
  CHECK_THROWS_AS(parse_config(bad).validate(), ConfigError);
  bad = homodyne_json();
  bad["truth"]["phi"] = 3.0;
  CHECK_THROWS_AS(parse_config(bad).validate(), ConfigError);
  bad = homodyne_json();
  bad["N"] = "many";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("dataset round trip") {
  for (const char* name : {"homodyne", "three-path", "squeezed"}) {
    const auto model = make_model(name);
    Dataset data;
    for (std::uint64_t i = 0; i < 2; ++i) {
      Rng rng = make_stream(7, {i});
      const VectorXd setting = model->setting_space().lower() + 0.25 * (i + 1) * model->setting_space().edges();
      data.add(Batch(*model, setting, model->sample(model->param_space().center(), setting, 20, rng)));
    }
    const json j = dataset_to_json(data);
    CHECK(j["schema"] == kSchema);
    const Dataset back = dataset_from_json(*model, json::parse(j.dump()));
    REQUIRE(back.batches().size() == 2);
    for (std::size_t b = 0; b < 2; ++b) {
      CHECK(back.batches()[b].setting == data.batches()[b].setting);
      CHECK(back.batches()[b].outcomes == data.batches()[b].outcomes);
    }
  }
}

TEST_CASE("CSV and JSON output") {
  CHECK(csv_header(2, 2) == "run,k,setting_1,setting_2,ml_1,ml_2,mrse_pred,mrse_true,s,c,lambda,lambda_crit_flag");
  const ExperimentConfig c = parse_config(homodyne_json());
  const auto model = c.make();
  std::vector<RunRecord> records{run_adaptive(*model, c.true_params, c.run)};
  std::ostringstream os;
  write_csv(os, records);
  std::istringstream in(os.str());
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == csv_header(1, 1));
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 2);
  const json j = runs_to_json(c, records);
  CHECK(j["schema"] == kSchema);
  CHECK(j["runs"][0]["steps"].size() == 2);
  CHECK(j["config"]["model"] == "homodyne");
}

TEST_CASE("command line") {
  const Result region = run("region-props --d 1 --fisher 62831.85 --volume 1");
  CHECK(region.status == 0);
  const json r = json::parse(region.out);
  CHECK(std::abs(r["lambda_crit"].get<double>() - 0.01) < 1e-6);

  const Result zero = run("region-props --d 1 --fisher 100 --lambda 1");
  CHECK(zero.status == 0);
  CHECK(json::parse(zero.out)["size"].get<double>() == 0.0);

  CHECK(run("region-props --d 2 --fisher 1 0 0 -1").status == 2);
  CHECK(run("region-props --d 2 --fisher 1 2 0 1").status == 2);
  CHECK(run("region-props --d 2 --fisher 1 0 0").status == 2);
  CHECK(run("region-props --d 1 --fisher 10 --lambda 1.5").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("validate no-such-suite").status == 2);
  CHECK(run("simulate --model homodyne --N 101 --K 10").status == 2);
  CHECK(run("--help").status == 0);

  const std::string sim = "simulate --model homodyne --N 200 --K 2 --L 2 --nm 4 --runs 2 --seed 3";
  const Result a = run(sim);
  const Result b = run(sim);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("run,k,setting_1,ml_1", 0) == 0);
  const Result threaded = run(sim, "BAYESREG_THREADS=1 ");
  CHECK(threaded.out == a.out);

  const Result lemma = run("validate lemma --cases 200");
  CHECK(lemma.status == 0);
  CHECK(json::parse(lemma.out)["passed"] == true);
}
