#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "scalex/io.hpp"
#include "scalex/rng.hpp"
#include "test_support.hpp"

using namespace scalex;
using testsupport::temp_path;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

bool runs_equal(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].run_id != b[i].run_id || a[i].n_params != b[i].n_params ||
        a[i].cosine_cycle_tokens != b[i].cosine_cycle_tokens ||
        a[i].points.size() != b[i].points.size())
      return false;
    for (std::size_t j = 0; j < a[i].points.size(); ++j)
      if (a[i].points[j].tokens != b[i].points[j].tokens ||
          a[i].points[j].loss != b[i].points[j].loss)
        return false;
  }
  return true;
}

}  // namespace

TEST_CASE("basic runs CSV parses into grouped records") {
  const std::string path = temp_path("runs_basic.csv");
  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1e8,4e9,1e9,3.5\n"
             "r1,1e8,4e9,2e9,3.1\n");
  const std::vector<RunRecord> runs = load_runs(path);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].run_id == "r1");
  CHECK(runs[0].n_params == 100000000);
  CHECK(runs[0].cosine_cycle_tokens == 4000000000);
  REQUIRE(runs[0].points.size() == 2);
  CHECK(runs[0].points[0].tokens == 1000000000);
  CHECK(runs[0].points[0].loss == 3.5);
  CHECK(runs[0].points[1].tokens == 2000000000);
}

TEST_CASE("rows out of order are normalized ascending by tokens") {
  const std::string path = temp_path("runs_unsorted.csv");
  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,30,2.9\n"
             "r1,1000,100,10,3.5\n"
             "r1,1000,100,20,3.1\n");
  const std::vector<RunRecord> runs = load_runs(path);
  REQUIRE(runs[0].points.size() == 3);
  CHECK(runs[0].points[0].tokens == 10);
  CHECK(runs[0].points[2].tokens == 30);
}

TEST_CASE("validation failures carry the run and location") {
  const std::string path = temp_path("runs_bad.csv");

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,3.5\n"
             "r1,1000,100,20,-1\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("r1") &&
                                         Catch::Matchers::ContainsSubstring("row 3"));

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,3.5\n"
             "r1,1000,100,10,3.4\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("duplicate"));

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,3.5\n"
             "r1,2000,100,20,3.4\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("conflicting n_params"));

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,oops\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("column loss"));

  write_text(path, "run_id,n_params,tokens,loss\nr1,1000,10,3.5\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("header"));

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,3.5\n"
             "r1,1000,100,20\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("5 columns"));

  CHECK_THROWS_AS(load_runs(temp_path("does_not_exist.csv")), ValidationError);

  write_text(path,
             "run_id,n_params,cosine_cycle_tokens,tokens,loss\n"
             "r1,1000,100,10,3.5\n");
  CHECK_THROWS_WITH(load_runs(path), Catch::Matchers::ContainsSubstring("at least 2 points"));
}

TEST_CASE("runs round-trip exactly through CSV and JSON") {
  Rng rng(55);
  std::vector<RunRecord> runs;
  for (int r = 0; r < 4; ++r) {
    RunRecord run;
    run.run_id = "model-" + std::to_string(r);
    run.n_params = 44000000ull * (r + 1) * 3;
    run.cosine_cycle_tokens = 16000000000ull + r;
    std::uint64_t tokens = 1000000 + r;
    for (int i = 0; i < 7; ++i) {
      tokens = tokens * 3 + 1;
      run.points.push_back({tokens, 2.0 + rng.next_uniform() / 3.0});
    }
    runs.push_back(run);
  }
  const std::string csv_path = temp_path("runs_rt.csv");
  save_runs(runs, csv_path, FileFormat::csv);
  CHECK(runs_equal(load_runs(csv_path, FileFormat::csv), runs));

  const std::string json_path = temp_path("runs_rt.json");
  save_runs(runs, json_path, FileFormat::json);
  CHECK(runs_equal(load_runs(json_path, FileFormat::json), runs));
}

TEST_CASE("runs JSON errors carry the path and cause") {
  const std::string path = temp_path("runs_bad.json");
  write_text(path, "{\"runs\": [{\"run_id\": \"r1\"}]}");
  CHECK_THROWS_WITH(load_runs(path, FileFormat::json),
                    Catch::Matchers::ContainsSubstring("runs_bad.json"));
  write_text(path, "[1, 2, 3]");
  CHECK_THROWS_WITH(load_runs(path, FileFormat::json),
                    Catch::Matchers::ContainsSubstring("\"runs\" array"));
  write_text(path, "{\"runs\": [");
  CHECK_THROWS_AS(load_runs(path, FileFormat::json), ValidationError);
}

TEST_CASE("final points round-trip and validate") {
  const std::string path = temp_path("points_rt.csv");
  std::vector<LossPoint> pts;
  Rng rng(66);
  for (int i = 0; i < 30; ++i)
    pts.push_back({1e7 * (1.0 + rng.next_uniform()), 1e9 * (1.0 + rng.next_uniform()),
                   2.0 + rng.next_uniform()});
  save_final_points(pts, path);
  const std::vector<LossPoint> loaded = load_final_points(path);
  REQUIRE(loaded.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(loaded[i].n_params == pts[i].n_params);
    CHECK(loaded[i].tokens == pts[i].tokens);
    CHECK(loaded[i].loss == pts[i].loss);
  }

  write_text(path, "n_params,tokens,loss\n1e8,1e10,0\n");
  CHECK_THROWS_WITH(load_final_points(path), Catch::Matchers::ContainsSubstring("row 2"));
}

TEST_CASE("fit JSON round-trips exactly, omitting absent optional parts") {
  ScalingFit fit;
  fit.approach = Approach::parametric;
  fit.a = 0.45161290322580644;
  fit.b = 1.0 - fit.a;
  fit.n_coeff = 0.59869092540492;
  fit.d_coeff = 0.27841840018724;
  fit.params = ParametricParams{1.69, 406.4, 410.7, 0.34, 0.28};
  fit.diagnostics = {63, 1.25e-4, 3.5e-3, 6e18, 3e21};

  const std::string path = temp_path("fit_rt.json");
  save_fit(fit, path);
  const ScalingFit loaded = load_fit(path);
  CHECK(loaded.approach == fit.approach);
  CHECK(loaded.a == fit.a);
  CHECK(loaded.b == fit.b);
  CHECK(loaded.n_coeff == fit.n_coeff);
  CHECK(loaded.d_coeff == fit.d_coeff);
  REQUIRE(loaded.params.has_value());
  CHECK(loaded.params->E == fit.params->E);
  CHECK(loaded.params->alpha == fit.params->alpha);
  CHECK(loaded.diagnostics.count == 63);
  CHECK(loaded.diagnostics.flops_max == 3e21);
  CHECK_FALSE(loaded.intervals.has_value());

  // the intervals key must be absent, not null
  const std::string raw = [&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  CHECK(raw.find("intervals") == std::string::npos);

  fit.intervals = ExponentIntervals{{0.49, 0.462, 0.534, 100, 0.8, 7},
                                    {0.51, 0.483, 0.529, 100, 0.8, 7}};
  save_fit(fit, path);
  const ScalingFit with_iv = load_fit(path);
  REQUIRE(with_iv.intervals.has_value());
  CHECK(with_iv.intervals->a.p10 == 0.462);
  CHECK(with_iv.intervals->b.p90 == 0.529);
  CHECK(with_iv.intervals->a.seed == 7);
}

TEST_CASE("non-finite fits are refused") {
  ScalingFit fit;
  fit.approach = Approach::envelope;
  fit.a = std::nan("");
  fit.b = 0.5;
  fit.n_coeff = 1.0;
  fit.d_coeff = 1.0;
  CHECK_THROWS_AS(save_fit(fit, temp_path("fit_bad.json")), ValidationError);
}

TEST_CASE("malformed fit JSON is rejected with the path in the message") {
  const std::string path = temp_path("fit_malformed.json");
  write_text(path, "{\"approach\": \"parametric\", \"a\": 0.5");
  CHECK_THROWS_WITH(load_fit(path), Catch::Matchers::ContainsSubstring("fit_malformed"));
  write_text(path, "{\"approach\": \"sideways\", \"a\": 0.5, \"b\": 0.5, "
                   "\"n_coeff\": 1, \"d_coeff\": 1}");
  CHECK_THROWS_WITH(load_fit(path), Catch::Matchers::ContainsSubstring("unknown approach"));
}

TEST_CASE("bundled model configurations load with default seq/vocab") {
  const std::vector<ModelConfig> configs =
      load_model_configs(testsupport::data_dir() + "/models.csv");
  REQUIRE(configs.size() == 50);
  CHECK(configs.front().params_million == 44.0);
  CHECK(configs.front().shape.d_model == 512);
  CHECK(configs.front().shape.seq_len == 2048);
  CHECK(configs.front().shape.vocab_size == 32000);
  const ModelConfig& big = configs.back();
  CHECK(big.params_million == 16183.0);
  CHECK(big.shape.n_layers == 47);
  // every row's dense parameter count reconciles with the published size
  for (const auto& cfg : configs) {
    const double counted =
        static_cast<double>(count_params(cfg.shape, EmbeddingPolicy::tied));
    CHECK(testsupport::close_rel(counted, cfg.params_million * 1e6, 0.10));
  }
}

TEST_CASE("envelope and plotdata CSV emission") {
  RunRecord a;
  a.run_id = "a";
  a.n_params = 1000;
  a.cosine_cycle_tokens = 100;
  a.points = {{10, 3.0}, {100, 2.0}};
  RunRecord b = a;
  b.run_id = "b";
  b.n_params = 10000;
  EnvelopeOptions opt;
  opt.n_grid = 5;
  const Envelope env = extract_envelope({a, b}, opt);

  const std::string env_csv = envelope_csv(env);
  CHECK(env_csv.rfind("flops,n_params,tokens,loss\n", 0) == 0);
  CHECK(std::count(env_csv.begin(), env_csv.end(), '\n') ==
        static_cast<long>(env.points.size()) + 1);

  const std::string plot = plotdata_csv({a, b}, env);
  CHECK(plot.rfind("flops,loss,run_id\n", 0) == 0);
  CHECK(plot.find(",envelope\n") != std::string::npos);
  CHECK(plot.find(",a\n") != std::string::npos);
  CHECK(plot.find(",b\n") != std::string::npos);
}
