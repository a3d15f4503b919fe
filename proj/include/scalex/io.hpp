#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scalex/curves.hpp"
#include "scalex/types.hpp"

namespace scalex {

enum class FileFormat { csv, json };

namespace detail {

/// 17 significant digits: lossless decimal round-trip for 64-bit floats.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

inline double parse_double(const std::string& text, const std::string& where) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  // Leading whitespace and leading '+' are accepted in hand-edited files.
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ValidationError(where + ": cannot parse number from \"" + text + "\"");
  return value;
}

inline std::uint64_t parse_count(const std::string& text, const std::string& where) {
  const double v = parse_double(text, where);
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(where + ": expected a positive count, got \"" + text + "\"");
  if (v > 9.007199254740992e15)  // 2^53
    throw ValidationError(where + ": count too large to represent exactly");
  const double rounded = std::nearbyint(v);
  if (std::abs(v - rounded) > 1e-6 * std::max(1.0, std::abs(v)))
    throw ValidationError(where + ": expected an integer count, got \"" + text + "\"");
  return static_cast<std::uint64_t>(rounded);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

inline void expect_header(const std::vector<std::string>& fields,
                          const std::vector<std::string>& expected, const std::string& path) {
  if (fields != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i)
      want += (i ? "," : "") + expected[i];
    throw ValidationError(path + ": expected header \"" + want + "\"");
  }
}

inline std::vector<RunRecord> assemble_runs(
    std::vector<RunRecord>&& drafts, const std::string& path) {
  for (auto& run : drafts) {
    std::sort(run.points.begin(), run.points.end(),
              [](const LossObservation& a, const LossObservation& b) {
                return a.tokens < b.tokens;
              });
    for (std::size_t i = 1; i < run.points.size(); ++i)
      if (run.points[i].tokens == run.points[i - 1].tokens)
        throw ValidationError(path + ": run " + run.run_id + ": duplicate observation at tokens=" +
                              std::to_string(run.points[i].tokens));
    run.validate();
  }
  return std::move(drafts);
}

}  // namespace detail

/// Loads training runs. CSV schema:
///   run_id,n_params,cosine_cycle_tokens,tokens,loss
/// one observation per row; rows are grouped by run_id and ordered by tokens.
/// JSON schema: {"runs": [{"run_id", "n_params", "cosine_cycle_tokens",
/// "points": [{"tokens", "loss"}, ...]}, ...]}.
inline std::vector<RunRecord> load_runs(const std::string& path,
                                        FileFormat format = FileFormat::csv) {
  if (format == FileFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("runs") || !doc["runs"].is_array())
      throw ValidationError(path + ": expected a top-level object with a \"runs\" array");
    std::vector<RunRecord> runs;
    for (const auto& jrun : doc["runs"]) {
      RunRecord run;
      try {
        run.run_id = jrun.at("run_id").get<std::string>();
        run.n_params = jrun.at("n_params").get<std::uint64_t>();
        run.cosine_cycle_tokens = jrun.at("cosine_cycle_tokens").get<std::uint64_t>();
        for (const auto& jp : jrun.at("points"))
          run.points.push_back({jp.at("tokens").get<std::uint64_t>(),
                                jp.at("loss").get<double>()});
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": run entry: " + e.what());
      }
      runs.push_back(std::move(run));
    }
    return detail::assemble_runs(std::move(runs), path);
  }

  std::istringstream in(detail::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  detail::expect_header(detail::split_csv(line),
                        {"run_id", "n_params", "cosine_cycle_tokens", "tokens", "loss"}, path);
  std::vector<RunRecord> runs;
  std::map<std::string, std::size_t> index;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = detail::split_csv(line);
    const std::string where = path + ": row " + std::to_string(row);
    if (f.size() != 5)
      throw ValidationError(where + ": expected 5 columns, found " + std::to_string(f.size()));
    if (f[0].empty()) throw ValidationError(where + ": empty run_id");
    const std::uint64_t n_params = detail::parse_count(f[1], where + ", column n_params");
    const std::uint64_t cycle = detail::parse_count(f[2], where + ", column cosine_cycle_tokens");
    const std::uint64_t tokens = detail::parse_count(f[3], where + ", column tokens");
    const double loss = detail::parse_double(f[4], where + ", column loss");
    if (!(loss > 0.0) || !std::isfinite(loss))
      throw ValidationError(where + ": run " + f[0] + ": loss must be positive and finite");

    auto [it, inserted] = index.try_emplace(f[0], runs.size());
    if (inserted) {
      RunRecord run;
      run.run_id = f[0];
      run.n_params = n_params;
      run.cosine_cycle_tokens = cycle;
      runs.push_back(std::move(run));
    } else {
      const RunRecord& run = runs[it->second];
      if (run.n_params != n_params)
        throw ValidationError(where + ": run " + f[0] + ": conflicting n_params");
      if (run.cosine_cycle_tokens != cycle)
        throw ValidationError(where + ": run " + f[0] + ": conflicting cosine_cycle_tokens");
    }
    runs[it->second].points.push_back({tokens, loss});
  }
  if (runs.empty()) throw ValidationError(path + ": no data rows");
  return detail::assemble_runs(std::move(runs), path);
}

inline void save_runs(const std::vector<RunRecord>& runs, const std::string& path,
                      FileFormat format = FileFormat::csv) {
  for (const auto& run : runs) run.validate();
  if (format == FileFormat::json) {
    nlohmann::json jruns = nlohmann::json::array();
    for (const auto& run : runs) {
      nlohmann::json points = nlohmann::json::array();
      for (const auto& p : run.points)
        points.push_back({{"tokens", p.tokens}, {"loss", p.loss}});
      jruns.push_back({{"run_id", run.run_id},
                       {"n_params", run.n_params},
                       {"cosine_cycle_tokens", run.cosine_cycle_tokens},
                       {"points", std::move(points)}});
    }
    detail::write_file(path, nlohmann::json{{"runs", std::move(jruns)}}.dump(2) + "\n");
    return;
  }
  std::string out = "run_id,n_params,cosine_cycle_tokens,tokens,loss\n";
  for (const auto& run : runs)
    for (const auto& p : run.points)
      out += run.run_id + "," + std::to_string(run.n_params) + "," +
             std::to_string(run.cosine_cycle_tokens) + "," + std::to_string(p.tokens) + "," +
             detail::format_double(p.loss) + "\n";
  detail::write_file(path, out);
}

/// Final observations of trained models. CSV schema: n_params,tokens,loss.
inline std::vector<LossPoint> load_final_points(const std::string& path) {
  std::istringstream in(detail::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  detail::expect_header(detail::split_csv(line), {"n_params", "tokens", "loss"}, path);
  std::vector<LossPoint> points;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = detail::split_csv(line);
    const std::string where = path + ": row " + std::to_string(row);
    if (f.size() != 3)
      throw ValidationError(where + ": expected 3 columns, found " + std::to_string(f.size()));
    LossPoint p;
    p.n_params = detail::parse_double(f[0], where + ", column n_params");
    p.tokens = detail::parse_double(f[1], where + ", column tokens");
    p.loss = detail::parse_double(f[2], where + ", column loss");
    try {
      p.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    points.push_back(p);
  }
  if (points.empty()) throw ValidationError(path + ": no data rows");
  return points;
}

inline void save_final_points(const std::vector<LossPoint>& points, const std::string& path) {
  std::string out = "n_params,tokens,loss\n";
  for (const auto& p : points) {
    p.validate();
    out += detail::format_double(p.n_params) + "," + detail::format_double(p.tokens) + "," +
           detail::format_double(p.loss) + "\n";
  }
  detail::write_file(path, out);
}

namespace detail {

inline nlohmann::json summary_to_json(const BootstrapSummary& s) {
  return {{"point", s.point},          {"p10", s.p10},
          {"p90", s.p90},              {"n_resamples", s.n_resamples},
          {"resample_fraction", s.resample_fraction}, {"seed", s.seed}};
}

inline BootstrapSummary summary_from_json(const nlohmann::json& j) {
  BootstrapSummary s;
  s.point = j.at("point").get<double>();
  s.p10 = j.at("p10").get<double>();
  s.p90 = j.at("p90").get<double>();
  s.n_resamples = j.at("n_resamples").get<std::uint64_t>();
  s.resample_fraction = j.at("resample_fraction").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

}  // namespace detail

/// Fit JSON: {"approach", "a", "b", "n_coeff", "d_coeff", optional "params",
/// "diagnostics", optional "intervals"}. Absent optional parts are omitted,
/// never null-filled.
inline void save_fit(const ScalingFit& fit, const std::string& path) {
  fit.validate();
  nlohmann::json doc{{"approach", to_string(fit.approach)},
                     {"a", fit.a},
                     {"b", fit.b},
                     {"n_coeff", fit.n_coeff},
                     {"d_coeff", fit.d_coeff}};
  if (fit.params) {
    doc["params"] = {{"E", fit.params->E},
                     {"A", fit.params->A},
                     {"B", fit.params->B},
                     {"alpha", fit.params->alpha},
                     {"beta", fit.params->beta}};
  }
  doc["diagnostics"] = {{"count", fit.diagnostics.count},
                        {"mean_abs_log_residual", fit.diagnostics.mean_abs_log_residual},
                        {"max_abs_log_residual", fit.diagnostics.max_abs_log_residual},
                        {"flops_min", fit.diagnostics.flops_min},
                        {"flops_max", fit.diagnostics.flops_max}};
  if (fit.intervals) {
    doc["intervals"] = {{"a", detail::summary_to_json(fit.intervals->a)},
                        {"b", detail::summary_to_json(fit.intervals->b)}};
  }
  detail::write_file(path, doc.dump(2) + "\n");
}

inline ScalingFit load_fit(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(detail::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  ScalingFit fit;
  try {
    const std::string approach = doc.at("approach").get<std::string>();
    if (approach == "envelope") fit.approach = Approach::envelope;
    else if (approach == "isoflop") fit.approach = Approach::isoflop;
    else if (approach == "parametric") fit.approach = Approach::parametric;
    else throw ValidationError(path + ": unknown approach \"" + approach + "\"");
    fit.a = doc.at("a").get<double>();
    fit.b = doc.at("b").get<double>();
    fit.n_coeff = doc.at("n_coeff").get<double>();
    fit.d_coeff = doc.at("d_coeff").get<double>();
    if (doc.contains("params")) {
      ParametricParams p;
      p.E = doc["params"].at("E").get<double>();
      p.A = doc["params"].at("A").get<double>();
      p.B = doc["params"].at("B").get<double>();
      p.alpha = doc["params"].at("alpha").get<double>();
      p.beta = doc["params"].at("beta").get<double>();
      fit.params = p;
    }
    if (doc.contains("diagnostics")) {
      const auto& d = doc["diagnostics"];
      fit.diagnostics.count = d.at("count").get<std::uint64_t>();
      fit.diagnostics.mean_abs_log_residual = d.at("mean_abs_log_residual").get<double>();
      fit.diagnostics.max_abs_log_residual = d.at("max_abs_log_residual").get<double>();
      fit.diagnostics.flops_min = d.at("flops_min").get<double>();
      fit.diagnostics.flops_max = d.at("flops_max").get<double>();
    }
    if (doc.contains("intervals")) {
      ExponentIntervals iv;
      iv.a = detail::summary_from_json(doc["intervals"].at("a"));
      iv.b = detail::summary_from_json(doc["intervals"].at("b"));
      fit.intervals = iv;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  fit.validate();
  return fit;
}

/// Envelope points as CSV: flops,n_params,tokens,loss.
inline std::string envelope_csv(const Envelope& env) {
  std::string out = "flops,n_params,tokens,loss\n";
  for (const auto& p : env.points)
    out += detail::format_double(p.flops) + "," + std::to_string(p.n_params) + "," +
           detail::format_double(p.tokens) + "," + detail::format_double(p.loss) + "\n";
  return out;
}

/// Per-run curves plus the envelope as CSV series: flops,loss,run_id. The
/// envelope series uses run_id "envelope".
inline std::string plotdata_csv(const std::vector<RunRecord>& runs, const Envelope& env,
                                const FlopsCalc& calc = FlopsCalc::approx6nd()) {
  std::string out = "flops,loss,run_id\n";
  for (const auto& run : runs) {
    const double per_token = calc.per_token(run);
    for (const auto& p : run.points)
      out += detail::format_double(per_token * static_cast<double>(p.tokens)) + "," +
             detail::format_double(p.loss) + "," + run.run_id + "\n";
  }
  for (const auto& p : env.points)
    out += detail::format_double(p.flops) + "," + detail::format_double(p.loss) + ",envelope\n";
  return out;
}

/// Bundled model-configuration table: params_million,n_layers,d_model,
/// ffw_size,n_heads,key_size. seq_len and vocab_size are not part of the
/// table; rows are completed with seq_len 2048 and vocab 32000.
struct ModelConfig {
  double params_million = 0.0;
  ModelShape shape;
};

inline std::vector<ModelConfig> load_model_configs(const std::string& path,
                                                   std::uint64_t seq_len = 2048,
                                                   std::uint64_t vocab_size = 32000) {
  std::istringstream in(detail::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  detail::expect_header(detail::split_csv(line),
                        {"params_million", "n_layers", "d_model", "ffw_size", "n_heads",
                         "key_size"},
                        path);
  std::vector<ModelConfig> configs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = detail::split_csv(line);
    const std::string where = path + ": row " + std::to_string(row);
    if (f.size() != 6)
      throw ValidationError(where + ": expected 6 columns, found " + std::to_string(f.size()));
    ModelConfig cfg;
    cfg.params_million = detail::parse_double(f[0], where + ", column params_million");
    cfg.shape.n_layers = detail::parse_count(f[1], where + ", column n_layers");
    cfg.shape.d_model = detail::parse_count(f[2], where + ", column d_model");
    cfg.shape.ffw_size = detail::parse_count(f[3], where + ", column ffw_size");
    cfg.shape.n_heads = detail::parse_count(f[4], where + ", column n_heads");
    cfg.shape.key_size = detail::parse_count(f[5], where + ", column key_size");
    cfg.shape.seq_len = seq_len;
    cfg.shape.vocab_size = vocab_size;
    cfg.shape.validate();
    configs.push_back(cfg);
  }
  if (configs.empty()) throw ValidationError(path + ": no data rows");
  return configs;
}

}  // namespace scalex
