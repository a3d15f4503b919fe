// scalex command-line interface: FLOPs accounting, envelope extraction,
// frontier fitting, predictions and synthetic data generation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scalex/scalex.hpp"

namespace {

using namespace scalex;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string fmt17(double v) { return fmt(v, "%.17g"); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(scalex::detail::parse_double(item, flag));
  }
  if (out.empty()) throw CLI::ValidationError(flag, "expected a comma-separated list of numbers");
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cur = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         prev + (a[i - 1] == b[j - 1] ? 0 : 1)});
      prev = cur;
    }
  }
  return row[b.size()];
}

void collect_flags(const CLI::App* cmd, std::vector<std::string>& names) {
  for (const auto* opt : cmd->get_options())
    for (const auto& n : opt->get_lnames()) names.push_back("--" + n);
  for (const auto* sub : cmd->get_subcommands(nullptr)) collect_flags(sub, names);
}

/// "did you mean --layers?" for a stray flag.
void suggest_flag(const CLI::App& app, const std::string& stray) {
  if (stray.rfind("--", 0) != 0) return;
  std::vector<std::string> names;
  collect_flags(&app, names);
  std::string best;
  std::size_t best_dist = 4;  // only suggest close matches
  for (const auto& name : names) {
    const std::size_t d = edit_distance(stray, name);
    if (d < best_dist) {
      best_dist = d;
      best = name;
    }
  }
  if (!best.empty()) std::cerr << "did you mean " << best << "?\n";
}

struct ShapeFlags {
  std::uint64_t layers = 0, dmodel = 0, ffw = 0, heads = 0, kv = 0;
  std::uint64_t seq = 2048, vocab = 32000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--layers", layers, "number of transformer layers")->required();
    cmd->add_option("--dmodel", dmodel, "model width")->required();
    cmd->add_option("--ffw", ffw, "feed-forward hidden size")->required();
    cmd->add_option("--heads", heads, "number of attention heads")->required();
    cmd->add_option("--kv", kv, "per-head key/value width")->required();
    cmd->add_option("--seq", seq, "tokens per sequence");
    cmd->add_option("--vocab", vocab, "vocabulary size");
  }

  ModelShape shape() const { return {layers, dmodel, ffw, kv, heads, vocab, seq}; }
};

ParametricParams parse_params(const std::string& text) {
  const std::vector<double> v = parse_list(text, "--params");
  if (v.size() != 5)
    throw CLI::ValidationError("--params", "expected E,A,B,alpha,beta (5 values)");
  ParametricParams p{v[0], v[1], v[2], v[3], v[4]};
  p.validate();
  return p;
}

FileFormat parse_format(const std::string& text) {
  if (text == "csv") return FileFormat::csv;
  if (text == "json") return FileFormat::json;
  throw CLI::ValidationError("--format", "expected csv or json");
}

void write_or_print(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  scalex::detail::write_file(out_path, content);
}

void print_fit_summary(const ScalingFit& fit) {
  std::cout << "approach:  " << to_string(fit.approach) << "\n";
  std::cout << "N_opt(C) = " << fmt17(fit.n_coeff) << " * C^" << fmt17(fit.a) << "\n";
  std::cout << "D_opt(C) = " << fmt17(fit.d_coeff) << " * C^" << fmt17(fit.b) << "\n";
  if (fit.params) {
    std::cout << "params:    E=" << fmt17(fit.params->E) << " A=" << fmt17(fit.params->A)
              << " B=" << fmt17(fit.params->B) << " alpha=" << fmt17(fit.params->alpha)
              << " beta=" << fmt17(fit.params->beta) << "\n";
  }
  std::cout << "residuals: n=" << fit.diagnostics.count
            << " mean|log r|=" << fmt(fit.diagnostics.mean_abs_log_residual)
            << " max|log r|=" << fmt(fit.diagnostics.max_abs_log_residual) << "\n";
  if (fit.diagnostics.flops_max > 0.0)
    std::cout << "fitted C:  [" << fmt(fit.diagnostics.flops_min) << ", "
              << fmt(fit.diagnostics.flops_max) << "]\n";
  if (fit.intervals) {
    std::cout << "a: " << fmt(fit.intervals->a.point) << "  (p10 " << fmt(fit.intervals->a.p10)
              << ", p90 " << fmt(fit.intervals->a.p90) << ")\n";
    std::cout << "b: " << fmt(fit.intervals->b.point) << "  (p10 " << fmt(fit.intervals->b.p10)
              << ", p90 " << fmt(fit.intervals->b.p90) << ")\n";
  }
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"scalex: compute-optimal model/token allocation from loss curves"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file mirroring the flags");
  int threads = 0;
  app.add_option("--threads", threads, "cap on worker threads (default: SCALEX_THREADS or hardware)");

  // ---- flops ----
  auto* flops_cmd = app.add_subcommand("flops", "exact transformer FLOPs accounting");
  ShapeFlags flops_shape;
  flops_shape.attach(flops_cmd);
  double flops_tokens = 0.0;
  flops_cmd->add_option("--tokens", flops_tokens, "training tokens for the total (default: one sequence)");

  // ---- params ----
  auto* params_cmd = app.add_subcommand("params", "dense-transformer parameter count");
  ShapeFlags params_shape;
  params_shape.attach(params_cmd);
  std::string embedding = "tied";
  params_cmd->add_option("--embedding", embedding, "tied|untied")
      ->check(CLI::IsMember({"tied", "untied"}));

  // ---- envelope ----
  auto* env_cmd = app.add_subcommand("envelope", "loss-minimal envelope of training runs");
  std::string env_input, env_out, env_format = "csv";
  int env_grid = 1500, env_window = 10, env_segments = 0;
  env_cmd->add_option("--input", env_input, "runs file")->required();
  env_cmd->add_option("--format", env_format, "input format: csv|json");
  env_cmd->add_option("--n-grid", env_grid, "grid points across the FLOPs span");
  env_cmd->add_option("--window", env_window, "smoothing window (points)");
  env_cmd->add_option("--frontier-segment", env_segments,
                      "also fit N-vs-C power laws to this many contiguous segments");
  env_cmd->add_option("--out", env_out, "output CSV (default: stdout)");

  // ---- plotdata ----
  auto* plot_cmd = app.add_subcommand("plotdata", "per-run curves plus envelope for plotting");
  std::string plot_input, plot_out, plot_format = "csv";
  int plot_grid = 1500, plot_window = 10;
  plot_cmd->add_option("--input", plot_input, "runs file")->required();
  plot_cmd->add_option("--format", plot_format, "input format: csv|json");
  plot_cmd->add_option("--n-grid", plot_grid, "grid points across the FLOPs span");
  plot_cmd->add_option("--window", plot_window, "smoothing window (points)");
  plot_cmd->add_option("--out", plot_out, "output CSV (default: stdout)");

  // ---- fit ----
  auto* fit_cmd = app.add_subcommand("fit", "estimate the compute-optimal frontier");
  int fit_approach = 0;
  std::string fit_input, fit_out, fit_format = "csv", fit_grid = "full";
  int fit_ngrid = 1500, fit_window = 10;
  double fit_delta = 1e-3, fit_budget_tol = 0.01;
  fit_cmd->add_option("--approach", fit_approach, "1: envelope, 2: isoflop, 3: parametric")
      ->required()
      ->check(CLI::Range(1, 3));
  fit_cmd->add_option("--input", fit_input,
                      "runs file (approach 1) or final-points CSV (approaches 2/3)")
      ->required();
  fit_cmd->add_option("--format", fit_format, "runs input format: csv|json");
  fit_cmd->add_option("--out", fit_out, "write the fit as JSON");
  fit_cmd->add_option("--n-grid", fit_ngrid, "approach 1: envelope grid points");
  fit_cmd->add_option("--window", fit_window, "approach 1: smoothing window");
  fit_cmd->add_option("--delta", fit_delta, "approach 3: Huber transition scale");
  fit_cmd->add_option("--grid", fit_grid, "approach 3: init grid, full|reduced")
      ->check(CLI::IsMember({"full", "reduced"}));
  fit_cmd->add_option("--budget-tol", fit_budget_tol,
                      "approach 2: relative tolerance when grouping budgets");
  int fit_segments = 0;
  fit_cmd->add_option("--frontier-segment", fit_segments,
                      "approach 1: report per-segment frontier exponents as a curvature check");

  // ---- predict ----
  auto* pred_cmd = app.add_subcommand("predict", "optimal allocation from a saved fit");
  std::string pred_fit;
  double pred_flops = 0.0, pred_params = 0.0;
  pred_cmd->add_option("--fit", pred_fit, "fit JSON")->required();
  auto* pred_flops_opt = pred_cmd->add_option("--flops", pred_flops, "compute budget C");
  auto* pred_params_opt =
      pred_cmd->add_option("--params", pred_params, "model size N (inverts the frontier)");
  pred_flops_opt->excludes(pred_params_opt);

  // ---- table ----
  auto* table_cmd = app.add_subcommand("table", "budget table for a list of model sizes");
  std::string table_fit, table_sizes, table_format = "table";
  table_cmd->add_option("--fit", table_fit, "fit JSON")->required();
  table_cmd->add_option("--sizes", table_sizes, "comma-separated model sizes")->required();
  table_cmd->add_option("--format", table_format, "table|csv")
      ->check(CLI::IsMember({"table", "csv"}));

  // ---- bootstrap ----
  auto* boot_cmd = app.add_subcommand("bootstrap", "percentile intervals by resampling");
  int boot_approach = 0;
  std::string boot_input, boot_format = "csv", boot_out;
  std::uint64_t boot_n = 100, boot_seed = 0;
  double boot_frac = 0.8, boot_delta = 1e-3;
  bool boot_reduced = true;
  boot_cmd->add_option("--approach", boot_approach, "1|2|3")->required()->check(CLI::Range(1, 3));
  boot_cmd->add_option("--input", boot_input, "runs file or final-points CSV")->required();
  boot_cmd->add_option("--format", boot_format, "runs input format: csv|json");
  boot_cmd->add_option("--n", boot_n, "number of resamples");
  boot_cmd->add_option("--frac", boot_frac, "fraction resampled without replacement");
  boot_cmd->add_option("--seed", boot_seed, "RNG seed")->required();
  boot_cmd->add_option("--delta", boot_delta, "approach 3: Huber transition scale");
  boot_cmd->add_flag("--full-grid,!--reduced-grid", boot_reduced,
                     "approach 3: reduced init grid per resample (default) or full");
  boot_cmd->add_option("--out", boot_out, "write the point fit with intervals as JSON");

  // ---- synth ----
  auto* synth_cmd = app.add_subcommand("synth", "synthetic data from a parametric ground truth");
  synth_cmd->require_subcommand(1);
  auto* synth_runs = synth_cmd->add_subcommand("runs", "training-run suite (runs CSV)");
  std::string sr_params = "1.69,406.4,410.7,0.34,0.28";
  std::string sr_sizes, sr_horizon_mults = "1.0,1.5,2.2,3.2", sr_out;
  int sr_points = 50;
  double sr_penalty = 0.05, sr_sigma = 0.0, sr_span = 2.2;
  std::uint64_t sr_seed = 0;
  synth_runs->add_option("--params", sr_params, "E,A,B,alpha,beta ground truth");
  synth_runs->add_option("--sizes", sr_sizes, "comma-separated model sizes")->required();
  synth_runs->add_option("--horizon-mults", sr_horizon_mults,
                         "cycle horizons as multiples of each size's optimal tokens");
  synth_runs->add_option("--points", sr_points, "observations per run");
  synth_runs->add_option("--penalty", sr_penalty, "cycle-mismatch penalty on intermediate points");
  synth_runs->add_option("--sigma", sr_sigma, "log-loss noise");
  synth_runs->add_option("--span", sr_span, "d_max/d_first ratio of the checkpoints");
  synth_runs->add_option("--seed", sr_seed, "RNG seed")->required();
  synth_runs->add_option("--out", sr_out, "output runs CSV (default: stdout)");

  auto* synth_iso = synth_cmd->add_subcommand("isoflop", "final-points suite (points CSV)");
  std::string si_params = "1.69,406.4,410.7,0.34,0.28";
  std::string si_budgets, si_out;
  int si_sizes = 7;
  double si_spread = 1.0, si_sigma = 0.0;
  std::uint64_t si_seed = 0;
  synth_iso->add_option("--params", si_params, "E,A,B,alpha,beta ground truth");
  synth_iso->add_option("--budgets", si_budgets, "comma-separated FLOPs budgets")->required();
  synth_iso->add_option("--sizes-per-budget", si_sizes, "model sizes per budget");
  synth_iso->add_option("--spread", si_spread, "half-width of the size sweep in decades");
  synth_iso->add_option("--sigma", si_sigma, "log-loss noise");
  synth_iso->add_option("--seed", si_seed, "RNG seed")->required();
  synth_iso->add_option("--out", si_out, "output points CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kExitOk;  // --help and friends
    for (const auto& stray : app.remaining(true)) suggest_flag(app, stray);
    return kExitUsage;
  }

  // ---- dispatch ----
  if (flops_cmd->parsed()) {
    const ModelShape shape = flops_shape.shape();
    const FlopsBreakdown b = forward_flops(shape);
    std::cout << "embeddings      " << fmt17(b.embeddings) << "\n";
    std::cout << "kqv             " << fmt17(b.attention_per_layer.kqv) << "\n";
    std::cout << "key_query       " << fmt17(b.attention_per_layer.key_query) << "\n";
    std::cout << "softmax         " << fmt17(b.attention_per_layer.softmax) << "\n";
    std::cout << "softmax_query   " << fmt17(b.attention_per_layer.softmax_query) << "\n";
    std::cout << "final_linear    " << fmt17(b.attention_per_layer.final_linear) << "\n";
    std::cout << "dense           " << fmt17(b.dense_per_layer) << "\n";
    std::cout << "logits          " << fmt17(b.logits) << "\n";
    std::cout << "forward_total   " << fmt17(b.forward_total) << "\n";
    std::cout << "train_total     " << fmt17(b.train_total) << "\n";
    if (flops_tokens > 0.0)
      std::cout << "train(" << fmt(flops_tokens) << " tokens) " << fmt17(train_flops(shape, flops_tokens))
                << "\n";
    return kExitOk;
  }

  if (params_cmd->parsed()) {
    const auto policy = embedding == "tied" ? EmbeddingPolicy::tied : EmbeddingPolicy::untied;
    std::cout << count_params(params_shape.shape(), policy) << "\n";
    return kExitOk;
  }

  if (env_cmd->parsed()) {
    const std::vector<RunRecord> runs =
        smooth_runs(load_runs(env_input, parse_format(env_format)), env_window);
    EnvelopeOptions opt;
    opt.n_grid = env_grid;
    const Envelope env = extract_envelope(runs, opt);
    write_or_print(envelope_csv(env), env_out);
    std::cerr << "envelope: " << env.points.size() << " points, "
              << fmt(100.0 * env.fraction_in_final_15pct)
              << "% of winners in the final 15% of their run\n";
    if (env_segments > 0) {
      std::cerr << "segment exponents (N vs C):";
      for (const auto& seg : segmented_frontier_fit(env.points, env_segments))
        std::cerr << " " << fmt(seg.exponent);
      std::cerr << "\n";
    }
    return kExitOk;
  }

  if (plot_cmd->parsed()) {
    const std::vector<RunRecord> runs =
        smooth_runs(load_runs(plot_input, parse_format(plot_format)), plot_window);
    EnvelopeOptions opt;
    opt.n_grid = plot_grid;
    const Envelope env = extract_envelope(runs, opt);
    write_or_print(plotdata_csv(runs, env), plot_out);
    return kExitOk;
  }

  if (fit_cmd->parsed()) {
    ScalingFit fit;
    if (fit_approach == 1) {
      Approach1Options opt;
      opt.n_grid = fit_ngrid;
      opt.smooth_window = fit_window;
      const std::vector<RunRecord> runs = load_runs(fit_input, parse_format(fit_format));
      fit = approach1(runs, opt);
      if (fit_segments > 0) {
        EnvelopeOptions env_opt;
        env_opt.n_grid = fit_ngrid;
        const Envelope env = extract_envelope(smooth_runs(runs, fit_window), env_opt);
        std::cerr << "segment exponents (N vs C):";
        for (const auto& seg : segmented_frontier_fit(env.points, fit_segments))
          std::cerr << " " << fmt(seg.exponent);
        std::cerr << "\n";
      }
    } else if (fit_approach == 2) {
      Approach2Options opt;
      opt.budget_tolerance = fit_budget_tol;
      fit = approach2(load_final_points(fit_input), opt);
    } else {
      Approach3Options opt;
      opt.multistart.grid = fit_grid == "full" ? InitGrid::full() : InitGrid::reduced();
      opt.multistart.delta = fit_delta;
      opt.multistart.threads = threads;
      MultistartFitResult info;
      fit = approach3(load_final_points(fit_input), opt, &info);
      std::cerr << "multistart: " << info.n_converged << "/" << info.n_starts
                << " starts converged; winner init "
                << (info.winner_init_on_boundary ? "on" : "off") << " the grid boundary\n";
    }
    print_fit_summary(fit);
    if (!fit_out.empty()) save_fit(fit, fit_out);
    return kExitOk;
  }

  if (pred_cmd->parsed()) {
    const ScalingFit fit = load_fit(pred_fit);
    if (pred_flops > 0.0) {
      const OptAllocation opt = predict_opt(fit, pred_flops);
      std::cout << "C        " << fmt17(pred_flops) << "\n";
      std::cout << "N_opt    " << fmt17(opt.n_opt) << "\n";
      std::cout << "D_opt    " << fmt17(opt.d_opt) << "\n";
      if (opt.loss_hat) std::cout << "loss_hat " << fmt17(*opt.loss_hat) << "\n";
      if (opt.extrapolated)
        std::cout << "warning: C is outside the fitted range ["
                  << fmt(fit.diagnostics.flops_min) << ", " << fmt(fit.diagnostics.flops_max)
                  << "] (extrapolation)\n";
    } else if (pred_params > 0.0) {
      const std::vector<BudgetRow> rows = budget_table(fit, {pred_params});
      const BudgetRow& row = rows.front();
      std::cout << "N        " << fmt17(row.n_params) << "\n";
      std::cout << "C        " << fmt17(row.flops) << "\n";
      std::cout << "C/gopher " << fmt17(row.flops_gopher_units) << "\n";
      std::cout << "D        " << fmt17(row.tokens) << "\n";
      if (row.extrapolated) std::cout << "warning: C is outside the fitted range (extrapolation)\n";
    } else {
      std::cerr << "predict: provide --flops or --params\n";
      return kExitUsage;
    }
    return kExitOk;
  }

  if (table_cmd->parsed()) {
    const ScalingFit fit = load_fit(table_fit);
    const std::vector<BudgetRow> rows = budget_table(fit, parse_list(table_sizes, "--sizes"));
    if (table_format == "csv") {
      std::cout << "n_params,flops,flops_gopher_units,tokens,tokens_independent,extrapolated\n";
      for (const auto& r : rows)
        std::cout << fmt17(r.n_params) << "," << fmt17(r.flops) << ","
                  << fmt17(r.flops_gopher_units) << "," << fmt17(r.tokens) << ","
                  << fmt17(r.tokens_independent) << "," << (r.extrapolated ? 1 : 0) << "\n";
    } else {
      std::printf("%14s %12s %14s %14s %16s\n", "params", "flops", "flops(gopher)", "tokens",
                  "tokens(indep)");
      for (const auto& r : rows)
        std::printf("%14.6g %12.4g %14.6g %14.6g %16.6g%s\n", r.n_params, r.flops,
                    r.flops_gopher_units, r.tokens, r.tokens_independent,
                    r.extrapolated ? "  [extrapolated]" : "");
    }
    return kExitOk;
  }

  if (boot_cmd->parsed()) {
    BootstrapOptions opt;
    opt.n_resamples = boot_n;
    opt.fraction = boot_frac;
    opt.seed = boot_seed;
    opt.threads = threads;
    BootstrapResult result;
    if (boot_approach == 1) {
      result = bootstrap_approach1(load_runs(boot_input, parse_format(boot_format)), {}, opt);
    } else if (boot_approach == 2) {
      result = bootstrap_approach2(load_final_points(boot_input), {}, opt);
    } else {
      Approach3Options fit_opt;
      fit_opt.multistart.grid = boot_reduced ? InitGrid::reduced() : InitGrid::full();
      fit_opt.multistart.delta = boot_delta;
      result = bootstrap_approach3(load_final_points(boot_input), fit_opt, opt);
    }
    std::cout << "a: " << fmt17(result.a.point) << "  (p10 " << fmt17(result.a.p10) << ", p90 "
              << fmt17(result.a.p90) << ")\n";
    std::cout << "b: " << fmt17(result.b.point) << "  (p10 " << fmt17(result.b.p10) << ", p90 "
              << fmt17(result.b.p90) << ")\n";
    std::cout << "resamples: " << result.a.n_resamples << " at fraction "
              << fmt(result.a.resample_fraction) << ", seed " << result.a.seed << ", failed "
              << result.n_failed << "\n";
    if (!boot_out.empty()) {
      ScalingFit fit = result.point_fit;
      fit.intervals = ExponentIntervals{result.a, result.b};
      save_fit(fit, boot_out);
    }
    return kExitOk;
  }

  if (synth_runs->parsed()) {
    const ParametricParams truth = parse_params(sr_params);
    const FrontierConstants fc = closed_form_frontier(truth);
    GenRunOptions opt;
    opt.span = sr_span;
    opt.log_noise_sigma = sr_sigma;
    std::vector<RunRecord> out;
    std::uint64_t run_index = 0;
    for (const double size : parse_list(sr_sizes, "--sizes")) {
      const std::uint64_t n = static_cast<std::uint64_t>(std::llround(size));
      const double c_star = 6.0 * std::pow(size / fc.G, 1.0 / fc.a);
      const double d_star = c_star / (6.0 * size);
      for (const double mult : parse_list(sr_horizon_mults, "--horizon-mults")) {
        const std::uint64_t d_max = static_cast<std::uint64_t>(std::llround(mult * d_star));
        out.push_back(gen_run(truth, n, d_max, sr_points, sr_penalty,
                              Rng::substream(sr_seed, run_index).next_u64(), opt));
        ++run_index;
      }
    }
    if (sr_out.empty()) {
      std::ostringstream ss;
      ss << "run_id,n_params,cosine_cycle_tokens,tokens,loss\n";
      for (const auto& run : out)
        for (const auto& p : run.points)
          ss << run.run_id << "," << run.n_params << "," << run.cosine_cycle_tokens << ","
             << p.tokens << "," << fmt17(p.loss) << "\n";
      std::cout << ss.str();
    } else {
      save_runs(out, sr_out);
    }
    return kExitOk;
  }

  if (synth_iso->parsed()) {
    const ParametricParams truth = parse_params(si_params);
    GenIsoflopOptions opt;
    opt.spread_decades = si_spread;
    opt.log_noise_sigma = si_sigma;
    const std::vector<LossPoint> pts =
        gen_isoflop_suite(truth, parse_list(si_budgets, "--budgets"), si_sizes, si_seed, opt);
    if (si_out.empty()) {
      std::cout << "n_params,tokens,loss\n";
      for (const auto& p : pts)
        std::cout << fmt17(p.n_params) << "," << fmt17(p.tokens) << "," << fmt17(p.loss) << "\n";
    } else {
      save_final_points(pts, si_out);
    }
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const scalex::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const scalex::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
