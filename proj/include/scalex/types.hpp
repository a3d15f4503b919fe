#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalex {

/// Malformed input data or a violated domain invariant. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a meaningful result. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transformer architectural hyperparameters used for FLOPs and parameter
/// accounting. No constraint ties ffw_size to d_model.
struct ModelShape {
  std::uint64_t n_layers = 0;
  std::uint64_t d_model = 0;
  std::uint64_t ffw_size = 0;
  std::uint64_t key_size = 0;  // per-head key/value width
  std::uint64_t n_heads = 0;
  std::uint64_t vocab_size = 0;
  std::uint64_t seq_len = 0;  // tokens per sequence

  void validate() const {
    auto require = [](std::uint64_t v, const char* name) {
      if (v == 0) {
        throw ValidationError(std::string("ModelShape: ") + name +
                              " must be a strictly positive integer");
      }
    };
    require(n_layers, "n_layers");
    require(d_model, "d_model");
    require(ffw_size, "ffw_size");
    require(key_size, "key_size");
    require(n_heads, "n_heads");
    require(vocab_size, "vocab_size");
    require(seq_len, "seq_len");
  }
};

struct LossObservation {
  std::uint64_t tokens = 0;  // cumulative training tokens D
  double loss = 0.0;         // training loss L at that point
};

/// One training run: a fixed model trained under one cosine-cycle horizon,
/// with an ordered series of (tokens, loss) observations.
struct RunRecord {
  std::string run_id;
  std::uint64_t n_params = 0;            // N, includes embedding parameters
  std::uint64_t cosine_cycle_tokens = 0; // schedule horizon for this run
  std::vector<LossObservation> points;   // ascending in tokens

  void validate() const {
    if (run_id.empty()) throw ValidationError("RunRecord: empty run_id");
    if (n_params == 0)
      throw ValidationError("run " + run_id + ": n_params must be positive");
    if (cosine_cycle_tokens == 0)
      throw ValidationError("run " + run_id +
                            ": cosine_cycle_tokens must be positive");
    if (points.size() < 2)
      throw ValidationError("run " + run_id +
                            ": at least 2 points required for interpolation");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!(points[i].loss > 0.0) || !std::isfinite(points[i].loss))
        throw ValidationError("run " + run_id + ": loss at tokens=" +
                              std::to_string(points[i].tokens) +
                              " must be positive and finite");
      if (points[i].tokens == 0)
        throw ValidationError("run " + run_id + ": tokens must be positive");
      if (i > 0 && points[i].tokens <= points[i - 1].tokens)
        throw ValidationError("run " + run_id +
                              ": tokens must be strictly increasing (at tokens=" +
                              std::to_string(points[i].tokens) + ")");
    }
  }
};

/// Convention under which a FLOPs value was produced.
enum class FlopsConvention { approx_6nd, exact };

inline const char* to_string(FlopsConvention c) {
  return c == FlopsConvention::approx_6nd ? "6nd" : "exact";
}

/// A point on the loss-minimal envelope: at compute C the winning model has
/// N parameters, has seen D tokens, and achieves loss L.
struct FrontierPoint {
  double flops = 0.0;        // C
  std::uint64_t n_params = 0;
  double tokens = 0.0;       // D implied by C under the active convention
  double loss = 0.0;
};

/// The five fitted constants of the parametric loss
///   L(N, D) = E + A / N^alpha + B / D^beta.
struct ParametricParams {
  double E = 0.0;  // irreducible loss
  double A = 0.0;
  double B = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    auto require = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("ParametricParams: ") + name +
                              " must be strictly positive and finite");
      }
    };
    require(E, "E");
    require(A, "A");
    require(B, "B");
    require(alpha, "alpha");
    require(beta, "beta");
  }

  /// Predicted loss; > E for all finite n, d.
  double predict_loss(double n, double d) const {
    return E + A * std::pow(n, -alpha) + B * std::pow(d, -beta);
  }
};

/// One (N, D, L) observation, used by the isoFLOP and parametric fits.
/// N and D are stored as reals: token counts on a 6ND budget are generally
/// fractional.
struct LossPoint {
  double n_params = 0.0;
  double tokens = 0.0;
  double loss = 0.0;

  void validate() const {
    auto require = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("LossPoint: ") + name +
                              " must be strictly positive and finite");
      }
    };
    require(n_params, "n_params");
    require(tokens, "tokens");
    require(loss, "loss");
  }
};

enum class Approach { envelope = 1, isoflop = 2, parametric = 3 };

inline const char* to_string(Approach a) {
  switch (a) {
    case Approach::envelope: return "envelope";
    case Approach::isoflop: return "isoflop";
    case Approach::parametric: return "parametric";
  }
  return "?";
}

/// Empirical percentile interval for one fitted quantity.
struct BootstrapSummary {
  double point = 0.0;  // full-data estimate
  double p10 = 0.0;
  double p90 = 0.0;
  std::uint64_t n_resamples = 0;
  double resample_fraction = 0.0;  // in (0, 1]
  std::uint64_t seed = 0;
};

struct ExponentIntervals {
  BootstrapSummary a;
  BootstrapSummary b;
};

/// Residual summary plus the FLOPs range the fit was estimated on.
/// Residuals are absolute natural-log residuals of the approach's primary
/// fit: log-N residuals for the envelope/isoFLOP power laws, log-loss
/// residuals for the parametric fit.
struct FitDiagnostics {
  std::uint64_t count = 0;
  double mean_abs_log_residual = 0.0;
  double max_abs_log_residual = 0.0;
  double flops_min = 0.0;
  double flops_max = 0.0;
};

/// An estimated compute-optimal frontier:
///   N_opt(C) = n_coeff * C^a,   D_opt(C) = d_coeff * C^b.
struct ScalingFit {
  Approach approach = Approach::envelope;
  double a = 0.0;
  double b = 0.0;
  double n_coeff = 0.0;
  double d_coeff = 0.0;
  std::optional<ParametricParams> params;
  FitDiagnostics diagnostics;
  std::optional<ExponentIntervals> intervals;

  void validate() const {
    auto require_finite = [](double v, const char* name) {
      if (!std::isfinite(v)) {
        throw ValidationError(std::string("ScalingFit: ") + name +
                              " must be finite");
      }
    };
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(n_coeff, "n_coeff");
    require_finite(d_coeff, "d_coeff");
    if (!(n_coeff > 0.0)) throw ValidationError("ScalingFit: n_coeff must be positive");
    if (!(d_coeff > 0.0)) throw ValidationError("ScalingFit: d_coeff must be positive");
    if (params) params->validate();
  }
};

}  // namespace scalex
