#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "scalex/types.hpp"

namespace scalex {

// All FLOPs are computed in 64-bit floating point; a multiply-accumulate
// counts as 2 operations. Parameter counts use 64-bit integers.

struct AttentionFlops {
  double kqv = 0.0;            // key, query and value projections
  double key_query = 0.0;      // key @ query logits
  double softmax = 0.0;
  double softmax_query = 0.0;  // softmax @ query reductions
  double final_linear = 0.0;

  double total() const {
    return kqv + key_query + softmax + softmax_query + final_linear;
  }
};

/// Itemized forward/training FLOPs for one sequence of seq_len tokens.
struct FlopsBreakdown {
  double embeddings = 0.0;
  AttentionFlops attention_per_layer;
  double dense_per_layer = 0.0;
  double logits = 0.0;
  double forward_total = 0.0;  // sum of the parts, exact
  double train_total = 0.0;    // 3 x forward: backward pass costs twice the forward
};

/// Exact per-sequence FLOPs accounting.
inline FlopsBreakdown forward_flops(const ModelShape& shape) {
  shape.validate();
  const double s = static_cast<double>(shape.seq_len);
  const double d = static_cast<double>(shape.d_model);
  const double f = static_cast<double>(shape.ffw_size);
  const double h = static_cast<double>(shape.n_heads);
  const double v = static_cast<double>(shape.vocab_size);
  const double layers = static_cast<double>(shape.n_layers);
  const double kq = static_cast<double>(shape.key_size) * h;  // key_size * num_heads

  FlopsBreakdown out;
  out.embeddings = 2.0 * s * v * d;
  out.attention_per_layer.kqv = 2.0 * 3.0 * s * d * kq;
  out.attention_per_layer.key_query = 2.0 * s * s * kq;
  out.attention_per_layer.softmax = 3.0 * h * s * s;
  out.attention_per_layer.softmax_query = 2.0 * s * s * kq;
  out.attention_per_layer.final_linear = 2.0 * s * kq * d;
  out.dense_per_layer = 2.0 * s * (d * f + d * f);
  out.logits = 2.0 * s * d * v;
  out.forward_total = out.embeddings +
                      layers * (out.attention_per_layer.total() + out.dense_per_layer) +
                      out.logits;
  out.train_total = 3.0 * out.forward_total;
  if (!std::isfinite(out.train_total))
    throw NumericalError("forward_flops: non-finite FLOPs term (shape too large)");
  return out;
}

/// Exact training FLOPs for n_tokens tokens; linear in n_tokens, fractional
/// sequences allowed.
inline double train_flops(const ModelShape& shape, double n_tokens) {
  if (!(n_tokens > 0.0)) throw ValidationError("train_flops: n_tokens must be positive");
  const FlopsBreakdown b = forward_flops(shape);
  return b.train_total * (n_tokens / static_cast<double>(shape.seq_len));
}

/// The common estimate C = 6 N D.
inline double approx_flops(double n_params, double n_tokens) {
  if (!(n_params > 0.0) || !(n_tokens > 0.0))
    throw ValidationError("approx_flops: n_params and n_tokens must be positive");
  return 6.0 * n_params * n_tokens;
}

enum class EmbeddingPolicy { tied, untied };

/// Dense-transformer parameter count: V*d embedding (twice if untied) plus
/// per-layer attention and feed-forward weights. Excludes layer-norm, bias
/// and positional-encoding parameters.
inline std::uint64_t count_params(const ModelShape& shape, EmbeddingPolicy policy) {
  shape.validate();
  const std::uint64_t d = shape.d_model;
  std::uint64_t total = shape.vocab_size * d;
  if (policy == EmbeddingPolicy::untied) total += shape.vocab_size * d;
  const std::uint64_t attn = 4 * d * (shape.key_size * shape.n_heads);
  const std::uint64_t dense = 2 * d * shape.ffw_size;
  total += shape.n_layers * (attn + dense);
  return total;
}

enum class FlopRatioPolicy { include_embeddings, exclude_embeddings };

/// Ratio of the exact per-sequence training FLOPs to the 6ND estimate at
/// D = seq_len. Under exclude_embeddings the embeddings and logits terms are
/// dropped from the numerator.
inline double flop_ratio(const ModelShape& shape, double n_params, FlopRatioPolicy policy) {
  if (!(n_params > 0.0)) throw ValidationError("flop_ratio: n_params must be positive");
  const FlopsBreakdown b = forward_flops(shape);
  double forward = b.forward_total;
  if (policy == FlopRatioPolicy::exclude_embeddings) forward -= b.embeddings + b.logits;
  const double s = static_cast<double>(shape.seq_len);
  return (3.0 * forward) / approx_flops(n_params, s);
}

/// Maps a run to its FLOPs scale. Both conventions are linear in tokens:
/// flops = per_token(run) * tokens.
class FlopsCalc {
 public:
  using ShapeResolver = std::function<ModelShape(const RunRecord&)>;

  static FlopsCalc approx6nd() { return FlopsCalc(FlopsConvention::approx_6nd, nullptr); }

  /// Exact accounting; the resolver supplies the architecture behind a run.
  static FlopsCalc exact(ShapeResolver resolver) {
    if (!resolver) throw ValidationError("FlopsCalc::exact: null shape resolver");
    return FlopsCalc(FlopsConvention::exact, std::move(resolver));
  }

  FlopsConvention convention() const { return convention_; }

  double per_token(const RunRecord& run) const {
    if (convention_ == FlopsConvention::approx_6nd)
      return 6.0 * static_cast<double>(run.n_params);
    const ModelShape shape = resolver_(run);
    const FlopsBreakdown b = forward_flops(shape);
    return b.train_total / static_cast<double>(shape.seq_len);
  }

  double flops_at(const RunRecord& run, double tokens) const {
    return per_token(run) * tokens;
  }

  double tokens_at(const RunRecord& run, double flops) const {
    return flops / per_token(run);
  }

 private:
  FlopsCalc(FlopsConvention c, ShapeResolver r) : convention_(c), resolver_(std::move(r)) {}

  FlopsConvention convention_;
  ShapeResolver resolver_;
};

}  // namespace scalex
