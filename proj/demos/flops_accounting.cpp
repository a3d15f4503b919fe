// Prints the exact-vs-6ND FLOPs ratio for the bundled model configurations.

#include <cstdio>
#include <string>
#include <vector>

#include "scalex/flops.hpp"
#include "scalex/io.hpp"

using namespace scalex;

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "data/models.csv";
  const std::vector<ModelConfig> configs = load_model_configs(path);
  std::printf("%14s %9s %9s %12s %12s\n", "params(M)", "layers", "d_model", "ratio(excl)",
              "ratio(incl)");
  for (const auto& cfg : configs) {
    const double n = cfg.params_million * 1e6;
    std::printf("%14.0f %9llu %9llu %12.3f %12.3f\n", cfg.params_million,
                static_cast<unsigned long long>(cfg.shape.n_layers),
                static_cast<unsigned long long>(cfg.shape.d_model),
                flop_ratio(cfg.shape, n, FlopRatioPolicy::exclude_embeddings),
                flop_ratio(cfg.shape, n, FlopRatioPolicy::include_embeddings));
  }
  return 0;
}
