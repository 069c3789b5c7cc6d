#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agc/kmeans.hpp"
#include "agc/sbm.hpp"
#include "agc/smoothing.hpp"
#include "agc/train.hpp"

namespace agc {

enum class Method { kmeans, dmon, mincut, dec };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

struct SbmDatasetConfig {
  SbmSpec spec;
  std::uint64_t feature_dim = 16;
  double feature_sep = 1.0;  // block-mean scale; 0 = uninformative features
};

struct PipelineConfig {
  std::variant<std::filesystem::path, SbmDatasetConfig> dataset;
  std::optional<SmoothingConfig> smoothing;
  bool standardize = false;
  Method method = Method::kmeans;
  std::uint32_t k = 2;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;

  // method_params (defaults filled at parse time)
  KMeansConfig kmeans;    // kmeans method
  TrainConfig train;      // dmon / mincut / dec

  void validate() const;
};

// Strict YAML-subset config: scalars, maps, sequences; unknown keys are
// rejected, anchors/merge keys are not supported.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace agc
