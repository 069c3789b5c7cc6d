#include "agc/pipeline.hpp"

#include <fstream>
#include <iostream>

#include "agc/dataset_io.hpp"
#include "agc/errors.hpp"
#include "agc/train.hpp"

namespace fs = std::filesystem;

namespace agc {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct RunOutput {
  MetricsReport metrics;
  RunProfile profile;
};

RunOutput run_one(const PipelineConfig& cfg, std::uint64_t seed) {
  Profiler prof;
  CsrGraph graph;
  FeatureMatrix features;
  std::optional<LabelVector> labels;
  {
    auto scope = prof.phase("load");
    if (std::holds_alternative<fs::path>(cfg.dataset)) {
      Dataset ds = load_dataset(std::get<fs::path>(cfg.dataset));
      graph = std::move(ds.graph);
      features = std::move(ds.features);
      labels = std::move(ds.labels);
    } else {
      const auto& sd = std::get<SbmDatasetConfig>(cfg.dataset);
      SbmSpec spec = sd.spec;
      spec.seed = mix(sd.spec.seed, seed);  // fresh graph per run seed
      auto [g, lv] = generate_sbm(spec);
      graph = std::move(g);
      labels = std::move(lv);
      features = block_features(*labels, sd.feature_dim, sd.feature_sep, spec.seed);
    }
  }

  Embedding z;
  {
    auto scope = prof.phase("encode");
    const FeatureMatrix* x = &features;
    FeatureMatrix standardized;
    if (cfg.standardize) {
      standardized = standardize_features(features);
      x = &standardized;
    }
    if (cfg.smoothing) {
      if (cfg.smoothing->variant == SmoothingVariant::ssgc_average) {
        z = ssgc_smooth(graph, *x, *cfg.smoothing);
      } else {
        z = normalized_propagate(graph, *x, cfg.smoothing->num_hops,
                                 cfg.smoothing->add_self_loops);
      }
    } else {
      z = *x;
    }
  }

  HardAssignment hard;
  std::vector<EpochLog> log;
  {
    auto scope = prof.phase("cluster");
    if (cfg.method == Method::kmeans) {
      KMeansConfig km = cfg.kmeans;
      km.seed = seed;
      hard = kmeans_fit(z, km).assignment;
    } else {
      TrainConfig tc = cfg.train;
      tc.seed = seed;
      TrainResult tr = train(graph, z, tc);
      hard = argmax_rows(tr.assignment);
      log = std::move(tr.log);
    }
  }

  RunOutput out;
  {
    auto scope = prof.phase("evaluate");
    out.metrics = evaluate(graph, hard, labels ? &*labels : nullptr);
  }

  const std::string tag = "_seed" + std::to_string(seed);
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream f(cfg.output_dir / ("metrics" + tag + ".json"));
    f << metrics_to_json(out.metrics);
  }
  write_assignments(cfg.output_dir / ("assignments" + tag + ".tsv"), hard);
  if (!log.empty()) {
    write_training_log((cfg.output_dir / ("training_log" + tag + ".tsv")).string(), log);
  }
  out.profile = prof.finish();
  {
    std::ofstream f(cfg.output_dir / ("profile" + tag + ".json"));
    f << profile_to_json(out.profile);
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult res;
  for (std::size_t r = 0; r < cfg.seeds.size(); ++r) {
    const std::uint64_t seed = cfg.seeds[r];
    try {
      RunOutput out = run_one(cfg, seed);
      res.seeds.push_back(seed);
      res.per_seed.push_back(out.metrics);
      res.profiles.push_back(out.profile);
    } catch (const std::exception& e) {
      std::cerr << "run " << r << " (seed " << seed << ") failed: " << e.what() << "\n";
      throw;  // partial per-seed outputs stay on disk
    }
  }
  res.aggregate = aggregate_metrics(res.per_seed);
  std::ofstream f(cfg.output_dir / "aggregate.json");
  f << aggregate_to_json(res.aggregate);
  return res;
}

}  // namespace agc
