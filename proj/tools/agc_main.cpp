// agc: attributed-graph-clustering pipeline runner.
//
// Subcommands: gen-sbm, smooth, cluster, train, eval, bench.
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "agc/dataset_io.hpp"
#include "agc/errors.hpp"
#include "agc/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::uint64_t> parse_blocks(const std::string& spec) {
  std::vector<std::uint64_t> blocks;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    const std::string tok = spec.substr(pos, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - pos);
    try {
      blocks.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw agc::InvalidConfig("bad --blocks entry: '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return blocks;
}

int run(int argc, char** argv) {
  CLI::App app{"attributed graph clustering engine"};
  app.require_subcommand(1);

  // gen-sbm
  auto* gen = app.add_subcommand("gen-sbm", "generate a planted-partition dataset");
  std::string gen_blocks;
  double gen_p_in = 0.3, gen_p_out = 0.02;
  std::uint64_t gen_seed = 0, gen_fdim = 16;
  double gen_fsep = 1.0;
  std::string gen_out;
  gen->add_option("--blocks", gen_blocks, "comma-separated block sizes")->required();
  gen->add_option("--p-in", gen_p_in, "intra-block edge probability");
  gen->add_option("--p-out", gen_p_out, "inter-block edge probability");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--feature-dim", gen_fdim, "attribute dimensionality");
  gen->add_option("--feature-sep", gen_fsep,
                  "block-mean scale of the attributes (0 = uninformative)");
  gen->add_option("--out", gen_out, "output dataset directory")->required();

  // smooth
  auto* smooth = app.add_subcommand("smooth", "write smoothed embeddings");
  std::string smooth_in, smooth_out, smooth_variant = "ssgc_average";
  std::uint32_t smooth_hops = 16;
  double smooth_alpha = 0.05;
  bool smooth_no_self_loops = false;
  smooth->add_option("--in", smooth_in, "dataset directory")->required();
  smooth->add_option("--hops", smooth_hops, "propagation steps");
  smooth->add_option("--alpha", smooth_alpha, "teleport weight");
  smooth->add_option("--variant", smooth_variant, "sgc_power | ssgc_average");
  smooth->add_flag("--no-self-loops", smooth_no_self_loops, "propagate without self loops");
  smooth->add_option("--out", smooth_out, "output embedding file (AGCZ)")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "kmeans clustering of a dataset");
  std::string cluster_in, cluster_out, cluster_embedding;
  std::uint32_t cluster_k = 2;
  std::uint64_t cluster_seed = 0;
  std::uint64_t cluster_batch = 0;
  cluster->add_option("--in", cluster_in, "dataset directory")->required();
  cluster->add_option("--k", cluster_k, "number of clusters")->required();
  cluster->add_option("--seed", cluster_seed, "kmeans seed");
  cluster->add_option("--embedding", cluster_embedding,
                      "cluster a saved AGCZ embedding instead of raw features");
  cluster->add_option("--batch-size", cluster_batch, "mini-batch kmeans batch size");
  cluster->add_option("--out", cluster_out, "output directory")->required();

  // train / bench
  auto* train_cmd = app.add_subcommand("train", "joint training from a YAML config");
  std::string train_config;
  train_cmd->add_option("--config", train_config, "pipeline config")->required();
  auto* bench = app.add_subcommand("bench", "config-driven multi-seed benchmark");
  std::string bench_config;
  bench->add_option("--config", bench_config, "pipeline config")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate saved assignments");
  std::string eval_in, eval_assignments;
  eval_cmd->add_option("--in", eval_in, "dataset directory")->required();
  eval_cmd->add_option("--assignments", eval_assignments, "assignments.tsv")->required();

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    agc::SbmSpec spec;
    spec.block_sizes = parse_blocks(gen_blocks);
    spec.p_in = gen_p_in;
    spec.p_out = gen_p_out;
    spec.seed = gen_seed;
    auto [graph, labels] = agc::generate_sbm(spec);
    agc::Dataset ds;
    ds.features = agc::block_features(labels, gen_fdim, gen_fsep, gen_seed);
    ds.graph = std::move(graph);
    ds.labels = std::move(labels);
    agc::save_dataset(gen_out, ds);
    std::cout << "wrote " << gen_out << ": N=" << ds.graph.num_nodes
              << " |E|=" << ds.graph.num_edges() << "\n";
  } else if (*smooth) {
    agc::Dataset ds = agc::load_dataset(smooth_in);
    agc::SmoothingConfig cfg;
    cfg.num_hops = smooth_hops;
    cfg.alpha = smooth_alpha;
    cfg.add_self_loops = !smooth_no_self_loops;
    agc::Embedding z;
    if (smooth_variant == "sgc_power") {
      z = agc::normalized_propagate(ds.graph, ds.features, cfg.num_hops,
                                    cfg.add_self_loops);
    } else if (smooth_variant == "ssgc_average") {
      cfg.variant = agc::SmoothingVariant::ssgc_average;
      z = agc::ssgc_smooth(ds.graph, ds.features, cfg);
    } else {
      throw agc::InvalidConfig("unknown smoothing variant: " + smooth_variant);
    }
    agc::write_matrix(smooth_out, z, "AGCZ");
    std::cout << "wrote " << smooth_out << " (" << z.rows << "x" << z.cols << ")\n";
  } else if (*cluster) {
    agc::Dataset ds = agc::load_dataset(cluster_in);
    agc::Embedding z = cluster_embedding.empty()
                           ? ds.features
                           : agc::read_matrix(cluster_embedding, "AGCZ");
    agc::KMeansConfig cfg;
    cfg.k = cluster_k;
    cfg.seed = cluster_seed;
    if (cluster_batch > 0) cfg.batch_size = cluster_batch;
    agc::KMeansResult res = agc::kmeans_fit(z, cfg);
    fs::create_directories(cluster_out);
    agc::write_assignments(fs::path(cluster_out) / "assignments.tsv", res.assignment);
    agc::MetricsReport rep = agc::evaluate(ds.graph, res.assignment,
                                           ds.labels ? &*ds.labels : nullptr);
    std::ofstream mf(fs::path(cluster_out) / "metrics.json");
    mf << agc::metrics_to_json(rep);
    std::cout << agc::metrics_to_json(rep);
  } else if (*train_cmd || *bench) {
    const std::string& path = *train_cmd ? train_config : bench_config;
    agc::PipelineConfig cfg = agc::load_config(path);
    if (*train_cmd && cfg.method == agc::Method::kmeans) {
      throw agc::InvalidConfig("train: method must be dmon, mincut, or dec");
    }
    agc::PipelineResult res = agc::run_pipeline(cfg);
    std::cout << agc::aggregate_to_json(res.aggregate);
  } else if (*eval_cmd) {
    agc::Dataset ds = agc::load_dataset(eval_in);
    agc::HardAssignment pred = agc::read_assignments(eval_assignments);
    if (pred.labels.size() != ds.graph.num_nodes) {
      throw agc::ShapeMismatch("assignments length != num_nodes");
    }
    agc::MetricsReport rep =
        agc::evaluate(ds.graph, pred, ds.labels ? &*ds.labels : nullptr);
    std::cout << agc::metrics_to_json(rep);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const agc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const agc::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const agc::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
