#include "agc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "agc/errors.hpp"

namespace agc {

Method method_from_name(const std::string& name) {
  if (name == "kmeans") return Method::kmeans;
  if (name == "dmon") return Method::dmon;
  if (name == "mincut") return Method::mincut;
  if (name == "dec") return Method::dec;
  throw InvalidConfig("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kmeans: return "kmeans";
    case Method::dmon: return "dmon";
    case Method::mincut: return "mincut";
    case Method::dec: return "dec";
  }
  return "?";
}

void PipelineConfig::validate() const {
  if (seeds.empty()) throw InvalidConfig("config: at least one seed is required");
  if (k < 1) throw InvalidConfig("config: k must be >= 1");
  if (output_dir.empty()) throw InvalidConfig("config: output_dir is required");
}

namespace {

void require_keys(const YAML::Node& map, const std::string& scope,
                  const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigTypeError(scope + " must be a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw UnknownKey(scope.empty() ? key : scope + "." + key);
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) throw ConfigTypeError(name + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigTypeError(name + " has the wrong type: '" + node.as<std::string>() + "'");
  }
}

template <typename T>
std::vector<T> sequence(const YAML::Node& node, const std::string& name) {
  if (!node.IsSequence()) throw ConfigTypeError(name + " must be a sequence");
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, name + "[]"));
  return out;
}

SmoothingConfig parse_smoothing(const YAML::Node& node) {
  require_keys(node, "smoothing", {"hops", "alpha", "self_loops", "variant"});
  SmoothingConfig cfg;
  if (node["hops"]) cfg.num_hops = scalar<std::uint32_t>(node["hops"], "smoothing.hops");
  if (node["alpha"]) cfg.alpha = scalar<double>(node["alpha"], "smoothing.alpha");
  if (node["self_loops"]) {
    cfg.add_self_loops = scalar<bool>(node["self_loops"], "smoothing.self_loops");
  }
  if (node["variant"]) {
    const std::string v = scalar<std::string>(node["variant"], "smoothing.variant");
    if (v == "sgc_power") {
      cfg.variant = SmoothingVariant::sgc_power;
    } else if (v == "ssgc_average") {
      cfg.variant = SmoothingVariant::ssgc_average;
    } else {
      throw InvalidConfig("smoothing.variant must be sgc_power or ssgc_average");
    }
  }
  if (cfg.variant == SmoothingVariant::ssgc_average) cfg.validate();
  return cfg;
}

void parse_method_params(const YAML::Node& node, PipelineConfig& cfg) {
  require_keys(node, "method_params",
               {"epochs", "lr", "hidden_dim", "lambda", "batch_nodes", "target_refresh",
                "embed_dim", "nu", "max_iters", "tol", "init", "n_init", "batch_size"});
  auto& t = cfg.train;
  if (node["epochs"]) t.epochs = scalar<std::uint32_t>(node["epochs"], "method_params.epochs");
  if (node["lr"]) t.lr = scalar<double>(node["lr"], "method_params.lr");
  if (node["hidden_dim"]) {
    t.hidden_dim = scalar<std::uint32_t>(node["hidden_dim"], "method_params.hidden_dim");
  }
  if (node["lambda"]) t.lambda_clust = scalar<double>(node["lambda"], "method_params.lambda");
  if (node["batch_nodes"]) {
    t.batch_nodes = scalar<std::uint64_t>(node["batch_nodes"], "method_params.batch_nodes");
  }
  if (node["target_refresh"]) {
    t.target_refresh =
        scalar<std::uint32_t>(node["target_refresh"], "method_params.target_refresh");
  }
  if (node["embed_dim"]) {
    t.embed_dim = scalar<std::uint32_t>(node["embed_dim"], "method_params.embed_dim");
  }
  if (node["nu"]) t.nu = scalar<double>(node["nu"], "method_params.nu");

  auto& km = cfg.kmeans;
  if (node["max_iters"]) {
    km.max_iters = scalar<std::uint32_t>(node["max_iters"], "method_params.max_iters");
  }
  if (node["tol"]) km.tol = scalar<double>(node["tol"], "method_params.tol");
  if (node["n_init"]) {
    km.n_init = scalar<std::uint32_t>(node["n_init"], "method_params.n_init");
  }
  if (node["init"]) {
    const std::string v = scalar<std::string>(node["init"], "method_params.init");
    if (v == "kmeanspp") {
      km.init = KMeansInit::kmeanspp;
    } else if (v == "random") {
      km.init = KMeansInit::random;
    } else {
      throw InvalidConfig("method_params.init must be kmeanspp or random");
    }
  }
  if (node["batch_size"]) {
    km.batch_size = scalar<std::uint64_t>(node["batch_size"], "method_params.batch_size");
  }
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  require_keys(root, "",
               {"dataset", "smoothing", "standardize", "method", "method_params", "k",
                "seeds", "output_dir"});

  PipelineConfig cfg;
  if (!root["dataset"]) throw InvalidConfig("config: dataset is required");
  {
    const YAML::Node ds = root["dataset"];
    if (ds.IsScalar()) {
      cfg.dataset = std::filesystem::path(ds.as<std::string>());
    } else {
      require_keys(ds, "dataset", {"path", "sbm"});
      if (ds["path"] && ds["sbm"]) {
        throw InvalidConfig("dataset: path and sbm are mutually exclusive");
      }
      if (ds["path"]) {
        cfg.dataset = std::filesystem::path(scalar<std::string>(ds["path"], "dataset.path"));
      } else if (ds["sbm"]) {
        const YAML::Node s = ds["sbm"];
        require_keys(s, "dataset.sbm",
                     {"blocks", "p_in", "p_out", "seed", "feature_dim", "feature_sep"});
        SbmDatasetConfig sd;
        if (!s["blocks"]) throw InvalidConfig("dataset.sbm.blocks is required");
        sd.spec.block_sizes = sequence<std::uint64_t>(s["blocks"], "dataset.sbm.blocks");
        if (s["p_in"]) sd.spec.p_in = scalar<double>(s["p_in"], "dataset.sbm.p_in");
        if (s["p_out"]) sd.spec.p_out = scalar<double>(s["p_out"], "dataset.sbm.p_out");
        if (s["seed"]) sd.spec.seed = scalar<std::uint64_t>(s["seed"], "dataset.sbm.seed");
        if (s["feature_dim"]) {
          sd.feature_dim = scalar<std::uint64_t>(s["feature_dim"], "dataset.sbm.feature_dim");
        }
        if (s["feature_sep"]) {
          sd.feature_sep = scalar<double>(s["feature_sep"], "dataset.sbm.feature_sep");
        }
        sd.spec.validate();
        cfg.dataset = sd;
      } else {
        throw InvalidConfig("dataset: either path or sbm is required");
      }
    }
  }
  if (root["smoothing"]) cfg.smoothing = parse_smoothing(root["smoothing"]);
  if (root["standardize"]) {
    cfg.standardize = scalar<bool>(root["standardize"], "standardize");
  }
  if (!root["method"]) throw InvalidConfig("config: method is required");
  cfg.method = method_from_name(scalar<std::string>(root["method"], "method"));
  if (root["k"]) cfg.k = scalar<std::uint32_t>(root["k"], "k");
  if (!root["seeds"]) throw InvalidConfig("config: seeds is required");
  cfg.seeds = sequence<std::uint64_t>(root["seeds"], "seeds");
  if (!root["output_dir"]) throw InvalidConfig("config: output_dir is required");
  cfg.output_dir = scalar<std::string>(root["output_dir"], "output_dir");

  cfg.kmeans.k = cfg.k;
  cfg.train.k = cfg.k;
  switch (cfg.method) {
    case Method::dmon: cfg.train.objective = Objective::dmon; break;
    case Method::mincut: cfg.train.objective = Objective::mincut; break;
    case Method::dec: cfg.train.objective = Objective::dec; break;
    case Method::kmeans: break;
  }
  if (root["method_params"]) parse_method_params(root["method_params"], cfg);
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingComponent("missing config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace agc
