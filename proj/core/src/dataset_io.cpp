#include "agc/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "agc/errors.hpp"

namespace fs = std::filesystem;

namespace agc {

namespace {

[[noreturn]] void parse_fail(const fs::path& file, std::size_t line, const std::string& what) {
  throw ParseError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t parse_u64(std::string_view sv, const fs::path& file, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc{} || p != sv.data() + sv.size()) {
    parse_fail(file, line, "expected integer, got '" + std::string(sv) + "'");
  }
  return v;
}

std::string_view trim(std::string_view sv) {
  while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
  while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
  return sv;
}

}  // namespace

void write_matrix(const fs::path& path, const FeatureMatrix& m, const char* magic) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(magic, 4);
  std::uint64_t n = m.rows, d = m.cols;
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&d), 8);
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  if (!out) throw DataError("short write: " + path.string());
}

FeatureMatrix read_matrix(const fs::path& path, const char* magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingComponent("missing file: " + path.string());
  char got[4];
  in.read(got, 4);
  if (!in || std::memcmp(got, magic, 4) != 0) {
    throw ParseError(path.string() + ": bad magic (expected " + std::string(magic, 4) + ")");
  }
  std::uint64_t n = 0, d = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&d), 8);
  if (!in) throw ParseError(path.string() + ": truncated header");
  FeatureMatrix m(n, d);
  in.read(reinterpret_cast<char*>(m.data.data()),
          static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  if (!in) throw ParseError(path.string() + ": truncated payload");
  return m;
}

namespace {

FeatureMatrix read_features_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingComponent("missing file: " + path.string());
  std::vector<float> data;
  std::size_t cols = 0, rows = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    std::size_t c = 0;
    std::size_t pos = 0;
    while (pos <= sv.size()) {
      std::size_t comma = sv.find(',', pos);
      std::string_view tok = trim(sv.substr(pos, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - pos));
      float v = 0.0f;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size()) {
        parse_fail(path, lineno, "expected decimal, got '" + std::string(tok) + "'");
      }
      data.push_back(v);
      ++c;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cols == 0) cols = c;
    if (c != cols) parse_fail(path, lineno, "inconsistent column count");
    ++rows;
  }
  FeatureMatrix m(rows, cols);
  m.data = std::move(data);
  return m;
}

}  // namespace

Dataset load_dataset(const fs::path& dir) {
  const fs::path meta_path = dir / "graph.meta";
  std::ifstream meta(meta_path);
  if (!meta) throw MissingComponent("missing file: " + meta_path.string());
  std::uint64_t num_nodes = 0, num_edges = 0;
  bool have_nodes = false, have_edges = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(meta, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos) parse_fail(meta_path, lineno, "expected key=value");
    std::string_view key = trim(sv.substr(0, eq));
    std::string_view val = trim(sv.substr(eq + 1));
    if (key == "num_nodes") {
      num_nodes = parse_u64(val, meta_path, lineno);
      have_nodes = true;
    } else if (key == "num_edges") {
      num_edges = parse_u64(val, meta_path, lineno);
      have_edges = true;
    } else if (key == "directed") {
      if (val != "false" && val != "true") parse_fail(meta_path, lineno, "directed must be true/false");
    } else {
      parse_fail(meta_path, lineno, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_nodes || !have_edges) {
    throw ParseError(meta_path.string() + ": num_nodes and num_edges are required");
  }

  const fs::path edges_path = dir / "edges.tsv";
  std::ifstream ein(edges_path);
  if (!ein) throw MissingComponent("missing file: " + edges_path.string());
  EdgeList edges;
  edges.reserve(num_edges);
  lineno = 0;
  while (std::getline(ein, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    std::size_t tab = sv.find('\t');
    if (tab == std::string_view::npos) parse_fail(edges_path, lineno, "expected u<TAB>v");
    std::uint64_t u = parse_u64(trim(sv.substr(0, tab)), edges_path, lineno);
    std::uint64_t v = parse_u64(trim(sv.substr(tab + 1)), edges_path, lineno);
    edges.emplace_back(u, v);
  }
  CsrGraph graph = build_graph(edges, num_nodes);
  if (graph.num_edges() != num_edges) {
    throw ShapeMismatch(meta_path.string() + ": num_edges=" + std::to_string(num_edges) +
                        " but edges.tsv yields " + std::to_string(graph.num_edges()));
  }

  FeatureMatrix feats;
  if (fs::exists(dir / "features.bin")) {
    feats = read_matrix(dir / "features.bin", "AGCF");
  } else if (fs::exists(dir / "features.csv")) {
    feats = read_features_csv(dir / "features.csv");
  } else {
    throw MissingComponent("missing file: " + (dir / "features.bin").string());
  }
  if (feats.rows != num_nodes) {
    throw ShapeMismatch("features have " + std::to_string(feats.rows) +
                        " rows for a " + std::to_string(num_nodes) + "-node graph");
  }

  Dataset ds{std::move(graph), std::move(feats), std::nullopt};
  const fs::path labels_path = dir / "labels.tsv";
  if (fs::exists(labels_path)) {
    std::ifstream lin(labels_path);
    LabelVector lv;
    lineno = 0;
    while (std::getline(lin, line)) {
      ++lineno;
      std::string_view sv = trim(line);
      if (sv.empty()) continue;
      std::uint64_t v = parse_u64(sv, labels_path, lineno);
      lv.labels.push_back(static_cast<std::uint32_t>(v));
      lv.k_true = std::max(lv.k_true, static_cast<std::uint32_t>(v + 1));
    }
    if (lv.labels.size() != num_nodes) {
      throw ShapeMismatch("labels.tsv has " + std::to_string(lv.labels.size()) +
                          " rows for a " + std::to_string(num_nodes) + "-node graph");
    }
    ds.labels = std::move(lv);
  }
  return ds;
}

void save_dataset(const fs::path& dir, const Dataset& ds) {
  fs::create_directories(dir);
  {
    std::ofstream meta(dir / "graph.meta");
    meta << "num_nodes=" << ds.graph.num_nodes << "\n"
         << "num_edges=" << ds.graph.num_edges() << "\n"
         << "directed=false\n";
  }
  {
    std::ofstream out(dir / "edges.tsv");
    for (std::uint64_t u = 0; u < ds.graph.num_nodes; ++u) {
      for (std::uint64_t v : ds.graph.neighbors(u)) {
        if (u < v) out << u << '\t' << v << '\n';
      }
    }
  }
  write_matrix(dir / "features.bin", ds.features, "AGCF");
  if (ds.labels) {
    std::ofstream out(dir / "labels.tsv");
    for (auto l : ds.labels->labels) out << l << '\n';
  }
}

void write_assignments(const fs::path& path, const HardAssignment& a) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  for (auto l : a.labels) out << l << '\n';
}

HardAssignment read_assignments(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingComponent("missing file: " + path.string());
  HardAssignment a;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    std::uint64_t v = parse_u64(sv, path, lineno);
    a.labels.push_back(static_cast<std::uint32_t>(v));
    a.k = std::max(a.k, static_cast<std::uint32_t>(v + 1));
  }
  return a;
}

}  // namespace agc
