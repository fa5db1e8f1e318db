#include "cgmn/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "cgmn/error.hpp"

namespace cgmn {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw DataError(source + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

// Reads non-blank lines, checks the header, and hands (line number, object)
// to `record`.
template <typename F>
void for_each_record(std::istream& in, const std::string& source, const char* format, F&& record) {
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(source, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) parse_fail(source, lineno, "expected a JSON object");
    if (!header_seen) {
      if (!obj.contains("format") || obj["format"] != format) {
        parse_fail(source, lineno, std::string("missing header {\"format\": \"") + format + "\"}");
      }
      if (!obj.contains("version") || obj["version"] != kGraphFormatVersion) {
        parse_fail(source, lineno, "unsupported format version");
      }
      header_seen = true;
      continue;
    }
    try {
      record(lineno, obj);
    } catch (const json::exception& e) {
      parse_fail(source, lineno, std::string("schema violation: ") + e.what());
    }
  }
  if (!header_seen) parse_fail(source, lineno, "empty file (no header)");
}

struct RawGraph {
  Graph graph;
  bool has_features = false;
  std::size_t line = 0;
};

}  // namespace

std::vector<Graph> read_graphs(std::istream& in, const std::string& source) {
  std::vector<RawGraph> raw;
  for_each_record(in, source, kGraphFormat, [&](std::size_t lineno, const json& obj) {
    RawGraph r;
    r.line = lineno;
    Graph& g = r.graph;
    g.id = obj.at("id").get<std::string>();
    g.n = obj.at("n").get<int>();
    if (g.n < 1) parse_fail(source, lineno, "graph '" + g.id + "': node count must be >= 1");
    for (const auto& e : obj.at("edges")) {
      if (!e.is_array() || e.size() != 2) parse_fail(source, lineno, "edge must be [i, j]");
      const int a = e[0].get<int>();
      const int b = e[1].get<int>();
      if (a == b) parse_fail(source, lineno, "graph '" + g.id + "': self-loop on node " + std::to_string(a));
      g.edges.emplace_back(a, b);
    }
    g.canonicalize();
    if (obj.contains("labels")) g.labels = obj["labels"].get<std::vector<int>>();
    if (obj.contains("features")) {
      const auto& rows = obj["features"];
      if (!rows.is_array()) parse_fail(source, lineno, "features must be an array of rows");
      const std::size_t d = rows.empty() ? 0 : rows[0].size();
      std::vector<double> flat;
      flat.reserve(rows.size() * d);
      for (const auto& row : rows) {
        if (row.size() != d) parse_fail(source, lineno, "graph '" + g.id + "': ragged feature rows");
        for (const auto& v : row) flat.push_back(v.get<double>());
      }
      g.features = Matrix(rows.size(), d, std::move(flat));
      r.has_features = true;
    }
    raw.push_back(std::move(r));
  });

  int max_label = -1;
  for (const auto& r : raw)
    for (int l : r.graph.labels) max_label = std::max(max_label, l);

  std::vector<Graph> graphs;
  graphs.reserve(raw.size());
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& r : raw) {
    Graph& g = r.graph;
    if (!r.has_features) {
      if (g.labeled()) {
        if (g.labels.size() != static_cast<std::size_t>(g.n))
          parse_fail(source, r.line, "graph '" + g.id + "': label count != n");
        g.features = one_hot(g.labels, static_cast<std::size_t>(max_label + 1));
      } else {
        g.features = Matrix(static_cast<std::size_t>(g.n), 1, 1.0);
      }
    }
    try {
      g.validate();
    } catch (const DataError& e) {
      parse_fail(source, r.line, e.what());
    }
    if (!seen.emplace(g.id, graphs.size()).second) {
      parse_fail(source, r.line, "duplicate graph id '" + g.id + "'");
    }
    graphs.push_back(std::move(g));
  }
  if (!graphs.empty()) {
    const auto d = graphs.front().feature_dim();
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      if (graphs[i].feature_dim() != d) {
        parse_fail(source, raw[i].line, "graph '" + graphs[i].id +
                                            "': feature dimension differs from first graph");
      }
    }
  }
  return graphs;
}

std::vector<Graph> load_graphs(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graphs(in, path.string());
}

void write_graphs(std::ostream& out, std::span<const Graph> graphs) {
  out << json{{"format", kGraphFormat}, {"version", kGraphFormatVersion}}.dump() << '\n';
  for (const auto& g : graphs) {
    json obj;
    obj["id"] = g.id;
    obj["n"] = g.n;
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({e.u, e.v});
    obj["edges"] = std::move(edges);
    json feats = json::array();
    for (std::size_t r = 0; r < g.features.rows(); ++r) {
      auto row = g.features.row(r);
      feats.push_back(std::vector<double>(row.begin(), row.end()));
    }
    obj["features"] = std::move(feats);
    if (g.labeled()) obj["labels"] = g.labels;
    out << obj.dump() << '\n';
  }
}

void write_graphs(const std::filesystem::path& path, std::span<const Graph> graphs) {
  auto out = open_out(path);
  write_graphs(out, graphs);
}

std::vector<GraphPair> read_pairs(std::istream& in, const std::vector<Graph>& graphs,
                                  const std::string& source) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < graphs.size(); ++i) index.emplace(graphs[i].id, i);

  std::vector<GraphPair> pairs;
  for_each_record(in, source, kPairFormat, [&](std::size_t lineno, const json& obj) {
    GraphPair p;
    const auto resolve = [&](const char* key) {
      const auto id = obj.at(key).get<std::string>();
      auto it = index.find(id);
      if (it == index.end()) parse_fail(source, lineno, "unknown graph id '" + id + "'");
      return it->second;
    };
    p.g1 = resolve("g1");
    p.g2 = resolve("g2");
    if (obj.contains("ged") && !obj["ged"].is_null()) {
      const int ged = obj["ged"].get<int>();
      if (ged < 0) parse_fail(source, lineno, "ged must be nonnegative");
      p.ged = ged;
    }
    if (obj.contains("label") && !obj["label"].is_null()) {
      const int label = obj["label"].get<int>();
      if (label != 1 && label != -1) parse_fail(source, lineno, "label must be 1 or -1");
      p.label = label;
    }
    pairs.push_back(p);
  });
  return pairs;
}

std::vector<GraphPair> load_pairs(const std::filesystem::path& path,
                                  const std::vector<Graph>& graphs) {
  auto in = open_in(path);
  return read_pairs(in, graphs, path.string());
}

void write_pairs(std::ostream& out, std::span<const GraphPair> pairs,
                 const std::vector<Graph>& graphs) {
  out << json{{"format", kPairFormat}, {"version", kGraphFormatVersion}}.dump() << '\n';
  for (const auto& p : pairs) {
    json obj;
    obj["g1"] = graphs.at(p.g1).id;
    obj["g2"] = graphs.at(p.g2).id;
    if (p.ged) obj["ged"] = *p.ged;
    if (p.label) obj["label"] = *p.label;
    out << obj.dump() << '\n';
  }
}

void write_pairs(const std::filesystem::path& path, std::span<const GraphPair> pairs,
                 const std::vector<Graph>& graphs) {
  auto out = open_out(path);
  write_pairs(out, pairs, graphs);
}

Dataset load_dataset(const std::filesystem::path& graphs_path,
                     const std::filesystem::path& pairs_path) {
  Dataset ds;
  ds.graphs = load_graphs(graphs_path);
  ds.pairs = load_pairs(pairs_path, ds.graphs);
  return ds;
}

}  // namespace cgmn
