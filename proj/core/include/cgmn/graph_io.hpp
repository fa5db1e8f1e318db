#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cgmn/graph.hpp"

namespace cgmn {

inline constexpr int kGraphFormatVersion = 1;
inline constexpr const char* kGraphFormat = "cgmn-graphs";
inline constexpr const char* kPairFormat = "cgmn-pairs";

// JSON-lines graph file: a header object {"format":"cgmn-graphs","version":1}
// followed by one {"id","n","edges","features","labels"?} object per line.
// Records without "features" are one-hot encoded from "labels" (width = max
// label + 1 over the file) or, when unlabeled, get constant-1 features of
// width 1.
std::vector<Graph> read_graphs(std::istream& in, const std::string& source = "<stream>");
std::vector<Graph> load_graphs(const std::filesystem::path& path);

void write_graphs(std::ostream& out, std::span<const Graph> graphs);
void write_graphs(const std::filesystem::path& path, std::span<const Graph> graphs);

// JSON-lines pair file referencing graphs by id:
// {"g1": id, "g2": id, "ged": int?, "label": 1|-1?}.
std::vector<GraphPair> read_pairs(std::istream& in, const std::vector<Graph>& graphs,
                                  const std::string& source = "<stream>");
std::vector<GraphPair> load_pairs(const std::filesystem::path& path,
                                  const std::vector<Graph>& graphs);

void write_pairs(std::ostream& out, std::span<const GraphPair> pairs,
                 const std::vector<Graph>& graphs);
void write_pairs(const std::filesystem::path& path, std::span<const GraphPair> pairs,
                 const std::vector<Graph>& graphs);

Dataset load_dataset(const std::filesystem::path& graphs_path,
                     const std::filesystem::path& pairs_path);

}  // namespace cgmn
