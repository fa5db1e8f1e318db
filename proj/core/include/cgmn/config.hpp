#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cgmn/augment.hpp"
#include "cgmn/encoder.hpp"
#include "cgmn/ged.hpp"
#include "cgmn/interaction.hpp"
#include "cgmn/optimizer.hpp"

namespace cgmn {

enum class Task { ged, bsd };

// Score handed to the calibration MLP in the GED task.
enum class GedScore {
  cosine,  // cos of the pooled pair embeddings
  mlp,     // sigmoid MLP over the concatenated pooled embeddings, fitted on the labeled subset
};

std::string to_string(Task t);
Task parse_task(const std::string& s);
std::string to_string(GedScore s);
GedScore parse_ged_score(const std::string& s);

using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<std::int64_t>>;

// Every tunable of the pipeline, addressed by dotted keys ("train.lr",
// "augment.p_mask", ...).
struct Config {
  // train.*
  double lr = 1e-4;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
  Task task = Task::ged;
  OptimizerKind optimizer = OptimizerKind::adam;
  unsigned threads = 1;

  // model.*
  int layers = 3;
  int hidden = 100;
  Activation activation = Activation::relu;

  // model.cross_view, model.cross_graph, model.cross_graph_mode, loss.*
  InteractionConfig interaction;

  // augment.*
  AugmentConfig augment;

  // head.*
  std::vector<std::int64_t> ged_mlp{64, 16};
  bool symmetrize = false;
  double bsd_threshold = 0.0;
  GedScore ged_score = GedScore::cosine;

  // calibrate.*
  double label_fraction = 0.01;
  int calibrate_hidden = 16;
  int calibrate_iterations = 3000;
  double calibrate_lr = 1e-2;

  // data.*, output.*, ged.*
  std::string graphs;
  std::string train_pairs;
  std::string valid_pairs;
  std::string test_pairs;
  std::string output_dir = "out";
  int node_limit = kDefaultGedNodeLimit;

  // Throws ConfigError on an unknown key or a value of the wrong type.
  void set(std::string_view key, const ConfigValue& value);
  // Parses `text` according to the key's type (for --set key=value).
  void set_from_string(std::string_view key, std::string_view text);
  ConfigValue get(std::string_view key) const;

  // All keys with their current values, in a fixed order.
  std::vector<std::pair<std::string, ConfigValue>> entries() const;
  static const std::vector<std::string>& keys();

  // Range checks on every field.
  void validate() const;

  // Merges a TOML file; tables map onto the first key component.
  void merge_toml_file(const std::filesystem::path& path);
  void merge_toml_string(std::string_view text, const std::string& source = "<string>");

  // CGMN_SEED, when set, overrides train.seed.
  void apply_environment();
};

std::string to_string(const ConfigValue& v);

}  // namespace cgmn
