#include "cgmn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cgmn/error.hpp"

namespace cgmn {

using nlohmann::ordered_json;

namespace {

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from(const ordered_json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (data.size() != rows) throw DataError("matrix: row count mismatch");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (data[r].size() != cols) throw DataError("matrix: column count mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r][c].get<double>();
  }
  return m;
}

ordered_json mlp_json(const MlpParams& p) {
  ordered_json w = ordered_json::array(), b = ordered_json::array();
  for (const auto& m : p.weights) w.push_back(matrix_json(m));
  for (const auto& m : p.biases) b.push_back(matrix_json(m));
  return {{"activation", to_string(p.activation)}, {"weights", w}, {"biases", b}};
}

MlpParams mlp_from(const ordered_json& j) {
  MlpParams p;
  p.activation = parse_activation(j.at("activation").get<std::string>());
  for (const auto& m : j.at("weights")) p.weights.push_back(matrix_from(m));
  for (const auto& m : j.at("biases")) p.biases.push_back(matrix_from(m));
  p.validate();
  return p;
}

ordered_json value_json(const ConfigValue& v) {
  return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

ConfigValue value_from(const ordered_json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) return j.get<std::vector<std::int64_t>>();
  throw DataError("unsupported config value " + j.dump());
}

}  // namespace

std::string checkpoint_to_string(const Checkpoint& ckpt) {
  ordered_json j;
  j["format"] = "cgmn-checkpoint";
  j["version"] = ckpt.version;
  ordered_json cfg = ordered_json::object();
  for (const auto& [key, value] : ckpt.config.entries()) cfg[key] = value_json(value);
  j["config"] = cfg;
  j["epoch"] = ckpt.epoch;
  j["loss_history"] = ckpt.loss_history;

  ordered_json gcn = ordered_json::array();
  for (const auto& w : ckpt.params.gcn.weights) gcn.push_back(matrix_json(w));
  j["encoder"] = {{"activation", to_string(ckpt.params.gcn.activation)}, {"weights", gcn}};
  j["ged_head"] = mlp_json(ckpt.params.ged_head);
  if (const auto& cal = ckpt.params.calibration) {
    j["calibration"] = {{"input_mean", cal->input_mean},
                        {"input_scale", cal->input_scale},
                        {"mlp", mlp_json(cal->mlp)}};
  } else {
    j["calibration"] = nullptr;
  }
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text, const std::string& source) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(source + ": not valid JSON: " + e.what());
  }
  try {
    if (j.value("format", "") != "cgmn-checkpoint") throw DataError("not a cgmn checkpoint");
    Checkpoint ck;
    ck.version = j.at("version").get<int>();
    if (ck.version != kCheckpointVersion) {
      throw DataError("unsupported checkpoint version " + std::to_string(ck.version));
    }
    for (const auto& [key, value] : j.at("config").items()) ck.config.set(key, value_from(value));
    ck.epoch = j.at("epoch").get<int>();
    ck.loss_history = j.at("loss_history").get<std::vector<double>>();
    const auto& enc = j.at("encoder");
    ck.params.gcn.activation = parse_activation(enc.at("activation").get<std::string>());
    for (const auto& m : enc.at("weights")) ck.params.gcn.weights.push_back(matrix_from(m));
    ck.params.gcn.validate();
    ck.params.ged_head = mlp_from(j.at("ged_head"));
    const auto& cal = j.at("calibration");
    if (!cal.is_null()) {
      Calibration c;
      c.input_mean = cal.at("input_mean").get<double>();
      c.input_scale = cal.at("input_scale").get<double>();
      c.mlp = mlp_from(cal.at("mlp"));
      ck.params.calibration = std::move(c);
    }
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": malformed checkpoint: " + e.what());
  } catch (const Error& e) {
    throw DataError(source + ": " + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << checkpoint_to_string(ckpt);
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_string(ss.str(), path.string());
}

}  // namespace cgmn
