#include "cgmn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "cgmn/error.hpp"

namespace cgmn {

std::string to_string(Task t) { return t == Task::ged ? "ged" : "bsd"; }

Task parse_task(const std::string& s) {
  if (s == "ged") return Task::ged;
  if (s == "bsd") return Task::bsd;
  throw ConfigError("train.task must be 'ged' or 'bsd', got '" + s + "'");
}

std::string to_string(GedScore s) { return s == GedScore::cosine ? "cosine" : "mlp"; }

GedScore parse_ged_score(const std::string& s) {
  if (s == "cosine") return GedScore::cosine;
  if (s == "mlp") return GedScore::mlp;
  throw ConfigError("head.ged_score must be 'cosine' or 'mlp', got '" + s + "'");
}

namespace {

enum class Kind { boolean, integer, real, text, int_list };

struct Field {
  const char* key;
  Kind kind;
  std::function<ConfigValue(const Config&)> get;
  std::function<void(Config&, const ConfigValue&)> set;
};

[[noreturn]] void type_error(std::string_view key, const char* expected) {
  throw ConfigError("config key '" + std::string(key) + "' expects " + expected);
}

bool as_bool(std::string_view key, const ConfigValue& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  type_error(key, "a boolean");
}

std::int64_t as_int(std::string_view key, const ConfigValue& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* d = std::get_if<double>(&v); d && std::floor(*d) == *d) return static_cast<std::int64_t>(*d);
  type_error(key, "an integer");
}

double as_real(std::string_view key, const ConfigValue& v) {
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  type_error(key, "a number");
}

std::string as_text(std::string_view key, const ConfigValue& v) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  type_error(key, "a string");
}

std::vector<std::int64_t> as_list(std::string_view key, const ConfigValue& v) {
  if (auto* l = std::get_if<std::vector<std::int64_t>>(&v)) return *l;
  type_error(key, "a list of integers");
}

int as_small_int(std::string_view key, const ConfigValue& v) {
  const auto i = as_int(key, v);
  if (i < -(1LL << 30) || i > (1LL << 30)) type_error(key, "an integer of moderate size");
  return static_cast<int>(i);
}

#define CGMN_BOOL(k, member)                                                              \
  Field{k, Kind::boolean, [](const Config& c) { return ConfigValue(c.member); },          \
        [](Config& c, const ConfigValue& v) { c.member = as_bool(k, v); }}
#define CGMN_INT(k, member)                                                               \
  Field{k, Kind::integer,                                                                 \
        [](const Config& c) { return ConfigValue(static_cast<std::int64_t>(c.member)); }, \
        [](Config& c, const ConfigValue& v) { c.member = as_small_int(k, v); }}
#define CGMN_REAL(k, member)                                                              \
  Field{k, Kind::real, [](const Config& c) { return ConfigValue(c.member); },             \
        [](Config& c, const ConfigValue& v) { c.member = as_real(k, v); }}
#define CGMN_TEXT(k, member)                                                              \
  Field{k, Kind::text, [](const Config& c) { return ConfigValue(c.member); },             \
        [](Config& c, const ConfigValue& v) { c.member = as_text(k, v); }}
#define CGMN_ENUM(k, member, parse)                                                       \
  Field{k, Kind::text, [](const Config& c) { return ConfigValue(to_string(c.member)); },  \
        [](Config& c, const ConfigValue& v) { c.member = parse(as_text(k, v)); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      CGMN_REAL("train.lr", lr),
      CGMN_INT("train.epochs", epochs),
      CGMN_INT("train.batch_size", batch_size),
      Field{"train.seed", Kind::integer,
            [](const Config& c) { return ConfigValue(static_cast<std::int64_t>(c.seed)); },
            [](Config& c, const ConfigValue& v) {
              c.seed = static_cast<std::uint64_t>(as_int("train.seed", v));
            }},
      CGMN_ENUM("train.task", task, parse_task),
      CGMN_ENUM("train.optimizer", optimizer, parse_optimizer),
      Field{"train.threads", Kind::integer,
            [](const Config& c) { return ConfigValue(static_cast<std::int64_t>(c.threads)); },
            [](Config& c, const ConfigValue& v) {
              const auto t = as_int("train.threads", v);
              if (t < 1 || t > 256) throw ConfigError("train.threads must be in [1, 256]");
              c.threads = static_cast<unsigned>(t);
            }},
      CGMN_INT("model.layers", layers),
      CGMN_INT("model.hidden", hidden),
      CGMN_ENUM("model.activation", activation, parse_activation),
      CGMN_BOOL("model.cross_view", interaction.cross_view),
      CGMN_BOOL("model.cross_graph", interaction.cross_graph),
      CGMN_ENUM("model.cross_graph_mode", interaction.cross_graph_mode, parse_cross_graph_mode),
      CGMN_REAL("loss.tau", interaction.tau),
      CGMN_ENUM("loss.negatives", interaction.negatives, parse_negative_set),
      CGMN_REAL("augment.p_mask", augment.p_mask),
      CGMN_REAL("augment.p_drop", augment.p_drop),
      Field{"augment.seed", Kind::integer,
            [](const Config& c) { return ConfigValue(static_cast<std::int64_t>(c.augment.seed)); },
            [](Config& c, const ConfigValue& v) {
              c.augment.seed = static_cast<std::uint64_t>(as_int("augment.seed", v));
            }},
      Field{"augment.granularity", Kind::text,
            [](const Config& c) {
              return ConfigValue(std::string(
                  c.augment.granularity == MaskGranularity::column ? "column" : "entry"));
            },
            [](Config& c, const ConfigValue& v) {
              const auto s = as_text("augment.granularity", v);
              if (s == "column") c.augment.granularity = MaskGranularity::column;
              else if (s == "entry") c.augment.granularity = MaskGranularity::entry;
              else throw ConfigError("augment.granularity must be 'column' or 'entry'");
            }},
      Field{"head.ged_mlp", Kind::int_list, [](const Config& c) { return ConfigValue(c.ged_mlp); },
            [](Config& c, const ConfigValue& v) { c.ged_mlp = as_list("head.ged_mlp", v); }},
      CGMN_BOOL("head.symmetrize", symmetrize),
      CGMN_REAL("head.bsd_threshold", bsd_threshold),
      CGMN_ENUM("head.ged_score", ged_score, parse_ged_score),
      CGMN_REAL("calibrate.label_fraction", label_fraction),
      CGMN_INT("calibrate.hidden", calibrate_hidden),
      CGMN_INT("calibrate.iterations", calibrate_iterations),
      CGMN_REAL("calibrate.lr", calibrate_lr),
      CGMN_TEXT("data.graphs", graphs),
      CGMN_TEXT("data.train", train_pairs),
      CGMN_TEXT("data.valid", valid_pairs),
      CGMN_TEXT("data.test", test_pairs),
      CGMN_TEXT("output.dir", output_dir),
      CGMN_INT("ged.node_limit", node_limit),
  };
  return table;
}

#undef CGMN_BOOL
#undef CGMN_INT
#undef CGMN_REAL
#undef CGMN_TEXT
#undef CGMN_ENUM

const Field& find_field(std::string_view key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

void merge_table(Config& cfg, const toml::table& table, const std::string& prefix) {
  for (const auto& [k, node] : table) {
    const std::string key = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    if (const auto* sub = node.as_table()) {
      merge_table(cfg, *sub, key);
    } else if (const auto* b = node.as_boolean()) {
      cfg.set(key, b->get());
    } else if (const auto* i = node.as_integer()) {
      cfg.set(key, static_cast<std::int64_t>(i->get()));
    } else if (const auto* d = node.as_floating_point()) {
      cfg.set(key, d->get());
    } else if (const auto* s = node.as_string()) {
      cfg.set(key, s->get());
    } else if (const auto* arr = node.as_array()) {
      std::vector<std::int64_t> list;
      for (const auto& el : *arr) {
        const auto* iv = el.as_integer();
        if (!iv) throw ConfigError("config key '" + key + "': array elements must be integers");
        list.push_back(iv->get());
      }
      cfg.set(key, list);
    } else {
      throw ConfigError("config key '" + key + "': unsupported TOML value type");
    }
  }
}

}  // namespace

void Config::set(std::string_view key, const ConfigValue& value) { find_field(key).set(*this, value); }

void Config::set_from_string(std::string_view key, std::string_view text) {
  const Field& f = find_field(key);
  switch (f.kind) {
    case Kind::boolean:
      if (text == "true" || text == "1") return f.set(*this, true);
      if (text == "false" || text == "0") return f.set(*this, false);
      throw ConfigError("config key '" + std::string(key) + "' expects true or false");
    case Kind::integer:
      return f.set(*this, parse_number<std::int64_t>(key, text));
    case Kind::real:
      return f.set(*this, parse_number<double>(key, text));
    case Kind::text:
      return f.set(*this, std::string(text));
    case Kind::int_list: {
      std::vector<std::int64_t> list;
      std::string_view rest = text;
      if (!rest.empty() && rest.front() == '[') rest.remove_prefix(1);
      if (!rest.empty() && rest.back() == ']') rest.remove_suffix(1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        auto item = rest.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) list.push_back(parse_number<std::int64_t>(key, item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      return f.set(*this, list);
    }
  }
}

ConfigValue Config::get(std::string_view key) const { return find_field(key).get(*this); }

std::vector<std::pair<std::string, ConfigValue>> Config::entries() const {
  std::vector<std::pair<std::string, ConfigValue>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const auto& f : fields()) v.emplace_back(f.key);
    return v;
  }();
  return k;
}

void Config::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("train.lr must be > 0");
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (layers < 1) throw ConfigError("model.layers must be >= 1");
  if (hidden < 1) throw ConfigError("model.hidden must be >= 1");
  interaction.validate();
  augment.validate();
  for (auto w : ged_mlp)
    if (w < 1) throw ConfigError("head.ged_mlp widths must be >= 1");
  if (!(bsd_threshold >= -1.0 && bsd_threshold <= 1.0))
    throw ConfigError("head.bsd_threshold must be in [-1, 1]");
  if (!(label_fraction > 0.0 && label_fraction <= 1.0))
    throw ConfigError("calibrate.label_fraction must be in (0, 1]");
  if (calibrate_hidden < 1) throw ConfigError("calibrate.hidden must be >= 1");
  if (calibrate_iterations < 1) throw ConfigError("calibrate.iterations must be >= 1");
  if (!(calibrate_lr > 0.0)) throw ConfigError("calibrate.lr must be > 0");
  if (node_limit < 1 || node_limit > 24) throw ConfigError("ged.node_limit must be in [1, 24]");
}

void Config::merge_toml_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file '" + path.string() + "' not found");
  try {
    merge_table(*this, toml::parse_file(path.string()), "");
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << path.string() << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }
}

void Config::merge_toml_string(std::string_view text, const std::string& source) {
  try {
    merge_table(*this, toml::parse(text, source), "");
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }
}

void Config::apply_environment() {
  if (const char* env = std::getenv("CGMN_SEED"); env && *env) {
    set_from_string("train.seed", env);
  }
}

std::string to_string(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os.precision(17);
          os << x;
          return os.str();
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
          return s + "]";
        }
      },
      v);
}

}  // namespace cgmn
