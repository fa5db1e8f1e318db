#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgmn/checkpoint.hpp"
#include "cgmn/config.hpp"
#include "cgmn/error.hpp"
#include "cgmn/ged.hpp"
#include "cgmn/graph_io.hpp"
#include "cgmn/split.hpp"
#include "cgmn/synthetic.hpp"
#include "cgmn/train.hpp"
#include "cgmn/version.hpp"

namespace cgmn::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ConfigFlags {
  std::string file;
  std::vector<std::string> sets;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.file, "TOML config file");
  cmd->add_option("--set", flags.sets, "Override a config key (key=value), repeatable");
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

// defaults < config file < CGMN_SEED < --set
void apply_flags(Config& cfg, const ConfigFlags& flags) {
  if (!flags.file.empty()) cfg.merge_toml_file(flags.file);
  cfg.apply_environment();
  for (const auto& s : flags.sets) {
    const auto [key, value] = split_assignment(s);
    cfg.set_from_string(key, value);
  }
  cfg.validate();
}

ordered_json config_json(const Config& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : cfg.entries()) {
    j[key] = std::visit([](const auto& x) { return ordered_json(x); }, value);
  }
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const fs::path& path, const std::string& command, const Config& cfg,
                    const ordered_json& inputs) {
  ordered_json j;
  j["tool"] = "cgmn";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["inputs"] = inputs;
  j["config"] = config_json(cfg);
  write_text(path, j.dump(2) + "\n");
}

fs::path manifest_beside(const fs::path& file) {
  auto p = file;
  p += ".manifest.json";
  return p;
}

void require(const std::string& value, const std::string& what) {
  if (value.empty()) throw ConfigError("missing " + what);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
  ConfigFlags config;
  std::string out;
  std::string task = "ged";
  int count = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int n_min = 5;
  int n_max = 8;
  int labels = 4;
  int edit_budget = 4;
  double edge_prob = 0.2;
  bool no_ged = false;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  Config cfg;
  apply_flags(cfg, a.config);
  if (a.seed_given) cfg.seed = a.seed;
  require(a.out, "--out directory");
  const fs::path dir(a.out);
  fs::create_directories(dir);

  Dataset data;
  const Task task = parse_task(a.task);
  if (task == Task::ged) {
    SyntheticConfig sc;
    sc.count = a.count;
    sc.n_min = a.n_min;
    sc.n_max = a.n_max;
    sc.num_labels = a.labels;
    sc.edit_budget = a.edit_budget;
    sc.extra_edge_prob = a.edge_prob;
    sc.seed = cfg.seed;
    sc.label_ged = !a.no_ged;
    sc.node_limit = cfg.node_limit;
    sc.threads = cfg.threads;
    data = generate_synthetic_pairs(sc).dataset;
  } else {
    BsdConfig bc;
    bc.count = a.count;
    bc.n_min = a.n_min;
    bc.n_max = a.n_max;
    bc.num_labels = a.labels;
    bc.extra_edge_prob = a.edge_prob;
    bc.seed = cfg.seed;
    data = generate_bsd_pairs(bc);
  }

  const auto split = split_dataset(data.pairs.size(), {}, cfg.seed);
  auto subset = [&](const std::vector<std::size_t>& idx) {
    std::vector<GraphPair> v;
    for (auto i : idx) v.push_back(data.pairs[i]);
    return v;
  };
  write_graphs(dir / "graphs.jsonl", data.graphs);
  write_pairs(dir / "pairs.jsonl", data.pairs, data.graphs);
  write_pairs(dir / "train.jsonl", subset(split.train), data.graphs);
  write_pairs(dir / "valid.jsonl", subset(split.valid), data.graphs);
  write_pairs(dir / "test.jsonl", subset(split.test), data.graphs);
  write_manifest(dir / "manifest.json", "generate", cfg,
                 {{"task", a.task}, {"count", a.count}, {"n_min", a.n_min}, {"n_max", a.n_max},
                  {"labels", a.labels}, {"edit_budget", a.edit_budget}, {"edge_prob", a.edge_prob},
                  {"ged_labels", task == Task::ged && !a.no_ged}});
  out << "wrote " << data.graphs.size() << " graphs, " << data.pairs.size() << " pairs ("
      << split.train.size() << "/" << split.valid.size() << "/" << split.test.size() << ") to "
      << dir.string() << "\n";
  return kOk;
}

// ---- ged -----------------------------------------------------------------

struct GedArgs {
  ConfigFlags config;
  std::string graphs, pairs, out;
};

int cmd_ged(const GedArgs& a, std::ostream& out) {
  Config cfg;
  apply_flags(cfg, a.config);
  require(a.graphs, "--graphs");
  require(a.pairs, "--pairs");
  require(a.out, "--out file");
  Dataset data = load_dataset(a.graphs, a.pairs);
  fill_ged(data, cfg.node_limit, cfg.threads);
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_pairs(path, data.pairs, data.graphs);
  write_manifest(manifest_beside(path), "ged", cfg, {{"graphs", a.graphs}, {"pairs", a.pairs}});
  out << "labeled " << data.pairs.size() << " pairs -> " << path.string() << "\n";
  return kOk;
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  ConfigFlags config;
  std::string graphs, train, valid, out;
  bool quiet = false;
};

std::string loss_curve_csv(const std::vector<double>& history) {
  std::ostringstream os;
  os << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t e = 0; e < history.size(); ++e) os << e << "," << history[e] << "\n";
  return os.str();
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  Config cfg;
  apply_flags(cfg, a.config);
  if (!a.graphs.empty()) cfg.graphs = a.graphs;
  if (!a.train.empty()) cfg.train_pairs = a.train;
  if (!a.valid.empty()) cfg.valid_pairs = a.valid;
  if (!a.out.empty()) cfg.output_dir = a.out;
  require(cfg.graphs, "graph file (--graphs or data.graphs)");
  require(cfg.train_pairs, "training pairs (--train or data.train)");

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_manifest(dir / "manifest.json", "train", cfg,
                 {{"graphs", cfg.graphs}, {"train", cfg.train_pairs}, {"valid", cfg.valid_pairs}});

  const Dataset data = load_dataset(cfg.graphs, cfg.train_pairs);
  const auto idx = all_indices(data.pairs.size());
  const int every = std::max(1, cfg.epochs / 10);
  const auto ckpt = train(data, idx, cfg, [&](int epoch, double loss) {
    if (!a.quiet && (epoch % every == 0 || epoch + 1 == cfg.epochs)) {
      out << "epoch " << epoch << " loss " << fmt(loss) << "\n";
    }
  });
  save_checkpoint(ckpt, dir / "checkpoint.json");
  write_text(dir / "loss_curve.csv", loss_curve_csv(ckpt.loss_history));

  if (!cfg.valid_pairs.empty()) {
    const Dataset valid = load_dataset(cfg.graphs, cfg.valid_pairs);
    const auto report = evaluate(ckpt, valid, all_indices(valid.pairs.size()), cfg.task);
    write_text(dir / "metrics.json", report.to_json());
  }
  if (cfg.task == Task::ged && !ckpt.params.calibration) {
    out << "note: fewer than 2 labeled training pairs; checkpoint has no calibration map\n";
  }
  out << "checkpoint -> " << (dir / "checkpoint.json").string() << "\n";
  return kOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  ConfigFlags config;
  std::string ckpt, graphs, pairs, task, out, sweep;
};

struct SweepSpec {
  std::string key;
  std::vector<double> values;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto [key, range] = split_assignment(text);
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(range);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof() || !(step > 0) ||
      hi < lo) {
    throw ConfigError("--sweep expects key=start:stop:step with step > 0, got '" + text + "'");
  }
  SweepSpec s{key, {}};
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) s.values.push_back(lo + static_cast<double>(i) * step);
  return s;
}

ordered_json report_json(const MetricsReport& r) { return ordered_json::parse(r.to_json()); }

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  require(a.graphs, "--graphs");
  require(a.pairs, "--pairs");
  const Dataset data = load_dataset(a.graphs, a.pairs);
  const auto idx = all_indices(data.pairs.size());

  if (a.sweep.empty()) {
    require(a.ckpt, "--ckpt");
    Checkpoint ckpt = load_checkpoint(a.ckpt);
    for (const auto& s : a.config.sets) {
      const auto [key, value] = split_assignment(s);
      ckpt.config.set_from_string(key, value);
    }
    const Task task = a.task.empty() ? ckpt.config.task : parse_task(a.task);
    const auto report = evaluate(ckpt, data, idx, task);
    const auto text = report.to_json();
    if (!a.out.empty()) {
      const fs::path dir(a.out);
      write_text(dir / "metrics.json", text);
      write_manifest(dir / "manifest.json", "eval", ckpt.config,
                     {{"checkpoint", a.ckpt}, {"graphs", a.graphs}, {"pairs", a.pairs}, {"task", to_string(task)}});
    }
    out << text;
    return kOk;
  }

  // Sweep: retrain per value on data.train, evaluate on --pairs.
  Config base;
  if (!a.ckpt.empty()) base = load_checkpoint(a.ckpt).config;
  apply_flags(base, a.config);
  require(base.train_pairs, "training pairs (data.train) for --sweep");
  const auto spec = parse_sweep(a.sweep);
  const Task task = a.task.empty() ? base.task : parse_task(a.task);
  const Dataset train_data = load_dataset(a.graphs, base.train_pairs);
  const auto train_idx = all_indices(train_data.pairs.size());

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "value,metric,score\n" << std::setprecision(17);
  for (double v : spec.values) {
    Config cfg = base;
    cfg.set_from_string(spec.key, fmt(v));
    cfg.task = task;
    cfg.validate();
    const auto ckpt = train(train_data, train_idx, cfg);
    const auto report = evaluate(ckpt, data, idx, task);
    const auto j = report_json(report);
    rows.push_back({{spec.key, v}, {"metrics", j}});
    const double score = task == Task::ged ? report.mse.value_or(NAN) : report.auc.value_or(NAN);
    csv << v << "," << (task == Task::ged ? "mse" : "auc") << "," << score << "\n";
    out << spec.key << "=" << fmt(v) << " " << (task == Task::ged ? "mse " : "auc ") << fmt(score) << "\n";
  }
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    write_text(dir / "sweep.json", rows.dump(2) + "\n");
    write_text(dir / "sweep.csv", csv.str());
    write_manifest(dir / "manifest.json", "eval --sweep", base,
                   {{"sweep", a.sweep}, {"graphs", a.graphs}, {"pairs", a.pairs}, {"task", to_string(task)}});
  }
  return kOk;
}

// ---- predict -------------------------------------------------------------

struct PredictArgs {
  ConfigFlags config;
  std::string ckpt, graphs, pairs, task, out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  require(a.ckpt, "--ckpt");
  require(a.graphs, "--graphs");
  require(a.pairs, "--pairs");
  Checkpoint ckpt = load_checkpoint(a.ckpt);
  for (const auto& s : a.config.sets) {
    const auto [key, value] = split_assignment(s);
    ckpt.config.set_from_string(key, value);
  }
  const Task task = a.task.empty() ? ckpt.config.task : parse_task(a.task);
  const Dataset data = load_dataset(a.graphs, a.pairs);
  const auto preds = predict(ckpt, data, all_indices(data.pairs.size()), task);

  std::ostringstream os;
  for (const auto& p : preds) {
    const auto& pair = data.pairs[p.pair];
    ordered_json j;
    j["g1"] = data.graphs[pair.g1].id;
    j["g2"] = data.graphs[pair.g2].id;
    j["score"] = p.score;
    if (p.label) j["label"] = *p.label;
    os << j.dump() << "\n";
  }
  if (a.out.empty()) {
    out << os.str();
  } else {
    const fs::path path(a.out);
    write_text(path, os.str());
    write_manifest(manifest_beside(path), "predict", ckpt.config,
                   {{"checkpoint", a.ckpt}, {"graphs", a.graphs}, {"pairs", a.pairs}, {"task", to_string(task)}});
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cgmn: contrastive graph matching networks", "cgmn"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic dataset with splits");
  add_config_flags(g, gen.config);
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--task", gen.task, "ged or bsd")->check(CLI::IsMember({"ged", "bsd"}));
  g->add_option("--count", gen.count, "Number of pairs");
  g->add_option("--seed", gen.seed, "Seed (overrides train.seed)")->each([&](const std::string&) {
    gen.seed_given = true;
  });
  g->add_option("--n-min", gen.n_min, "Smallest base graph");
  g->add_option("--n-max", gen.n_max, "Largest graph");
  g->add_option("--labels", gen.labels, "Node label alphabet size (1 = unlabeled)");
  g->add_option("--edit-budget", gen.edit_budget, "Maximum edits per GED pair");
  g->add_option("--edge-prob", gen.edge_prob, "Extra edge probability");
  g->add_flag("--no-ged", gen.no_ged, "Skip oracle labeling");

  GedArgs ged;
  auto* o = app.add_subcommand("ged", "Fill pair GED values with the exact oracle");
  add_config_flags(o, ged.config);
  o->add_option("--graphs", ged.graphs, "Graph file")->required();
  o->add_option("--pairs", ged.pairs, "Pair file")->required();
  o->add_option("--out", ged.out, "Output pair file")->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a model");
  add_config_flags(t, tr.config);
  t->add_option("--graphs", tr.graphs, "Graph file (data.graphs)");
  t->add_option("--train", tr.train, "Training pairs (data.train)");
  t->add_option("--valid", tr.valid, "Validation pairs (data.valid)");
  t->add_option("--out", tr.out, "Output directory (output.dir)");
  t->add_flag("--quiet", tr.quiet, "No per-epoch output");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint, or sweep one config key");
  add_config_flags(e, ev.config);
  e->add_option("--ckpt", ev.ckpt, "Checkpoint file");
  e->add_option("--graphs", ev.graphs, "Graph file")->required();
  e->add_option("--pairs", ev.pairs, "Pair file")->required();
  e->add_option("--task", ev.task, "ged or bsd (default: checkpoint task)")
      ->check(CLI::IsMember({"ged", "bsd"}));
  e->add_option("--out", ev.out, "Output directory");
  e->add_option("--sweep", ev.sweep, "key=start:stop:step; retrains per value");

  PredictArgs pr;
  auto* p = app.add_subcommand("predict", "Score pairs with a checkpoint");
  add_config_flags(p, pr.config);
  p->add_option("--ckpt", pr.ckpt, "Checkpoint file")->required();
  p->add_option("--graphs", pr.graphs, "Graph file")->required();
  p->add_option("--pairs", pr.pairs, "Pair file")->required();
  p->add_option("--task", pr.task, "ged or bsd")->check(CLI::IsMember({"ged", "bsd"}));
  p->add_option("--out", pr.out, "Output JSON-lines file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "cgmn: " << ex.what() << "\n";
    return kConfig;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*o) return cmd_ged(ged, out);
    if (*t) return cmd_train(tr, out);
    if (*e) return cmd_eval(ev, out);
    if (*p) return cmd_predict(pr, out);
  } catch (const ConfigError& ex) {
    err << "cgmn: config error: " << ex.what() << "\n";
    return kConfig;
  } catch (const IoError& ex) {
    err << "cgmn: " << ex.what() << "\n";
    return kIo;
  } catch (const NumericError& ex) {
    err << "cgmn: " << ex.what() << "\n";
    return kNumeric;
  } catch (const Error& ex) {
    err << "cgmn: data error: " << ex.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& ex) {
    err << "cgmn: " << ex.what() << "\n";
    return kIo;
  } catch (const std::exception& ex) {
    err << "cgmn: internal error: " << ex.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace cgmn::cli
