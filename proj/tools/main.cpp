// copuf: instance generation, metrics, CRP datasets, attacks and table recipes.
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "copuf/errors.hpp"
#include "copuf/harness/commands.hpp"
#include "copuf/harness/reports.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace copuf;
using namespace copuf::harness;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigExit = 2,
  kIoExit = 3,
  kDivergenceExit = 4,
  kFormatExit = 5,
  kMismatchExit = 6,
};

std::string quote(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t\"'\\$;&|<>()*?") == std::string::npos) return arg;
  std::string out = "'";
  for (char c : arg) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::vector<std::size_t> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a non-negative integer");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw ConfigError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

// Flags shared by every command that describes an instance.
struct InstanceFlags {
  std::string descriptor;
  std::optional<std::string> arch, loops, xyz, xy, mn_sizes;
  std::optional<std::size_t> n, z, interpose;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app, bool seed_is_instance) {
    app->add_option("--instance", descriptor, "Instance descriptor file (from gen)");
    app->add_option("--arch", arch, "apuf | ff | xor-ff | oax-ff | mn | ipuf");
    app->add_option("--n", n, "Challenge length");
    app->add_option("--loops", loops, "Loop_A..Loop_G or explicit \"15->25,30;...\"");
    app->add_option("--z", z, "XOR member count (xor-ff)");
    app->add_option("--xyz", xyz, "OR,AND,XOR member counts (oax-ff), e.g. 2,3,1");
    app->add_option("--xy", xy, "Lower,upper counts (ipuf), e.g. 3,3");
    app->add_option("--mn-sizes", mn_sizes, "Auxiliary sizes S1,S2,S3 (mn)");
    app->add_option("--interpose", interpose, "1-based interpose position (ipuf)");
    app->add_option(seed_is_instance ? "--seed,--instance-seed" : "--instance-seed", seed, "Instance seed");
  }

  // Descriptor file, then flags.
  std::vector<json> patches() const {
    std::vector<json> out;
    if (!descriptor.empty()) out.push_back({{"instance", load_json_file(descriptor)}});
    json inst = json::object();
    if (arch) inst["arch"] = *arch;
    if (n) inst["n"] = *n;
    if (loops) {
      const auto layout = resolve_loop_layout(*loops);
      inst["loops"] = format_loop_layout(layout);
      bool named = false;
      for (const auto& [id, named_layout] : named_loop_layouts()) {
        if (named_layout == layout && !named) {
          inst["loop_id"] = id;
          named = true;
        }
      }
      if (!named) inst["loop_id"] = "";
    }
    if (z) inst["z"] = *z;
    if (xyz) {
      const auto v = parse_list(*xyz, 3, "--xyz");
      inst["xyz"] = v;
    }
    if (xy) inst["xy"] = parse_list(*xy, 2, "--xy");
    if (mn_sizes) inst["mn_sizes"] = parse_list(*mn_sizes, 3, "--mn-sizes");
    if (interpose) inst["interpose_pos"] = *interpose;
    if (seed) inst["seed"] = *seed;
    if (!inst.empty()) out.push_back({{"instance", inst}});
    return out;
  }
};

struct MlpFlags {
  std::optional<std::string> l, hidden;
  std::optional<std::size_t> epochs, batch, patience;
  std::optional<double> lr;
  bool baseline = false;
  bool last_epoch = false;

  void add(CLI::App* app) {
    app->add_option("--l", l, "Hidden-size parameter: integer or auto");
    app->add_option("--hidden", hidden, "Explicit hidden widths, e.g. 8,16,8");
    app->add_flag("--baseline", baseline, "One hidden layer of 2^(k+1) units");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--batch", batch, "Mini-batch size");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--patience", patience, "Stop after this many epochs without improvement (0 = off)");
    app->add_flag("--last-epoch", last_epoch, "Return final-epoch weights instead of best-validation");
  }

  json patch() const {
    json m = json::object();
    if (l) {
      if (*l == "auto") {
        m["l"] = "auto";
      } else {
        m["l"] = parse_list(*l, 1, "--l").front();
      }
    }
    if (hidden) m["hidden"] = parse_list(*hidden, 0, "--hidden");
    if (baseline) m["baseline"] = true;
    if (epochs) m["epochs"] = *epochs;
    if (batch) m["batch_size"] = *batch;
    if (lr) m["learning_rate"] = *lr;
    if (patience) m["patience"] = *patience;
    if (last_epoch) m["keep_best"] = false;
    return m.empty() ? json(nullptr) : json{{"mlp", m}};
  }
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig: return kConfigExit;
    case ErrorKind::kIo: return kIoExit;
    case ErrorKind::kDivergence: return kDivergenceExit;
    case ErrorKind::kFormat: return kFormatExit;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and modeling-attack toolkit for challenge-obfuscated arbiter PUFs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", COPUF_VERSION_STRING);

  std::string config_file, out_dir;
  std::optional<unsigned> threads;
  bool quiet = false;
  app.add_option("--config", config_file, "JSON config file (comments allowed)");
  app.add_option("--out-dir", out_dir, "Output directory (default: $COPUF_OUT_DIR, then ./copuf-out)");
  app.add_option("--threads", threads, "Worker threads for sampling");
  app.add_flag("-q,--quiet", quiet, "No progress output");

  // gen
  auto* gen = app.add_subcommand("gen", "Write an instance descriptor");
  InstanceFlags gen_inst;
  gen_inst.add(gen, true);
  std::string gen_out;
  gen->add_option("-o,--out", gen_out, "Descriptor path (default: <out-dir>/instance.json)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Measure BER and uniformity");
  InstanceFlags met_inst;
  met_inst.add(metrics, false);
  std::optional<double> met_sigma;
  std::optional<std::uint64_t> met_seed;
  std::optional<std::size_t> met_challenges, met_repeats;
  std::optional<std::string> met_reference;
  metrics->add_option("--sigma", met_sigma, "Nominal noise sigma");
  metrics->add_option("--seed", met_seed, "Challenge/noise stream seed");
  metrics->add_option("--challenges", met_challenges);
  metrics->add_option("--repeats", met_repeats);
  metrics->add_option("--reference", met_reference, "golden | majority");

  // crps
  auto* crps = app.add_subcommand("crps", "Generate a CRP dataset file");
  InstanceFlags crp_inst;
  crp_inst.add(crps, false);
  std::size_t crp_count = 0;
  std::optional<double> crp_sigma;
  std::optional<std::uint64_t> crp_seed;
  std::string crp_out, crp_csv;
  crps->add_option("--count", crp_count, "Number of CRPs")->required();
  crps->add_option("--sigma", crp_sigma, "Nominal noise on responses (default 0)");
  crps->add_option("--seed", crp_seed, "Data seed");
  crps->add_option("-o,--out", crp_out, "Binary output (default: <out-dir>/crps.bin)");
  crps->add_option("--csv", crp_csv, "Also write CSV");

  // attack
  auto* attack = app.add_subcommand("attack", "Train the MLP on CRP files");
  InstanceFlags att_inst;
  att_inst.add(attack, false);
  MlpFlags att_mlp;
  att_mlp.add(attack);
  std::string att_train, att_val, att_test, att_data;
  std::optional<std::string> att_split;
  std::optional<std::uint64_t> att_seed;
  auto* train_opt = attack->add_option("--train", att_train, "Training CRP file");
  auto* val_opt = attack->add_option("--val", att_val, "Validation CRP file");
  auto* test_opt = attack->add_option("--test", att_test, "Test CRP file");
  auto* data_opt = attack->add_option("--data", att_data, "Single CRP file, split by --split");
  attack->add_option("--split", att_split, "train,validation,test record counts for --data");
  train_opt->needs(val_opt, test_opt);
  data_opt->excludes(train_opt, val_opt, test_opt);
  attack->add_option("--seed", att_seed, "Model seed");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "Run table recipes");
  std::string repro_table, repro_rows, repro_seeds = "1";
  std::optional<double> repro_sigma, repro_crp_sigma;
  double repro_scale = 1.0;
  bool repro_dry = false, repro_all = false, repro_list = false;
  MlpFlags repro_mlp;
  repro_mlp.add(repro);
  repro->add_option("table", repro_table, "table2|table4|table5|table8|table9|table10|table11|table12|table13")
      ->required();
  repro->add_option("--row", repro_rows, "Row selector: ids, id prefixes or 1-based indices, comma-separated");
  repro->add_option("--seeds", repro_seeds, "Comma-separated seeds (one run per seed)");
  repro->add_option("--sigma", repro_sigma, "Metrics noise sigma");
  repro->add_option("--crp-sigma", repro_crp_sigma, "Noise on attack CRPs");
  repro->add_option("--scale", repro_scale, "Multiply train/validation sizes");
  repro->add_flag("--dry-run", repro_dry, "Print the plan only");
  repro->add_flag("--all", repro_all, "Include rows too large for a desk run");
  repro->add_flag("--list", repro_list, "List row ids");

  // rerun
  auto* rerun_cmd = app.add_subcommand("rerun", "Re-execute a stored report and compare");
  std::string rerun_id, rerun_reports;
  rerun_cmd->add_option("id", rerun_id, "Report id or unique prefix")->required();
  rerun_cmd->add_option("--reports", rerun_reports, "Reports file (default: <out-dir>/reports.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigExit;
  }

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + quote(argv[i]);

  try {
    std::vector<json> patches;
    if (!config_file.empty()) patches.push_back(load_json_file(config_file));
    json global = json::object();
    if (!out_dir.empty()) global["out_dir"] = out_dir;
    if (threads) global["threads"] = *threads;

    RunContext ctx{command_line, quiet ? nullptr : &std::cerr, true};
    auto resolve = [&](const InstanceFlags& flags, json extra) {
      auto layers = patches;
      for (auto& p : flags.patches()) layers.push_back(std::move(p));
      if (!global.empty()) layers.push_back(global);
      if (!extra.is_null() && !extra.empty()) layers.push_back(std::move(extra));
      return resolve_config(ExperimentConfig{}, layers);
    };

    if (gen->parsed()) {
      const auto cfg = resolve(gen_inst, nullptr);
      const fs::path out = gen_out.empty() ? output_dir(cfg) / "instance.json" : fs::path(gen_out);
      const auto record = run_gen(cfg, out, ctx);
      std::cout << record.at("result").dump(2) << "\n";
    } else if (metrics->parsed()) {
      json extra = json::object();
      if (met_sigma) extra["sigma"] = *met_sigma;
      if (met_seed) extra["seeds"]["metrics"] = *met_seed;
      if (met_challenges) extra["metrics"]["challenges"] = *met_challenges;
      if (met_repeats) extra["metrics"]["repeats"] = *met_repeats;
      if (met_reference) extra["metrics"]["reference"] = *met_reference;
      const auto cfg = resolve(met_inst, extra);
      const auto record = run_metrics(cfg, ctx);
      json shown = record.at("result");
      shown["id"] = record.at("id");
      shown["instance"] = cfg.instance.label();
      std::cout << shown.dump(2) << "\n";
    } else if (crps->parsed()) {
      json extra = json::object();
      if (crp_sigma) extra["crp_sigma"] = *crp_sigma;
      if (crp_seed) extra["seeds"]["data"] = *crp_seed;
      const auto cfg = resolve(crp_inst, extra);
      const fs::path out = crp_out.empty() ? output_dir(cfg) / "crps.bin" : fs::path(crp_out);
      const auto record = run_crps(cfg, crp_count, out, crp_csv, ctx);
      json shown = record.at("result");
      shown["id"] = record.at("id");
      shown["out"] = out.string();
      std::cout << shown.dump(2) << "\n";
    } else if (attack->parsed()) {
      json extra = att_mlp.patch();
      if (att_seed) {
        if (extra.is_null()) extra = json::object();
        extra["seeds"]["model"] = *att_seed;
      }
      if (att_split) {
        if (extra.is_null()) extra = json::object();
        const auto sizes = parse_list(*att_split, 3, "--split");
        extra["sizes"] = {{"train", sizes[0]}, {"validation", sizes[1]}, {"test", sizes[2]}};
      }
      const auto cfg = resolve(att_inst, extra);
      if (att_data.empty() && att_train.empty()) throw ConfigError("attack needs --train/--val/--test or --data");
      const auto record = att_data.empty() ? run_attack(cfg, att_train, att_val, att_test, ctx)
                                           : run_attack_split(cfg, att_data, ctx);
      const auto& r = record.at("result");
      std::cout << json{{"id", record.at("id")},
                        {"instance", cfg.instance.label()},
                        {"test_accuracy", r.at("test_accuracy")},
                        {"best_epoch", r.at("best_epoch")},
                        {"best_val_accuracy", r.at("best_val_accuracy")},
                        {"training_seconds", r.at("training_seconds")},
                        {"hidden", r.at("mlp").at("hidden")}}
                       .dump(2)
                << "\n";
    } else if (repro->parsed()) {
      if (repro_list) {
        for (const auto& row : recipe_table(repro_table)) {
          std::cout << row.id << (row.desk_scale ? "" : "  (large)") << "\n";
        }
        return kOk;
      }
      ReproduceOptions opts;
      opts.table = repro_table;
      opts.rows = repro_rows;
      opts.seeds.clear();
      for (auto s : parse_list(repro_seeds, 0, "--seeds")) opts.seeds.push_back(s);
      opts.patches = patches;
      if (repro_sigma) global["sigma"] = *repro_sigma;
      if (repro_crp_sigma) global["crp_sigma"] = *repro_crp_sigma;
      if (!global.empty()) opts.patches.push_back(global);
      if (auto m = repro_mlp.patch(); !m.is_null()) opts.patches.push_back(m);
      opts.scale = repro_scale;
      opts.dry_run = repro_dry;
      opts.include_large = repro_all;
      reproduce(opts, std::cout, ctx);
    } else if (rerun_cmd->parsed()) {
      auto layers = patches;
      if (!global.empty()) layers.push_back(global);
      const fs::path reports =
          rerun_reports.empty() ? reports_path(resolve_config(ExperimentConfig{}, layers)) : fs::path(rerun_reports);
      const auto original = find_report(reports, rerun_id);
      if (!original) throw ConfigError("no report with id '" + rerun_id + "' in " + reports.string());
      const auto again = rerun(*original, ctx);
      const bool same = reproducible_part(*original) == reproducible_part(again);
      std::cout << json{{"original", original->at("id")},
                        {"rerun", again.at("id")},
                        {"identical", same},
                        {"expected", reproducible_part(*original)},
                        {"observed", reproducible_part(again)}}
                       .dump(2)
                << "\n";
      return same ? kOk : kMismatchExit;
    }
    return kOk;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (epoch " << e.epoch() << ")\n";
    return kDivergenceExit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
