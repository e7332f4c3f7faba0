#include "copuf/harness/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "copuf/errors.hpp"
#include "copuf/harness/reports.hpp"

namespace copuf::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void log_line(const RunContext& ctx, const std::string& text) {
  if (ctx.log != nullptr) *ctx.log << text << std::endl;
}

json finish(const std::string& kind, const ExperimentConfig& cfg, const json& inputs,
            const json& result, const RunContext& ctx) {
  json record = make_record(kind, ctx.command_line, to_json(cfg), inputs, result);
  if (ctx.record) append_report(reports_path(cfg), record);
  return record;
}

void ensure_parent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
}

NoiseModel crp_noise(const ExperimentConfig& cfg) {
  return cfg.crp_sigma > 0 ? calibrated_noise(cfg.crp_sigma) : NoiseModel{};
}

CrpSet collect(const ExperimentConfig& cfg, std::size_t count) {
  const auto inst = build_instance(cfg.instance);
  CrpSet set = generate_crps(inst, count, crp_noise(cfg), cfg.seeds.data, cfg.threads);
  set.header().instance_seed = cfg.instance.seed;
  set.header().k = static_cast<std::uint16_t>(cfg.instance.k());
  set.header().arch = std::string(to_string(cfg.instance.arch));
  set.header().sigma = cfg.crp_sigma;
  return set;
}

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json attack_result(const ExperimentConfig& cfg, const CrpSet& train_set, const CrpSet& val_set,
                   const CrpSet& test_set, const RunContext& ctx) {
  const MlpConfig mlp = resolve_mlp(cfg);
  const FeatureMap map = FeatureMap::for_instance(cfg.instance);
  std::string widths;
  for (auto w : mlp.hidden) widths += (widths.empty() ? "" : ",") + std::to_string(w);
  log_line(ctx, "training " + cfg.instance.label() + " hidden=(" + widths + ") on " +
                    std::to_string(train_set.size()) + " CRPs");
  EpochCallback progress;
  if (ctx.log != nullptr) {
    progress = [&](const EpochRecord& e) {
      if (e.epoch % 10 == 0 || e.epoch == mlp.epochs) {
        log_line(ctx, "  epoch " + std::to_string(e.epoch) + " loss=" + fmt(e.train_loss) +
                          " val=" + fmt(e.val_accuracy));
      }
    };
  }
  const AttackResult result = run_attack(train_set, val_set, test_set, map, mlp, progress);
  json out = to_json(result.report);
  out["l"] = mlp.hidden.size() == 3 && cfg.mlp.hidden.empty() && !cfg.mlp.baseline ? json(effective_l(cfg))
                                                                                   : json(nullptr);
  return out;
}

}  // namespace

json run_gen(const ExperimentConfig& cfg, const fs::path& out, const RunContext& ctx) {
  validate(cfg.instance);
  ensure_parent(out);
  write_descriptor(cfg.instance, out);
  log_line(ctx, "wrote " + out.string() + " (" + cfg.instance.label() + ")");
  return finish("gen", cfg, {{"out", out.string()}}, to_json(cfg.instance), ctx);
}

json run_metrics(const ExperimentConfig& cfg, const RunContext& ctx) {
  const auto inst = build_instance(cfg.instance);
  const MetricsReport report =
      measure_metrics(inst, cfg.sigma, cfg.seeds.metrics, cfg.metrics.challenges, cfg.metrics.repeats,
                      cfg.metrics.reference, cfg.threads);
  return finish("metrics", cfg, json::object(), to_json(report), ctx);
}

json run_crps(const ExperimentConfig& cfg, std::size_t count, const fs::path& out, const fs::path& csv,
              const RunContext& ctx) {
  if (count == 0) throw ConfigError("count must be >= 1");
  const CrpSet set = collect(cfg, count);
  ensure_parent(out);
  write_crps(set, out);
  json inputs = {{"count", count}, {"out", out.string()}};
  if (!csv.empty()) {
    ensure_parent(csv);
    write_crps_csv(set, csv);
    inputs["csv"] = csv.string();
  }
  log_line(ctx, "wrote " + std::to_string(count) + " CRPs to " + out.string());
  json result = {{"count", count},
                 {"fingerprint", set.fingerprint()},
                 {"file_bytes", kCrpHeaderSize + count * set.record_size()}};
  return finish("crps", cfg, inputs, result, ctx);
}

json run_attack(const ExperimentConfig& cfg, const fs::path& train, const fs::path& val,
                const fs::path& test, const RunContext& ctx) {
  const CrpSet train_set = read_crps(train);
  const CrpSet val_set = read_crps(val);
  const CrpSet test_set = read_crps(test);
  if (train_set.n() != cfg.instance.n) {
    throw ConfigError("CRP files have n=" + std::to_string(train_set.n()) + " but the instance has n=" +
                      std::to_string(cfg.instance.n));
  }
  json inputs = {{"train", train.string()}, {"validation", val.string()}, {"test", test.string()}};
  return finish("attack", cfg, inputs, attack_result(cfg, train_set, val_set, test_set, ctx), ctx);
}

json run_attack_split(const ExperimentConfig& cfg, const fs::path& data, const RunContext& ctx) {
  const CrpSet all = read_crps(data);
  if (all.n() != cfg.instance.n) {
    throw ConfigError("CRP file has n=" + std::to_string(all.n()) + " but the instance has n=" +
                      std::to_string(cfg.instance.n));
  }
  const CrpSplit parts = split(all, cfg.sizes.train, cfg.sizes.validation, cfg.sizes.test);
  json inputs = {{"data", data.string()}};
  return finish("attack", cfg, inputs, attack_result(cfg, parts.train, parts.validation, parts.test, ctx),
                ctx);
}

json run_pipeline(const ExperimentConfig& cfg, const RunContext& ctx, const json& provenance) {
  const CrpSet all = collect(cfg, cfg.sizes.total());
  const CrpSplit parts = split(all, cfg.sizes.train, cfg.sizes.validation, cfg.sizes.test);
  json result = attack_result(cfg, parts.train, parts.validation, parts.test, ctx);
  return finish("pipeline", cfg, provenance, result, ctx);
}

json reproducible_part(const json& record) {
  const auto kind = record.at("kind").get<std::string>();
  const auto& r = record.at("result");
  if (kind == "metrics") return {{"ber", r.at("ber")}, {"uniformity", r.at("uniformity")}};
  if (kind == "crps") return {{"fingerprint", r.at("fingerprint")}, {"count", r.at("count")}};
  if (kind == "gen") return r;
  return {{"test_accuracy", r.at("test_accuracy")},
          {"best_epoch", r.at("best_epoch")},
          {"fingerprints", r.at("fingerprints")}};
}

json rerun(const json& record, const RunContext& ctx) {
  const auto kind = record.at("kind").get<std::string>();
  const ExperimentConfig cfg = config_from_json(record.at("config"));
  const json& in = record.value("inputs", json::object());
  if (kind == "gen") return run_gen(cfg, in.at("out").get<std::string>(), ctx);
  if (kind == "metrics") return run_metrics(cfg, ctx);
  if (kind == "crps") {
    return run_crps(cfg, in.at("count").get<std::size_t>(), in.at("out").get<std::string>(),
                    in.value("csv", std::string{}), ctx);
  }
  if (kind == "attack" && in.contains("data")) return run_attack_split(cfg, in.at("data").get<std::string>(), ctx);
  if (kind == "attack") {
    return run_attack(cfg, in.at("train").get<std::string>(), in.at("validation").get<std::string>(),
                      in.at("test").get<std::string>(), ctx);
  }
  if (kind == "pipeline") return run_pipeline(cfg, ctx, in);
  throw ConfigError("report kind '" + kind + "' cannot be re-run");
}

ExperimentConfig row_config(const RecipeRow& row, std::uint64_t seed, const ReproduceOptions& opts) {
  ExperimentConfig base = row.config;
  base.instance.seed = seed;
  base.seeds = {seed, seed, seed};
  ExperimentConfig cfg = resolve_config(base, opts.patches);
  if (opts.scale != 1.0) {
    if (!(opts.scale > 0)) throw ConfigError("scale must be > 0");
    auto scaled = [&](std::size_t v) {
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(v) * opts.scale)));
    };
    cfg.sizes.train = scaled(cfg.sizes.train);
    cfg.sizes.validation = scaled(cfg.sizes.validation);
  }
  return cfg;
}

namespace {

std::optional<double> published_ber(const RecipeRow& row, double sigma) {
  if (std::abs(sigma - 0.05) < 1e-12) return row.published.ber;
  if (std::abs(sigma - 0.02) < 1e-12) return row.published.ber_low;
  return std::nullopt;
}

std::string published_text(std::optional<double> v) { return v ? fmt(*v, 3) : std::string("n/a"); }

std::string plan_line(const RecipeRow& row, const ExperimentConfig& cfg, std::uint64_t seed) {
  std::string line = row.table + " " + row.id + " seed=" + std::to_string(seed) + " " + cfg.instance.label();
  if (row.kind == RowKind::kMetrics) {
    line += " metrics sigma=" + fmt(cfg.sigma, 3) + " challenges=" + std::to_string(cfg.metrics.challenges) +
            " repeats=" + std::to_string(cfg.metrics.repeats) +
            " published_ber=" + published_text(published_ber(row, cfg.sigma)) +
            " published_uniformity=" + published_text(row.published.uniformity);
  } else {
    const MlpConfig mlp = resolve_mlp(cfg);
    std::string widths;
    for (auto w : mlp.hidden) widths += (widths.empty() ? "" : ",") + std::to_string(w);
    line += " attack " + std::to_string(cfg.sizes.train) + "/" + std::to_string(cfg.sizes.validation) + "/" +
            std::to_string(cfg.sizes.test) + " epochs=" + std::to_string(cfg.mlp.epochs) +
            " batch=" + std::to_string(cfg.mlp.batch_size) + " hidden=(" + widths + ")" +
            " crp_sigma=" + fmt(cfg.crp_sigma, 3) + " published_acc=" + published_text(row.published.accuracy);
  }
  return line;
}

}  // namespace

std::vector<json> reproduce(const ReproduceOptions& opts, std::ostream& out, const RunContext& ctx) {
  if (opts.seeds.empty()) throw ConfigError("at least one seed is required");
  const auto rows = select_rows(recipe_table(opts.table), opts.rows);
  // Explicitly named rows run even when large.
  const bool large_ok = opts.include_large || !opts.rows.empty();
  std::vector<json> records;
  for (const auto& row : rows) {
    if (!row.desk_scale && !large_ok) {
      out << row.table << " " << row.id << " skipped (large; select it with --row or pass --all)\n";
      continue;
    }
    double ber_sum = 0, uni_sum = 0;
    for (auto seed : opts.seeds) {
      const ExperimentConfig cfg = row_config(row, seed, opts);
      if (opts.dry_run) {
        out << plan_line(row, cfg, seed) << "\n";
        continue;
      }
      const json provenance = {{"table", row.table}, {"row", row.id}, {"seed", seed}};
      if (row.kind == RowKind::kMetrics) {
        json record = run_metrics(cfg, {ctx.command_line, ctx.log, false});
        record["inputs"] = provenance;
        record["published"] = {{"ber", published_ber(row, cfg.sigma) ? json(*published_ber(row, cfg.sigma)) : json(nullptr)},
                           {"uniformity", row.published.uniformity ? json(*row.published.uniformity) : json(nullptr)}};
        if (ctx.record) append_report(reports_path(cfg), record);
        const auto& r = record.at("result");
        ber_sum += r.at("ber").get<double>();
        uni_sum += r.at("uniformity").get<double>();
        out << row.table << " " << row.id << " seed=" << seed << " ber=" << fmt(r.at("ber").get<double>())
            << " (published " << published_text(published_ber(row, cfg.sigma)) << ") uniformity="
            << fmt(r.at("uniformity").get<double>()) << " (published " << published_text(row.published.uniformity)
            << ") id=" << record.at("id").get<std::string>() << "\n";
        records.push_back(std::move(record));
      } else {
        json record = run_pipeline(cfg, {ctx.command_line, ctx.log, false}, provenance);
        record["published"] = {{"accuracy", row.published.accuracy ? json(*row.published.accuracy) : json(nullptr)}};
        if (ctx.record) append_report(reports_path(cfg), record);
        const auto& r = record.at("result");
        out << row.table << " " << row.id << " seed=" << seed
            << " acc=" << fmt(r.at("test_accuracy").get<double>()) << " (published "
            << published_text(row.published.accuracy) << ") time=" << fmt(r.at("training_seconds").get<double>(), 1)
            << "s id=" << record.at("id").get<std::string>() << "\n";
        records.push_back(std::move(record));
      }
      out.flush();
    }
    if (!opts.dry_run && row.kind == RowKind::kMetrics && opts.seeds.size() > 1) {
      const double k = static_cast<double>(opts.seeds.size());
      out << row.table << " " << row.id << " mean over " << opts.seeds.size() << " seeds: ber="
          << fmt(ber_sum / k) << " uniformity=" << fmt(uni_sum / k) << "\n";
    }
  }
  return records;
}

}  // namespace copuf::harness
