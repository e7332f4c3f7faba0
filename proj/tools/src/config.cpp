#include "copuf/harness/config.hpp"

#include <cstdlib>
#include <fstream>

#include "copuf/errors.hpp"

namespace copuf::harness {

using nlohmann::json;

json to_json(const ExperimentConfig& c) {
  json mlp = {
      {"l", c.mlp.l == 0 ? json("auto") : json(c.mlp.l)},
      {"hidden", c.mlp.hidden},
      {"baseline", c.mlp.baseline},
      {"epochs", c.mlp.epochs},
      {"batch_size", c.mlp.batch_size},
      {"learning_rate", c.mlp.learning_rate},
      {"patience", c.mlp.patience},
      {"keep_best", c.mlp.keep_best},
  };
  return {
      {"instance", copuf::to_json(c.instance)},
      {"sigma", c.sigma},
      {"crp_sigma", c.crp_sigma},
      {"seeds", {{"data", c.seeds.data}, {"model", c.seeds.model}, {"metrics", c.seeds.metrics}}},
      {"sizes", {{"train", c.sizes.train}, {"validation", c.sizes.validation}, {"test", c.sizes.test}}},
      {"mlp", mlp},
      {"metrics",
       {{"challenges", c.metrics.challenges},
        {"repeats", c.metrics.repeats},
        {"reference", to_string(c.metrics.reference)}}},
      {"threads", c.threads},
      {"out_dir", c.out_dir},
  };
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    ExperimentConfig c;
    if (j.contains("instance")) c.instance = descriptor_from_json(j.at("instance"));
    read(j, "sigma", c.sigma);
    read(j, "crp_sigma", c.crp_sigma);
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      read(s, "data", c.seeds.data);
      read(s, "model", c.seeds.model);
      read(s, "metrics", c.seeds.metrics);
    }
    if (j.contains("sizes")) {
      const auto& s = j.at("sizes");
      read(s, "train", c.sizes.train);
      read(s, "validation", c.sizes.validation);
      read(s, "test", c.sizes.test);
    }
    if (j.contains("mlp")) {
      const auto& m = j.at("mlp");
      if (m.contains("l")) {
        const auto& l = m.at("l");
        if (l.is_string()) {
          if (l.get<std::string>() != "auto") throw ConfigError("mlp.l must be a positive integer or \"auto\"");
          c.mlp.l = 0;
        } else {
          const auto v = l.get<long long>();
          if (v < 1 || v > 20) throw ConfigError("mlp.l must be in 1..20");
          c.mlp.l = static_cast<unsigned>(v);
        }
      }
      read(m, "hidden", c.mlp.hidden);
      read(m, "baseline", c.mlp.baseline);
      read(m, "epochs", c.mlp.epochs);
      read(m, "batch_size", c.mlp.batch_size);
      read(m, "learning_rate", c.mlp.learning_rate);
      read(m, "patience", c.mlp.patience);
      read(m, "keep_best", c.mlp.keep_best);
    }
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      read(m, "challenges", c.metrics.challenges);
      read(m, "repeats", c.metrics.repeats);
      if (m.contains("reference")) c.metrics.reference = parse_reference(m.at("reference").get<std::string>());
    }
    read(j, "threads", c.threads);
    read(j, "out_dir", c.out_dir);

    if (c.sigma < 0 || c.crp_sigma < 0) throw ConfigError("noise sigma must be >= 0");
    if (c.threads == 0) throw ConfigError("threads must be >= 1");
    if (c.mlp.epochs == 0 || c.mlp.batch_size == 0) throw ConfigError("epochs and batch_size must be >= 1");
    if (!(c.mlp.learning_rate > 0)) throw ConfigError("learning_rate must be > 0");
    for (auto w : c.mlp.hidden) {
      if (w == 0) throw ConfigError("hidden widths must be >= 1");
    }
    if (c.metrics.repeats == 0 || c.metrics.challenges == 0) {
      throw ConfigError("metrics challenges and repeats must be >= 1");
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

ExperimentConfig resolve_config(const ExperimentConfig& base, const std::vector<json>& patches) {
  json merged = to_json(base);
  for (const auto& p : patches) {
    if (p.is_null()) continue;
    if (!p.is_object()) throw ConfigError("config layers must be JSON objects");
    merged.merge_patch(p);
  }
  return config_from_json(merged);
}

unsigned effective_l(const ExperimentConfig& cfg) {
  return cfg.mlp.l != 0 ? cfg.mlp.l : choose_l(cfg.instance);
}

MlpConfig resolve_mlp(const ExperimentConfig& cfg) {
  MlpConfig m;
  if (!cfg.mlp.hidden.empty()) {
    m.hidden = cfg.mlp.hidden;
  } else if (cfg.mlp.baseline) {
    m.hidden = baseline_widths(cfg.instance.k());
  } else {
    m.hidden = three_layer_widths(effective_l(cfg));
  }
  m.input_dim = FeatureMap::for_instance(cfg.instance).dim(cfg.instance.n);
  m.epochs = cfg.mlp.epochs;
  m.batch_size = cfg.mlp.batch_size;
  m.learning_rate = cfg.mlp.learning_rate;
  m.patience = cfg.mlp.patience;
  m.keep_best = cfg.mlp.keep_best;
  m.seed = cfg.seeds.model;
  return m;
}

std::filesystem::path output_dir(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("COPUF_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "copuf-out";
}

std::filesystem::path reports_path(const ExperimentConfig& cfg) {
  return output_dir(cfg) / "reports.jsonl";
}

}  // namespace copuf::harness
