#include "coordnet/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "coordnet/analysis.hpp"
#include "coordnet/error.hpp"
#include "coordnet/graph_io.hpp"
#include "coordnet/log.hpp"
#include "coordnet/providers.hpp"
#include "coordnet/text.hpp"
#include "coordnet/timeutil.hpp"

namespace coordnet {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::BuildTrace: return "build-trace";
    case Stage::Fuse: return "fuse";
    case Stage::Dismantle: return "dismantle";
    case Stage::Cluster: return "cluster";
    case Stage::Evaluate: return "evaluate";
    case Stage::Drivers: return "drivers";
    case Stage::Report: return "report";
    case Stage::Synth: return "synth";
    case Stage::Score: return "score";
  }
  return "ingest";
}

Stage parse_stage(std::string_view name) {
  for (auto s : {Stage::Ingest, Stage::BuildTrace, Stage::Fuse, Stage::Dismantle, Stage::Cluster, Stage::Evaluate,
                 Stage::Drivers, Stage::Report, Stage::Synth, Stage::Score}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

namespace artifact {
std::string trace(TraceKind kind) { return "trace_" + std::string(to_string(kind)) + ".csv"; }
std::string trace_gexf(TraceKind kind) { return "trace_" + std::string(to_string(kind)) + ".gexf"; }
std::string dismantled(Strategy s) { return "dismantled_" + std::string(to_string(s)) + ".csv"; }
std::string strategy_report(Strategy s) { return "strategy_" + std::string(to_string(s)) + ".json"; }
std::string partition(Strategy s) { return "partition_" + std::string(to_string(s)) + ".csv"; }
std::string clustered_gexf(Strategy s) { return "clustered_" + std::string(to_string(s)) + ".gexf"; }
std::string quality(Strategy s) { return "quality_" + std::string(to_string(s)) + ".json"; }
std::string manifest(Stage stage) { return std::string(to_string(stage)) + ".manifest.json"; }
}  // namespace artifact

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Config parsing

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

template <typename T>
void read_key(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + (where.empty() ? std::string(key) : where + "." + key) + "' has the wrong type");
  }
}

Timestamp read_time(const json& j, const char* key, Timestamp fallback, const std::string& where) {
  std::string text;
  read_key(j, key, text, where);
  if (text.empty()) return fallback;
  auto t = parse_timestamp(text);
  if (!t) throw ConfigError("config key '" + where + "." + key + "' is not a timestamp");
  return *t;
}

GroupSpec parse_group(const json& j, const std::string& where) {
  check_keys(j, where, {"size", "kinds", "burst_window_seconds", "entity_pool_size", "bursts", "burst_participation",
                        "background_tweets"});
  GroupSpec g;
  read_key(j, "size", g.size, where);
  if (j.contains("kinds")) {
    std::vector<std::string> kinds;
    read_key(j, "kinds", kinds, where);
    g.kinds.clear();
    for (const auto& k : kinds) g.kinds.push_back(parse_coordination(k));
  }
  std::int64_t window = g.burst_window.count();
  read_key(j, "burst_window_seconds", window, where);
  g.burst_window = std::chrono::seconds{window};
  read_key(j, "entity_pool_size", g.entity_pool_size, where);
  read_key(j, "bursts", g.bursts, where);
  read_key(j, "burst_participation", g.burst_participation, where);
  read_key(j, "background_tweets", g.background_tweets, where);
  return g;
}

CampaignSpec parse_synth(const json& j) {
  const std::string where = "synth";
  check_keys(j, where, {"n_organic", "groups", "group_count", "group", "langs", "start", "end", "seed",
                        "organic_min_tweets", "organic_max_tweets", "domain_pool_size", "hashtag_pool_size",
                        "zipf_exponent", "url_probability", "hashtag_probability", "bilingual_fraction"});
  CampaignSpec spec = CampaignSpec::default_spec();
  read_key(j, "n_organic", spec.n_organic, where);
  if (j.contains("groups")) {
    if (!j["groups"].is_array()) throw ConfigError("synth.groups must be a list");
    spec.groups.clear();
    for (std::size_t i = 0; i < j["groups"].size(); ++i) {
      spec.groups.push_back(parse_group(j["groups"][i], where + ".groups[" + std::to_string(i) + "]"));
    }
  } else {
    std::size_t count = spec.groups.size();
    read_key(j, "group_count", count, where);
    GroupSpec proto = j.contains("group") ? parse_group(j["group"], where + ".group") : GroupSpec{};
    spec.groups.assign(count, proto);
  }
  read_key(j, "langs", spec.langs, where);
  spec.start = read_time(j, "start", spec.start, where);
  spec.end = read_time(j, "end", spec.end, where);
  read_key(j, "seed", spec.seed, where);
  read_key(j, "organic_min_tweets", spec.organic_min_tweets, where);
  read_key(j, "organic_max_tweets", spec.organic_max_tweets, where);
  read_key(j, "domain_pool_size", spec.domain_pool_size, where);
  read_key(j, "hashtag_pool_size", spec.hashtag_pool_size, where);
  read_key(j, "zipf_exponent", spec.zipf_exponent, where);
  read_key(j, "url_probability", spec.url_probability, where);
  read_key(j, "hashtag_probability", spec.hashtag_probability, where);
  read_key(j, "bilingual_fraction", spec.bilingual_fraction, where);
  return spec;
}

// ---------------------------------------------------------------------------
// Fingerprints

json to_json(const TraceConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"min_unique_entities", c.min_unique_entities},
          {"min_df", c.min_df},
          {"sim_threshold", c.sim_threshold},
          {"keep_isolates", c.keep_isolates},
          {"sequence_mode", c.sequence_mode},
          {"min_tokens", c.min_tokens}};
}

json to_json(const CampaignSpec& s) {
  json groups = json::array();
  for (const auto& g : s.groups) {
    json kinds = json::array();
    for (auto k : g.kinds) kinds.push_back(to_string(k));
    groups.push_back({{"size", g.size},
                      {"kinds", kinds},
                      {"burst_window_seconds", g.burst_window.count()},
                      {"entity_pool_size", g.entity_pool_size},
                      {"bursts", g.bursts},
                      {"burst_participation", g.burst_participation},
                      {"background_tweets", g.background_tweets}});
  }
  return {{"n_organic", s.n_organic},
          {"groups", groups},
          {"langs", s.langs},
          {"start", format_timestamp(s.start)},
          {"end", format_timestamp(s.end)},
          {"seed", s.seed},
          {"organic_min_tweets", s.organic_min_tweets},
          {"organic_max_tweets", s.organic_max_tweets},
          {"domain_pool_size", s.domain_pool_size},
          {"hashtag_pool_size", s.hashtag_pool_size},
          {"zipf_exponent", s.zipf_exponent},
          {"url_probability", s.url_probability},
          {"hashtag_probability", s.hashtag_probability},
          {"bilingual_fraction", s.bilingual_fraction}};
}

json strategies_json(const std::vector<Strategy>& strategies) {
  json out = json::array();
  for (auto s : strategies) out.push_back(to_string(s));
  return out;
}

json sentiment_json(const PipelineConfig& c) {
  return {{"provider", c.sentiment_provider}, {"file", c.sentiment_file}};
}

json topics_json(const PipelineConfig& c) {
  return {{"provider", c.topic_provider}, {"file", c.topics_file}, {"top_k", c.topic_top_k}};
}

json seed_json(const PipelineConfig& c) { return c.seed ? json(*c.seed) : json(nullptr); }

}  // namespace

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  for (auto k : {TraceKind::CoDomain, TraceKind::CoHashtag, TraceKind::TextSimilarity}) {
    c.traces.push_back(TraceConfig::defaults(k, c.lang));
  }
  c.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  return c;
}

PipelineConfig PipelineConfig::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_null()) j = json::object();
  check_keys(j, "", {"input", "schema", "lang", "lang_pair", "balanced_sample", "out_dir", "seed", "threads", "traces",
                     "domain_filter", "fusion", "dismantle", "evaluate", "providers", "drivers", "report", "synth",
                     "score"});
  PipelineConfig c;
  read_key(j, "input", c.input, "");
  read_key(j, "lang", c.lang, "");
  if (j.contains("lang_pair") && !j["lang_pair"].is_null()) {
    std::vector<std::string> pair;
    read_key(j, "lang_pair", pair, "");
    if (pair.size() != 2 || pair[0] == pair[1]) throw ConfigError("lang_pair must name two different languages");
    c.lang_pair = std::make_pair(pair[0], pair[1]);
  }
  read_key(j, "balanced_sample", c.balanced_sample, "");
  std::string out_dir = c.out_dir.string();
  read_key(j, "out_dir", out_dir, "");
  c.out_dir = out_dir;
  if (j.contains("seed") && !j["seed"].is_null()) {
    std::uint64_t seed = 0;
    read_key(j, "seed", seed, "");
    c.seed = seed;
  }
  read_key(j, "threads", c.threads, "");

  if (j.contains("schema")) {
    const auto& s = j["schema"];
    check_keys(s, "schema", {"field_map", "horizon", "max_malformed_fraction"});
    read_key(s, "field_map", c.schema.field_map, "schema");
    if (s.contains("horizon") && !s["horizon"].is_null()) c.schema.horizon = read_time(s, "horizon", {}, "schema");
    read_key(s, "max_malformed_fraction", c.schema.max_malformed_fraction, "schema");
  }

  const std::string trace_lang = c.lang == "all" ? "en" : c.lang;
  if (j.contains("traces")) {
    const auto& t = j["traces"];
    check_keys(t, "traces", {"co_domain", "co_hashtag", "text_similarity"});
    for (const auto& [name, body] : t.items()) {
      const std::string where = "traces." + name;
      check_keys(body, where, {"min_unique_entities", "min_df", "sim_threshold", "keep_isolates", "sequence_mode",
                               "min_tokens"});
      auto tc = TraceConfig::defaults(parse_trace_kind(name), trace_lang);
      read_key(body, "min_unique_entities", tc.min_unique_entities, where);
      read_key(body, "min_df", tc.min_df, where);
      read_key(body, "sim_threshold", tc.sim_threshold, where);
      read_key(body, "keep_isolates", tc.keep_isolates, where);
      read_key(body, "sequence_mode", tc.sequence_mode, where);
      read_key(body, "min_tokens", tc.min_tokens, where);
      c.traces.push_back(tc);
    }
    std::sort(c.traces.begin(), c.traces.end(),
              [](const TraceConfig& a, const TraceConfig& b) { return a.kind < b.kind; });
  } else {
    for (auto k : {TraceKind::CoDomain, TraceKind::CoHashtag, TraceKind::TextSimilarity}) {
      c.traces.push_back(TraceConfig::defaults(k, trace_lang));
    }
  }
  read_key(j, "domain_filter", c.domain_filter_file, "");

  if (j.contains("fusion")) {
    check_keys(j["fusion"], "fusion", {"keep_isolates"});
    read_key(j["fusion"], "keep_isolates", c.fusion.keep_isolates, "fusion");
  }

  c.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  if (j.contains("dismantle")) {
    const auto& d = j["dismantle"];
    const std::string where = "dismantle";
    check_keys(d, where, {"keep_top_weight_fraction", "time_window_seconds", "require_sentiment_match",
                          "centrality_threshold", "iterate_pruning", "resolution", "strategies"});
    read_key(d, "keep_top_weight_fraction", c.dismantle.keep_top_weight_fraction, where);
    std::int64_t window = c.dismantle.time_window.count();
    read_key(d, "time_window_seconds", window, where);
    c.dismantle.time_window = std::chrono::seconds{window};
    read_key(d, "require_sentiment_match", c.dismantle.require_sentiment_match, where);
    read_key(d, "centrality_threshold", c.dismantle.centrality_threshold, where);
    read_key(d, "iterate_pruning", c.dismantle.iterate_pruning, where);
    read_key(d, "resolution", c.dismantle.resolution, where);
    if (d.contains("strategies")) {
      std::vector<std::string> names;
      read_key(d, "strategies", names, where);
      c.strategies.clear();
      for (const auto& n : names) c.strategies.push_back(parse_strategy(n));
    }
  }

  if (j.contains("evaluate")) {
    check_keys(j["evaluate"], "evaluate", {"min_cluster_size"});
    read_key(j["evaluate"], "min_cluster_size", c.evaluate.min_cluster_size, "evaluate");
  }

  if (j.contains("providers")) {
    const auto& p = j["providers"];
    const std::string where = "providers";
    check_keys(p, where, {"embedding", "embedding_file", "embedding_dimension", "sentiment", "sentiment_file",
                          "topics", "topics_file", "topic_top_k"});
    read_key(p, "embedding", c.embedding_provider, where);
    read_key(p, "embedding_file", c.embedding_file, where);
    read_key(p, "embedding_dimension", c.embedding_dimension, where);
    read_key(p, "sentiment", c.sentiment_provider, where);
    read_key(p, "sentiment_file", c.sentiment_file, where);
    read_key(p, "topics", c.topic_provider, where);
    read_key(p, "topics_file", c.topics_file, where);
    read_key(p, "topic_top_k", c.topic_top_k, where);
  }

  if (j.contains("drivers")) {
    check_keys(j["drivers"], "drivers", {"percentile", "network"});
    read_key(j["drivers"], "percentile", c.driver_percentile, "drivers");
    read_key(j["drivers"], "network", c.driver_network, "drivers");
  }

  if (j.contains("report")) {
    const auto& r = j["report"];
    const std::string where = "report";
    check_keys(r, where, {"mbfc", "top_k", "bilingual_min_tweets", "year_from", "year_to", "other_drivers"});
    read_key(r, "mbfc", c.mbfc_file, where);
    read_key(r, "top_k", c.report_top_k, where);
    read_key(r, "bilingual_min_tweets", c.bilingual_min_tweets, where);
    read_key(r, "year_from", c.year_from, where);
    read_key(r, "year_to", c.year_to, where);
    read_key(r, "other_drivers", c.other_drivers_file, where);
  }

  if (j.contains("synth")) c.synth = parse_synth(j["synth"]);

  if (j.contains("score")) {
    check_keys(j["score"], "score", {"ground_truth", "strategy"});
    read_key(j["score"], "ground_truth", c.ground_truth_file, "score");
    std::string s;
    read_key(j["score"], "strategy", s, "score");
    if (!s.empty()) c.score_strategy = parse_strategy(s);
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("config file " + path + " does not exist");
  return parse(read_text(path));
}

namespace {

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::exists(path)) throw ConfigError(std::string(what) + " " + path + " does not exist");
}

void require_seed(const PipelineConfig& c, Stage stage) {
  if (!c.seed) throw ConfigError("stage " + std::string(to_string(stage)) + " is stochastic and needs a seed");
}

}  // namespace

void PipelineConfig::validate(Stage stage) const {
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (out_dir.empty()) throw ConfigError("out_dir is empty");
  switch (stage) {
    case Stage::Ingest:
      if (input.empty()) throw ConfigError("no input corpus configured");
      require_file(input, "input");
      if (!(schema.max_malformed_fraction >= 0.0 && schema.max_malformed_fraction <= 1.0)) {
        throw ConfigError("schema.max_malformed_fraction must lie in [0, 1]");
      }
      if (balanced_sample) {
        if (!lang_pair) throw ConfigError("balanced_sample needs lang_pair");
        require_seed(*this, stage);
      }
      break;
    case Stage::BuildTrace:
      if (traces.empty()) throw ConfigError("no traces configured");
      for (const auto& t : traces) t.validate();
      require_file(domain_filter_file, "domain filter");
      if (embedding_provider == "file") {
        if (embedding_file.empty()) throw ConfigError("providers.embedding_file is required for the file provider");
        require_file(embedding_file, "embedding file");
      } else if (embedding_provider != "hashed-ngram") {
        throw ConfigError("unknown embedding provider '" + embedding_provider + "'");
      }
      if (embedding_dimension == 0) throw ConfigError("embedding dimension must be positive");
      break;
    case Stage::Fuse:
      if (traces.size() < 2) throw ConfigError("fusion needs at least two traces");
      break;
    case Stage::Dismantle:
    case Stage::Cluster: {
      require_seed(*this, stage);
      auto d = dismantle;
      d.validate();
      if (strategies.empty()) throw ConfigError("no dismantle strategies configured");
      if (sentiment_provider == "file") {
        if (sentiment_file.empty()) throw ConfigError("providers.sentiment_file is required for the file provider");
        require_file(sentiment_file, "sentiment file");
      } else if (sentiment_provider != "lexicon") {
        throw ConfigError("unknown sentiment provider '" + sentiment_provider + "'");
      }
      break;
    }
    case Stage::Evaluate:
    case Stage::Report:
      if (topic_provider == "file") {
        if (topics_file.empty()) throw ConfigError("providers.topics_file is required for the file provider");
        require_file(topics_file, "topics file");
      } else if (topic_provider != "hashtag") {
        throw ConfigError("unknown topic provider '" + topic_provider + "'");
      }
      if (topic_top_k == 0) throw ConfigError("providers.topic_top_k must be positive");
      if (evaluate.min_cluster_size == 0) throw ConfigError("evaluate.min_cluster_size must be positive");
      if (stage == Stage::Report) {
        require_file(mbfc_file, "MBFC table");
        require_file(other_drivers_file, "other drivers file");
        if (report_top_k == 0) throw ConfigError("report.top_k must be positive");
        if (year_from > year_to) throw ConfigError("report.year_from is after report.year_to");
        if (bilingual_min_tweets == 0) throw ConfigError("report.bilingual_min_tweets must be positive");
      }
      break;
    case Stage::Drivers:
      if (!(driver_percentile > 0.0 && driver_percentile < 1.0)) {
        throw ConfigError("drivers.percentile must lie in (0, 1)");
      }
      if (driver_network != "fused") parse_strategy(driver_network);
      break;
    case Stage::Synth:
      synth.validate();
      break;
    case Stage::Score:
      require_file(ground_truth_file, "ground truth");
      break;
  }
}

std::string PipelineConfig::stage_fingerprint(Stage stage) const {
  json j;
  json traces_j = json::array();
  for (const auto& t : traces) traces_j.push_back(to_json(t));
  switch (stage) {
    case Stage::Ingest:
      j = {{"field_map", schema.field_map},
           {"horizon", schema.horizon ? json(format_timestamp(*schema.horizon)) : json(nullptr)},
           {"max_malformed_fraction", schema.max_malformed_fraction},
           {"lang_pair", lang_pair ? json({lang_pair->first, lang_pair->second}) : json(nullptr)},
           {"balanced_sample", balanced_sample},
           {"seed", balanced_sample ? seed_json(*this) : json(nullptr)}};
      break;
    case Stage::BuildTrace:
      j = {{"lang", lang},
           {"traces", traces_j},
           {"domain_filter", domain_filter_file},
           {"embedding", {{"provider", embedding_provider}, {"file", embedding_file}, {"dimension", embedding_dimension}}}};
      break;
    case Stage::Fuse:
      j = {{"traces", traces_j}, {"keep_isolates", fusion.keep_isolates}};
      break;
    case Stage::Dismantle:
      j = {{"keep_top_weight_fraction", dismantle.keep_top_weight_fraction},
           {"time_window_seconds", dismantle.time_window.count()},
           {"require_sentiment_match", dismantle.require_sentiment_match},
           {"centrality_threshold", dismantle.centrality_threshold},
           {"iterate_pruning", dismantle.iterate_pruning},
           {"resolution", dismantle.resolution},
           {"strategies", strategies_json(strategies)},
           {"sentiment", sentiment_json(*this)},
           {"seed", seed_json(*this)}};
      break;
    case Stage::Cluster:
      j = {{"resolution", dismantle.resolution}, {"strategies", strategies_json(strategies)}, {"seed", seed_json(*this)}};
      break;
    case Stage::Evaluate:
      j = {{"min_cluster_size", evaluate.min_cluster_size},
           {"strategies", strategies_json(strategies)},
           {"topics", topics_json(*this)}};
      break;
    case Stage::Drivers:
      j = {{"percentile", driver_percentile}, {"network", driver_network}};
      break;
    case Stage::Report:
      j = {{"lang", lang},
           {"lang_pair", lang_pair ? json({lang_pair->first, lang_pair->second}) : json(nullptr)},
           {"mbfc", mbfc_file},
           {"top_k", report_top_k},
           {"bilingual_min_tweets", bilingual_min_tweets},
           {"year_from", year_from},
           {"year_to", year_to},
           {"other_drivers", other_drivers_file},
           {"domain_filter", domain_filter_file},
           {"sentiment", sentiment_json(*this)},
           {"topics", topics_json(*this)}};
      break;
    case Stage::Synth:
      j = to_json(synth);
      break;
    case Stage::Score:
      j = {{"ground_truth", ground_truth_file}, {"strategy", to_string(score_strategy)}};
      break;
  }
  j["stage"] = to_string(stage);
  return j.dump();
}

std::string hash_file(const fs::path& path) { return hex64(fnv1a64(read_text(path))); }

namespace {

// ---------------------------------------------------------------------------
// Stage plumbing

class StageRun {
 public:
  StageRun(Stage stage, const PipelineConfig& config, const RunOptions& options)
      : stage_(stage), config_(config), dir_(config.out_dir) {
    config.validate(stage);
    fs::create_directories(dir_);
    config_hash_ = hex64(fnv1a64(config.stage_fingerprint(stage)));
    const auto manifest_path = dir_ / artifact::manifest(stage);
    if (fs::exists(manifest_path)) {
      json old = parse_manifest(manifest_path);
      if (old.value("config_hash", "") != config_hash_) {
        if (!options.force) {
          throw ConfigError("artifacts of stage " + std::string(to_string(stage)) + " in " + dir_.string() +
                            " were built with a different configuration; rerun with --force to replace them");
        }
      } else if (old.contains("outputs")) {
        // Same configuration: keep outputs of earlier partial runs.
        for (const auto& [name, hash] : old["outputs"].items()) {
          if (fs::exists(dir_ / name)) outputs_[name] = hash;
        }
      }
    }
  }

  const fs::path& dir() const { return dir_; }
  fs::path path(std::string_view name) const { return dir_ / name; }

  /// Path of an upstream artifact, checked against the producing stage's manifest.
  fs::path upstream(Stage producer, std::string_view name) {
    const auto file = dir_ / name;
    const std::string producer_name(to_string(producer));
    if (!fs::exists(file)) {
      throw IoError("missing artifact " + file.string() + "; run the " + producer_name + " stage first");
    }
    const auto manifest_path = dir_ / artifact::manifest(producer);
    if (!fs::exists(manifest_path)) {
      throw IoError("missing manifest " + manifest_path.string() + "; run the " + producer_name + " stage first");
    }
    json m = parse_manifest(manifest_path);
    const std::string actual = hash_file(file);
    if (!m.contains("outputs") || !m["outputs"].contains(std::string(name))) {
      throw DataError("artifact " + file.string() + " is not recorded by the " + producer_name + " stage; rerun it");
    }
    if (m["outputs"][std::string(name)].get<std::string>() != actual) {
      throw DataError("artifact " + file.string() + " changed after the " + producer_name +
                      " stage wrote it; rerun that stage");
    }
    inputs_[std::string(name)] = actual;
    return file;
  }

  /// External input file (not produced by a stage).
  void external(const std::string& file) {
    if (!file.empty()) inputs_[file] = hash_file(file);
  }

  void produced(std::string_view name) { outputs_[std::string(name)] = hash_file(dir_ / name); }

  void finish() {
    json m = {{"stage", to_string(stage_)},
              {"config_hash", config_hash_},
              {"config", json::parse(config_.stage_fingerprint(stage_))},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"data_version", text::kBundledDataVersion}};
    write_json(dir_ / artifact::manifest(stage_), m);
  }

 private:
  static json parse_manifest(const fs::path& p) {
    try {
      return json::parse(read_text(p));
    } catch (const json::parse_error&) {
      throw DataError("manifest " + p.string() + " is not valid JSON");
    }
  }

  Stage stage_;
  const PipelineConfig& config_;
  fs::path dir_;
  std::string config_hash_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

Corpus load_corpus(StageRun& run) {
  return parse_corpus_file(run.upstream(Stage::Ingest, artifact::kCorpus).string()).corpus;
}

Corpus analysis_corpus(const Corpus& corpus, const std::string& lang) {
  if (lang == "all") return corpus;
  auto out = corpus.tweets_in(lang);
  if (out.empty()) throw DataError("the corpus has no tweets in language '" + lang + "'");
  return corpus.filter_lang(lang);
}

std::unique_ptr<EmbeddingProvider> make_embedding(const PipelineConfig& c) {
  if (c.embedding_provider == "file") return std::make_unique<FileEmbedding>(FileEmbedding::load(c.embedding_file));
  return std::make_unique<HashedNgramEmbedding>(c.embedding_dimension);
}

std::unique_ptr<SentimentProvider> make_sentiment(const PipelineConfig& c) {
  if (c.sentiment_provider == "file") return std::make_unique<FileSentiment>(FileSentiment::load(c.sentiment_file));
  return std::make_unique<LexiconSentiment>();
}

std::unique_ptr<TopicProvider> make_topics(const PipelineConfig& c) {
  if (c.topic_provider == "file") return std::make_unique<FileTopics>(FileTopics::load(c.topics_file));
  return std::make_unique<HashtagTopics>(c.topic_top_k);
}

DomainFilterList domain_filter(const PipelineConfig& c) {
  if (!c.domain_filter_file.empty()) return DomainFilterList::load(c.domain_filter_file);
  return DomainFilterList::defaults(c.lang);
}

std::vector<std::string> node_languages(const SimilarityGraph& g, const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(g.node_count());
  for (const auto& user : g.nodes()) {
    std::map<std::string, std::size_t> counts;
    for (auto i : corpus.tweets_of(user)) ++counts[corpus[i].lang];
    std::string best;
    std::size_t best_n = 0;
    for (const auto& [lang, n] : counts) {
      if (n > best_n) {
        best = lang;
        best_n = n;
      }
    }
    out.push_back(best);
  }
  return out;
}

NodeAttributes graph_attributes(const SimilarityGraph& g, const Corpus& corpus) {
  NodeAttributes attrs;
  if (!g.empty()) attrs.centrality = eigenvector_centrality(g).scores;
  attrs.language = node_languages(g, corpus);
  return attrs;
}

std::vector<Strategy> selected_strategies(const PipelineConfig& c, const RunOptions& o) {
  if (!o.only_strategy) return c.strategies;
  if (std::find(c.strategies.begin(), c.strategies.end(), *o.only_strategy) == c.strategies.end()) {
    throw ConfigError("strategy " + std::string(to_string(*o.only_strategy)) + " is not configured");
  }
  return {*o.only_strategy};
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json number_or_null(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json engagement_json(const EngagementStats& s) {
  return {{"avg_likes", s.avg_likes},
          {"avg_retweets", s.avg_retweets},
          {"avg_quotes", s.avg_quotes},
          {"avg_replies", s.avg_replies},
          {"tweets", s.tweets}};
}

std::vector<std::string> read_driver_users(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::string> users;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    if (!line.empty()) users.push_back(line);
  }
  return users;
}

// ---------------------------------------------------------------------------
// Stages

void stage_ingest(StageRun& run, const PipelineConfig& c) {
  run.external(c.input);
  auto parsed = parse_corpus_file(c.input, c.schema);
  Corpus corpus = std::move(parsed.corpus);
  if (c.balanced_sample) {
    corpus = balanced_sample(corpus, c.lang_pair->first, c.lang_pair->second, *c.seed);
  }
  std::ostringstream out;
  write_corpus(out, corpus);
  write_text(run.path(artifact::kCorpus), out.str());
  run.produced(artifact::kCorpus);

  json langs = json::object();
  for (const auto& [lang, idx] : corpus.lang_index()) langs[lang] = idx.size();
  json summary = {{"lines", parsed.lines},
                  {"skipped", parsed.skipped},
                  {"skip_reasons", parsed.skip_reasons},
                  {"tweets", corpus.size()},
                  {"users", corpus.users().size()},
                  {"languages", langs}};
  write_json(run.path(artifact::kIngestSummary), summary);
  run.produced(artifact::kIngestSummary);
  log::info("ingest: " + std::to_string(corpus.size()) + " tweets kept, " + std::to_string(parsed.skipped) +
            " malformed lines skipped");
}

void stage_build_trace(StageRun& run, const PipelineConfig& c, const RunOptions& o) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  run.external(c.domain_filter_file);
  run.external(c.embedding_file);
  EntityOptions entity;
  entity.domain_filter = domain_filter(c);
  const auto embeddings = make_embedding(c);
  bool any = false;
  for (const auto& tc : c.traces) {
    if (o.only_kind && tc.kind != *o.only_kind) continue;
    any = true;
    auto opts = entity;
    opts.sequence_mode = tc.sequence_mode;
    const auto g = build_trace(corpus, tc, opts, *embeddings, c.threads);
    write_edge_csv_file(run.path(artifact::trace(tc.kind)).string(), g);
    run.produced(artifact::trace(tc.kind));
    write_gexf_file(run.path(artifact::trace_gexf(tc.kind)).string(), g, graph_attributes(g, corpus));
    run.produced(artifact::trace_gexf(tc.kind));
    log::info("build-trace: " + std::string(to_string(tc.kind)) + " has " + std::to_string(g.node_count()) +
              " nodes and " + std::to_string(g.edge_count()) + " edges");
  }
  if (!any) throw ConfigError("trace " + std::string(to_string(*o.only_kind)) + " is not configured");
}

void stage_fuse(StageRun& run, const PipelineConfig& c) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  std::vector<SimilarityGraph> graphs;
  for (const auto& tc : c.traces) {
    auto g = read_edge_csv_file(run.upstream(Stage::BuildTrace, artifact::trace(tc.kind)).string());
    GraphMetadata meta;
    meta.trace_kinds = {std::string(to_string(tc.kind))};
    g.set_metadata(meta);
    graphs.push_back(std::move(g));
  }
  const auto fused = fuse(graphs, c.fusion);
  write_edge_csv_file(run.path(artifact::kFused).string(), fused);
  run.produced(artifact::kFused);
  write_gexf_file(run.path(artifact::kFusedGexf).string(), fused, graph_attributes(fused, corpus));
  run.produced(artifact::kFusedGexf);
  log::info("fuse: " + std::to_string(fused.node_count()) + " nodes, " + std::to_string(fused.edge_count()) + " edges");
}

json strategy_json(const StrategyReport& r) {
  return {{"strategy", to_string(r.strategy)},
          {"label", strategy_label(r.strategy)},
          {"nodes", r.nodes},
          {"edges", r.edges},
          {"clusters", r.clusters},
          {"modularity", number_or_null(r.modularity)}};
}

void stage_dismantle(StageRun& run, const PipelineConfig& c, const RunOptions& o) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  const auto fused = read_edge_csv_file(run.upstream(Stage::Fuse, artifact::kFused).string());
  run.external(c.sentiment_file);
  const auto sentiment = make_sentiment(c);
  std::string table = "strategy,label,nodes,edges,clusters,modularity\n";
  for (auto s : c.strategies) {
    const bool selected = !o.only_strategy || *o.only_strategy == s;
    StrategyReport report;
    if (selected) {
      auto cfg = c.dismantle;
      cfg.strategy = s;
      cfg.seed = *c.seed;
      const auto result = run_strategy(fused, corpus, cfg, *sentiment);
      write_edge_csv_file(run.path(artifact::dismantled(s)).string(), result.graph);
      run.produced(artifact::dismantled(s));
      write_json(run.path(artifact::strategy_report(s)), strategy_json(result.report));
      run.produced(artifact::strategy_report(s));
      report = result.report;
    } else {
      if (!fs::exists(run.path(artifact::strategy_report(s)))) continue;
      const auto j = json::parse(read_text(run.path(artifact::strategy_report(s))));
      report.strategy = s;
      report.nodes = j.at("nodes").get<std::size_t>();
      report.edges = j.at("edges").get<std::size_t>();
      report.clusters = j.at("clusters").get<std::size_t>();
      if (!j.at("modularity").is_null()) report.modularity = j.at("modularity").get<double>();
    }
    table += std::string(to_string(s)) + "," + csv_field(strategy_label(s)) + "," + std::to_string(report.nodes) +
             "," + std::to_string(report.edges) + "," + std::to_string(report.clusters) + "," +
             (report.modularity ? format_double(*report.modularity) : std::string()) + "\n";
  }
  write_text(run.path(artifact::kStrategies), table);
  run.produced(artifact::kStrategies);
}

void stage_cluster(StageRun& run, const PipelineConfig& c, const RunOptions& o) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  for (auto s : selected_strategies(c, o)) {
    const auto g = read_edge_csv_file(run.upstream(Stage::Dismantle, artifact::dismantled(s)).string());
    if (g.edge_count() == 0) {
      log::warn("cluster: strategy " + std::string(to_string(s)) + " left no edges; no partition written");
      continue;
    }
    const auto p = louvain(g, c.dismantle.resolution, *c.seed);
    write_partition_csv_file(run.path(artifact::partition(s)).string(), g, p);
    run.produced(artifact::partition(s));
    auto attrs = graph_attributes(g, corpus);
    attrs.community = p.assignment;
    write_gexf_file(run.path(artifact::clustered_gexf(s)).string(), g, attrs);
    run.produced(artifact::clustered_gexf(s));
    log::info("cluster: " + std::string(to_string(s)) + " has " + std::to_string(p.community_count()) +
              " communities, Q = " + format_double(p.modularity));
  }
}

json quality_json(const QualityReport& q) {
  json clusters = json::array();
  for (const auto& k : q.per_cluster) {
    clusters.push_back(
        {{"cluster_id", k.cluster_id}, {"entropy", k.entropy}, {"size", k.size}, {"topic_count", k.topic_count}});
  }
  json pairs = json::array();
  for (Eigen::Index i = 0; i < q.jsd_pairs.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < q.jsd_pairs.cols(); ++j) row.push_back(q.jsd_pairs(i, j));
    pairs.push_back(row);
  }
  return {{"strategy", q.strategy},
          {"h_weighted", q.h_weighted},
          {"mean_jsd", q.mean_jsd},
          {"degenerate", q.degenerate},
          {"excluded_clusters", q.excluded_clusters},
          {"topic_universe", q.topic_universe},
          {"clusters", clusters},
          {"jsd_pairs", pairs}};
}

void stage_evaluate(StageRun& run, const PipelineConfig& c, const RunOptions& o) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  run.external(c.topics_file);
  const auto topics = make_topics(c);
  std::string scatter = "strategy,h_weighted,mean_jsd\n";
  for (auto s : c.strategies) {
    const bool selected = !o.only_strategy || *o.only_strategy == s;
    if (selected) {
      const auto g = read_edge_csv_file(run.upstream(Stage::Dismantle, artifact::dismantled(s)).string());
      if (g.edge_count() == 0) {
        log::warn("evaluate: strategy " + std::string(to_string(s)) + " has no clusters to score");
        continue;
      }
      const auto p = read_partition_csv_file(run.upstream(Stage::Cluster, artifact::partition(s)).string(), g,
                                             c.dismantle.resolution);
      const auto assignments = assign_topics(corpus, g.nodes(), *topics);
      auto opts = c.evaluate;
      opts.strategy = std::string(to_string(s));
      const auto q = evaluate_network(g, p, assignments, opts);
      write_json(run.path(artifact::quality(s)), quality_json(q));
      run.produced(artifact::quality(s));
    }
    if (!fs::exists(run.path(artifact::quality(s)))) continue;
    const auto j = json::parse(read_text(run.path(artifact::quality(s))));
    scatter += std::string(to_string(s)) + "," + format_double(j.at("h_weighted").get<double>()) + "," +
               format_double(j.at("mean_jsd").get<double>()) + "\n";
  }
  write_text(run.path(artifact::kScatter), scatter);
  run.produced(artifact::kScatter);
}

void stage_drivers(StageRun& run, const PipelineConfig& c) {
  const Corpus corpus = analysis_corpus(load_corpus(run), c.lang);
  const bool fused = c.driver_network == "fused";
  const auto g = read_edge_csv_file(
      fused ? run.upstream(Stage::Fuse, artifact::kFused).string()
            : run.upstream(Stage::Dismantle, artifact::dismantled(parse_strategy(c.driver_network))).string());
  const auto drivers = select_drivers(g, c.driver_percentile, c.driver_network);

  std::string txt;
  json list = json::array();
  for (std::size_t i = 0; i < drivers.users.size(); ++i) {
    txt += drivers.users[i] + "\n";
    list.push_back({{"user_id", drivers.users[i]}, {"centrality", drivers.scores[i]}});
  }
  write_text(run.path(artifact::kDrivers), txt);
  run.produced(artifact::kDrivers);
  write_json(run.path(artifact::kDriversJson),
             {{"network", drivers.network}, {"percentile", drivers.percentile}, {"nodes", g.node_count()},
              {"drivers", list}});
  run.produced(artifact::kDriversJson);

  auto attrs = graph_attributes(g, corpus);
  attrs.is_driver.assign(g.node_count(), false);
  for (const auto& u : drivers.users) attrs.is_driver[*g.find(u)] = true;
  write_gexf_file(run.path(artifact::kDriversGexf).string(), g, attrs);
  run.produced(artifact::kDriversGexf);
  log::info("drivers: " + std::to_string(drivers.users.size()) + " of " + std::to_string(g.node_count()) + " nodes");
}

json entity_rows_json(const std::vector<EntityRow>& rows, bool with_mbfc) {
  json out = json::array();
  for (const auto& r : rows) {
    json row = {{"entity", r.entity}, {"count", r.count}};
    if (with_mbfc) {
      row["factuality"] = to_string(r.factuality);
      row["leaning"] = to_string(r.leaning);
    }
    out.push_back(row);
  }
  return out;
}

void stage_report(StageRun& run, const PipelineConfig& c) {
  const Corpus full = load_corpus(run);
  const Corpus corpus = analysis_corpus(full, c.lang);
  const auto drivers = read_driver_users(run.upstream(Stage::Drivers, artifact::kDrivers));
  run.external(c.mbfc_file);
  run.external(c.other_drivers_file);
  run.external(c.domain_filter_file);
  run.external(c.sentiment_file);
  run.external(c.topics_file);
  const auto filter = domain_filter(c);
  std::optional<MbfcTable> mbfc;
  if (!c.mbfc_file.empty()) mbfc = MbfcTable::load(c.mbfc_file);
  const auto sentiment = make_sentiment(c);
  const auto topics = make_topics(c);

  json report;
  report["drivers"] = drivers.size();
  report["language"] = c.lang;
  report["top_hashtags"] =
      entity_rows_json(top_entities(corpus, drivers, EntityKind::Hashtags, c.report_top_k), false);
  report["top_domains"] = entity_rows_json(
      top_entities(corpus, drivers, EntityKind::Domains, c.report_top_k, filter, mbfc ? &*mbfc : nullptr), true);
  const auto everyone = corpus.users();
  report["engagement"] = {{"drivers", drivers.empty() ? json(nullptr) : engagement_json(engagement_stats(corpus, drivers))},
                          {"all_users", engagement_json(engagement_stats(corpus, everyone))}};

  if (c.lang_pair) {
    const auto bilingual =
        find_bilingual_users(full, c.lang_pair->first, c.lang_pair->second, c.bilingual_min_tweets);
    std::vector<std::string> sorted_drivers = drivers;
    std::sort(sorted_drivers.begin(), sorted_drivers.end());
    std::vector<std::string> bilingual_drivers;
    std::set_intersection(sorted_drivers.begin(), sorted_drivers.end(), bilingual.begin(), bilingual.end(),
                          std::back_inserter(bilingual_drivers));
    json bi = {{"lang_pair", {c.lang_pair->first, c.lang_pair->second}},
               {"min_tweets_each", c.bilingual_min_tweets},
               {"users", bilingual.size()},
               {"bilingual_drivers", bilingual_drivers}};
    if (!bilingual.empty()) {
      bi["top_hashtags"] = entity_rows_json(top_entities(full, bilingual, EntityKind::Hashtags, c.report_top_k), false);
      bi["top_domains"] = entity_rows_json(
          top_entities(full, bilingual, EntityKind::Domains, c.report_top_k, filter, mbfc ? &*mbfc : nullptr), true);
    }
    if (!c.other_drivers_file.empty()) {
      const auto other = read_driver_users(c.other_drivers_file);
      const auto overlap = driver_language_overlap(drivers, other, bilingual);
      bi["overlap"] = {{"drivers_a", overlap.drivers_a},
                       {"drivers_b", overlap.drivers_b},
                       {"bilingual_a", overlap.bilingual_a},
                       {"bilingual_b", overlap.bilingual_b},
                       {"shared", overlap.shared}};
    }
    report["bilingual"] = bi;
  }
  write_json(run.path(artifact::kReport), report);
  run.produced(artifact::kReport);

  const auto timeline = sentiment_timeline(corpus, drivers, *sentiment, c.year_from, c.year_to);
  std::string st = "month,positive,negative,neutral\n";
  for (const auto& [month, n] : timeline.months) {
    st += month + "," + std::to_string(n.positive) + "," + std::to_string(n.negative) + "," + std::to_string(n.neutral) +
          "\n";
  }
  write_text(run.path(artifact::kSentimentTimeline), st);
  run.produced(artifact::kSentimentTimeline);

  std::string tt = "month,topic,users\n";
  for (const auto& [month, counts] : topic_timeline(corpus, drivers, *topics, c.year_from, c.year_to)) {
    for (const auto& [topic, n] : counts) tt += month + "," + csv_field(topic) + "," + std::to_string(n) + "\n";
  }
  write_text(run.path(artifact::kTopicTimeline), tt);
  run.produced(artifact::kTopicTimeline);
}

void stage_synth(StageRun& run, const PipelineConfig& c) {
  const auto out = generate(c.synth);
  std::ostringstream corpus;
  write_corpus(corpus, out.corpus);
  write_text(run.path(artifact::kSynthCorpus), corpus.str());
  run.produced(artifact::kSynthCorpus);
  std::ostringstream truth;
  write_ground_truth(truth, out.truth);
  write_text(run.path(artifact::kGroundTruth), truth.str());
  run.produced(artifact::kGroundTruth);
  log::info("synth: " + std::to_string(out.corpus.size()) + " tweets by " + std::to_string(out.truth.group.size()) +
            " users");
}

json scores_json(const RecoveryScores& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1},
          {"nmi", s.nmi},
          {"vacuous", s.vacuous},
          {"truth_pairs", s.truth_pairs},
          {"detected_pairs", s.detected_pairs},
          {"true_positive_pairs", s.true_positive_pairs},
          {"detected_users", s.detected_users}};
}

void stage_score(StageRun& run, const PipelineConfig& c) {
  GroundTruth truth;
  if (c.ground_truth_file.empty()) {
    truth = read_ground_truth_file(run.upstream(Stage::Synth, artifact::kGroundTruth).string());
  } else {
    run.external(c.ground_truth_file);
    truth = read_ground_truth_file(c.ground_truth_file);
  }
  const auto s = c.score_strategy;
  const auto g = read_edge_csv_file(run.upstream(Stage::Dismantle, artifact::dismantled(s)).string());
  const auto p = read_partition_csv_file(run.upstream(Stage::Cluster, artifact::partition(s)).string(), g,
                                         c.dismantle.resolution);
  DriverSet drivers;
  drivers.users = read_driver_users(run.upstream(Stage::Drivers, artifact::kDrivers));
  std::size_t planted_drivers = 0;
  for (const auto& u : drivers.users) {
    auto it = truth.group.find(u);
    if (it == truth.group.end()) throw DataError("driver " + u + " is not in the ground truth");
    if (it->second >= 0) ++planted_drivers;
  }
  json j = {{"strategy", to_string(s)},
            {"partition", scores_json(score_recovery(truth, g, p))},
            {"drivers", scores_json(score_recovery(truth, drivers))},
            {"planted_drivers", planted_drivers},
            {"driver_count", drivers.users.size()}};
  write_json(run.path(artifact::kScore), j);
  run.produced(artifact::kScore);
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config, const RunOptions& options) {
  StageRun run(stage, config, options);
  switch (stage) {
    case Stage::Ingest: stage_ingest(run, config); break;
    case Stage::BuildTrace: stage_build_trace(run, config, options); break;
    case Stage::Fuse: stage_fuse(run, config); break;
    case Stage::Dismantle: stage_dismantle(run, config, options); break;
    case Stage::Cluster: stage_cluster(run, config, options); break;
    case Stage::Evaluate: stage_evaluate(run, config, options); break;
    case Stage::Drivers: stage_drivers(run, config); break;
    case Stage::Report: stage_report(run, config); break;
    case Stage::Synth: stage_synth(run, config); break;
    case Stage::Score: stage_score(run, config); break;
  }
  run.finish();
}

}  // namespace coordnet
