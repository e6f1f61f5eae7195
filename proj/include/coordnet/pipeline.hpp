#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coordnet/dismantle.hpp"
#include "coordnet/evaluate.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/ingest.hpp"
#include "coordnet/synth.hpp"
#include "coordnet/traces.hpp"

namespace coordnet {

enum class Stage { Ingest, BuildTrace, Fuse, Dismantle, Cluster, Evaluate, Drivers, Report, Synth, Score };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);
/// Stages in the order `run` executes them (synth and score excluded).
inline constexpr Stage kPipelineStages[] = {Stage::Ingest,   Stage::BuildTrace, Stage::Fuse,
                                            Stage::Dismantle, Stage::Cluster,   Stage::Evaluate,
                                            Stage::Drivers,  Stage::Report};

/// Everything the staged pipeline needs. Loaded from a JSON document whose
/// layout is described in the README; absent keys keep these defaults.
struct PipelineConfig {
  std::string input;
  SchemaConfig schema;
  /// Language the networks are built for; "all" keeps every language.
  std::string lang = "en";
  std::optional<std::pair<std::string, std::string>> lang_pair;
  bool balanced_sample = false;

  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  std::vector<TraceConfig> traces;
  std::string domain_filter_file;
  FuseOptions fusion;
  DismantleConfig dismantle;
  std::vector<Strategy> strategies;
  EvaluateOptions evaluate;

  std::string embedding_provider = "hashed-ngram";
  std::string embedding_file;
  std::size_t embedding_dimension = 256;
  std::string sentiment_provider = "lexicon";
  std::string sentiment_file;
  std::string topic_provider = "hashtag";
  std::string topics_file;
  std::size_t topic_top_k = 50;

  double driver_percentile = 0.05;
  /// "fused" or a strategy name whose dismantled graph is used.
  std::string driver_network = "weight_only";

  std::string mbfc_file;
  std::size_t report_top_k = 10;
  std::size_t bilingual_min_tweets = 1;
  int year_from = 2024;
  int year_to = 2024;
  /// drivers.txt of a run on the other language, for the overlap table.
  std::string other_drivers_file;

  CampaignSpec synth = CampaignSpec::default_spec();
  std::string ground_truth_file;
  Strategy score_strategy = Strategy::WeightOnly;

  static PipelineConfig parse(std::string_view json_text);
  static PipelineConfig load(const std::string& path);
  static PipelineConfig defaults();

  /// Checks the settings and referenced files one stage depends on.
  void validate(Stage stage) const;
  /// Canonical JSON of the settings that determine `stage`'s outputs.
  std::string stage_fingerprint(Stage stage) const;
};

struct RunOptions {
  bool force = false;
  std::optional<TraceKind> only_kind;
  std::optional<Strategy> only_strategy;
};

/// Runs one stage, reading upstream artifacts from and writing its own to
/// `config.out_dir`, followed by `<stage>.manifest.json`.
void run_stage(Stage stage, const PipelineConfig& config, const RunOptions& options = {});

/// Artifact file names under the output directory.
namespace artifact {
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kIngestSummary = "ingest.json";
inline constexpr std::string_view kFused = "fused.csv";
inline constexpr std::string_view kFusedGexf = "fused.gexf";
inline constexpr std::string_view kStrategies = "strategies.csv";
inline constexpr std::string_view kScatter = "quality_scatter.csv";
inline constexpr std::string_view kDrivers = "drivers.txt";
inline constexpr std::string_view kDriversJson = "drivers.json";
inline constexpr std::string_view kDriversGexf = "drivers.gexf";
inline constexpr std::string_view kReport = "report.json";
inline constexpr std::string_view kSentimentTimeline = "sentiment_timeline.csv";
inline constexpr std::string_view kTopicTimeline = "topic_timeline.csv";
inline constexpr std::string_view kSynthCorpus = "synthetic.jsonl";
inline constexpr std::string_view kGroundTruth = "ground_truth.tsv";
inline constexpr std::string_view kScore = "score.json";

std::string trace(TraceKind kind);
std::string trace_gexf(TraceKind kind);
std::string dismantled(Strategy s);
std::string strategy_report(Strategy s);
std::string partition(Strategy s);
std::string clustered_gexf(Strategy s);
std::string quality(Strategy s);
std::string manifest(Stage stage);
}  // namespace artifact

/// Hex FNV-1a of a file's bytes.
std::string hash_file(const std::filesystem::path& path);

}  // namespace coordnet
