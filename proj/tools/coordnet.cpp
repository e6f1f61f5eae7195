#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "coordnet/error.hpp"
#include "coordnet/log.hpp"
#include "coordnet/pipeline.hpp"

namespace {

using nlohmann::json;

struct Flags {
  std::string config;
  std::string out_dir;
  std::string input;
  std::string lang;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string kind;
  std::string strategy;
  bool force = false;
  bool verbose = false;
  bool quiet = false;
};

json load_document(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw coordnet::ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw coordnet::ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

coordnet::PipelineConfig effective_config(const Flags& f) {
  json doc = load_document(f.config);
  if (!f.out_dir.empty()) doc["out_dir"] = f.out_dir;
  if (!f.input.empty()) doc["input"] = f.input;
  if (!f.lang.empty()) doc["lang"] = f.lang;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.threads) doc["threads"] = *f.threads;
  return coordnet::PipelineConfig::parse(doc.dump());
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config, "JSON config file");
  sub->add_option("-o,--out-dir", f.out_dir, "artifact directory (overrides out_dir)");
  sub->add_option("--seed", f.seed, "seed for stochastic steps (overrides seed)");
  sub->add_option("--threads", f.threads, "worker cap (overrides threads)")->check(CLI::PositiveNumber);
  sub->add_option("--lang", f.lang, "analysis language, or 'all' (overrides lang)");
  sub->add_flag("--force", f.force, "replace artifacts built with a different configuration");
  sub->add_flag("-v,--verbose", f.verbose, "progress messages");
  sub->add_flag("-q,--quiet", f.quiet, "suppress warnings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated-behavior detection over social-media trace networks"};
  app.require_subcommand(1);
  Flags flags;

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"ingest", "parse and normalize the input corpus"},
      {"build-trace", "build trace similarity networks"},
      {"fuse", "fuse the trace networks"},
      {"dismantle", "apply the dismantling strategies"},
      {"cluster", "Louvain partitions of the dismantled networks"},
      {"evaluate", "entropy/divergence quality of each partition"},
      {"drivers", "select high-centrality drivers"},
      {"report", "driver and bilingual-user reports"},
      {"synth", "generate a synthetic corpus with planted groups"},
      {"score", "score recovery against the synthetic ground truth"},
      {"run", "ingest through report in one go"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, flags);
    if (std::string_view(e.name) == "ingest" || std::string_view(e.name) == "run") {
      sub->add_option("-i,--input", flags.input, "input JSONL corpus (overrides input)");
    }
    if (std::string_view(e.name) == "build-trace") {
      sub->add_option("--kind", flags.kind, "only this trace (co_domain, co_hashtag, text_similarity)");
    }
    if (std::string_view(e.name) == "dismantle" || std::string_view(e.name) == "cluster" ||
        std::string_view(e.name) == "evaluate") {
      sub->add_option("--strategy", flags.strategy, "only this strategy");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  coordnet::log::set_level(flags.quiet     ? coordnet::log::Level::Quiet
                           : flags.verbose ? coordnet::log::Level::Info
                                           : coordnet::log::Level::Warn);
  try {
    const auto config = effective_config(flags);
    coordnet::RunOptions options;
    options.force = flags.force;
    if (!flags.kind.empty()) options.only_kind = coordnet::parse_trace_kind(flags.kind);
    if (!flags.strategy.empty()) options.only_strategy = coordnet::parse_strategy(flags.strategy);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "run") {
      for (auto stage : coordnet::kPipelineStages) coordnet::run_stage(stage, config, options);
    } else {
      coordnet::run_stage(coordnet::parse_stage(name), config, options);
    }
  } catch (const coordnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
