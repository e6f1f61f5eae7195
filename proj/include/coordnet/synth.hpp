#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coordnet/analysis.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/ingest.hpp"

namespace coordnet {

enum class Coordination { Domains, Hashtags, NearDuplicateText };

std::string_view to_string(Coordination c);
Coordination parse_coordination(std::string_view name);

struct GroupSpec {
  std::size_t size = 10;
  std::vector<Coordination> kinds{Coordination::Domains, Coordination::Hashtags};
  /// Coordinated posts of one burst fall within this window.
  std::chrono::seconds burst_window{600};
  /// Dedicated entities per enabled kind, taken from the least popular end
  /// of the global pools.
  std::size_t entity_pool_size = 6;
  std::size_t bursts = 20;
  double burst_participation = 0.95;
  std::size_t background_tweets = 2;
};

struct CampaignSpec {
  std::size_t n_organic = 500;
  std::vector<GroupSpec> groups;
  std::vector<std::string> langs{"en"};
  Timestamp start{};
  Timestamp end{};
  std::uint64_t seed = 7;

  std::size_t organic_min_tweets = 4;
  std::size_t organic_max_tweets = 16;
  std::size_t domain_pool_size = 600;
  std::size_t hashtag_pool_size = 400;
  double zipf_exponent = 1.0;
  double url_probability = 0.6;
  double hashtag_probability = 0.5;
  /// Share of organic users who also post in a second language.
  double bilingual_fraction = 0.05;

  /// 500 organic users and three groups of 10 coordinating on domains and
  /// hashtags in 10-minute bursts, over calendar year 2024.
  static CampaignSpec default_spec();
  void validate() const;
};

/// user_id -> planted group id; -1 marks organic users.
struct GroundTruth {
  std::map<std::string, int> group;

  std::vector<std::string> members(int g) const;
  int group_count() const;
};

struct SynthOutput {
  Corpus corpus;
  GroundTruth truth;
};

/// Deterministic for a given spec (including seed).
SynthOutput generate(const CampaignSpec& spec);

/// `user_id<TAB>group` lines (group "organic" or an integer), sorted by user.
void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth_file(const std::string& path);

struct RecoveryScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double nmi = 0.0;
  bool vacuous = false;  // no detected pair, or no planted pair
  std::size_t truth_pairs = 0;
  std::size_t detected_pairs = 0;
  std::size_t true_positive_pairs = 0;
  std::size_t detected_users = 0;
};

/// Pairwise precision/recall/F1 over same-group user pairs plus NMI
/// (arithmetic-mean normalization) between planted labels (organic users
/// share one label) and detected labels on the detected users. Detected
/// users missing from the ground truth are a DataError.
RecoveryScores score_recovery(const GroundTruth& truth, const std::map<std::string, int>& detected);
RecoveryScores score_recovery(const GroundTruth& truth, const SimilarityGraph& graph, const Partition& partition);
/// All drivers count as one detected group.
RecoveryScores score_recovery(const GroundTruth& truth, const DriverSet& drivers);

}  // namespace coordnet
