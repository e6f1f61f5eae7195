#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "coordnet/domain.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/ingest.hpp"
#include "coordnet/providers.hpp"

namespace coordnet {

enum class TraceKind { CoDomain, CoHashtag, TextSimilarity };

std::string_view to_string(TraceKind kind);
TraceKind parse_trace_kind(std::string_view name);

struct TraceConfig {
  TraceKind kind = TraceKind::CoDomain;
  std::size_t min_unique_entities = 3;
  std::size_t min_df = 3;
  double sim_threshold = 0.6;
  std::string embedding_provider = "hashed-ngram";
  bool keep_isolates = false;
  /// Co-hashtag only: use each tweet's whole ordered hashtag list as one entity.
  bool sequence_mode = false;
  /// Text similarity only: tweets with fewer cleaned tokens are dropped.
  std::size_t min_tokens = 4;

  /// co_domain (3, 3, 0.6); co_hashtag (6, 5, 0.7); text_similarity 0.90,
  /// or 0.95 for Spanish.
  static TraceConfig defaults(TraceKind kind, std::string_view lang = "en");
  void validate() const;
};

/// Row-normalized TF-IDF weights of users (rows, sorted) over entities
/// (columns, sorted).
struct UserEntityMatrix {
  std::vector<std::string> users;
  std::vector<std::string> entities;
  Eigen::SparseMatrix<double, Eigen::RowMajor> weights;
  Eigen::VectorXd row_norms;  // L2 norm of each TF-IDF row before normalization
};

struct EntityOptions {
  DomainFilterList domain_filter;
  bool sequence_mode = false;
};

/// Counts entities per user, drops users with fewer than `min_unique_entities`
/// distinct entities, then entities used by fewer than `min_df` of the
/// remaining users, then users left empty. Weights are
///   count * (ln((1 + N) / (1 + df)) + 1)
/// with N the number of users kept, and each row is L2-normalized.
/// Throws DataError when no user survives.
UserEntityMatrix build_user_entity_matrix(const Corpus& corpus, TraceKind kind,
                                          std::size_t min_unique_entities, std::size_t min_df,
                                          const EntityOptions& options = {});

struct ProjectionOptions {
  bool keep_isolates = false;
  unsigned threads = 1;
};

/// Users joined when the dot product of their rows is at least `threshold`;
/// the edge weight is that cosine.
SimilarityGraph project_similarity(const UserEntityMatrix& matrix, double threshold,
                                   const ProjectionOptions& options = {});

struct TextPreprocessConfig {
  std::size_t min_tokens = 4;
};

/// Cleaned text of one tweet (lowercased tokens without URLs, mentions,
/// punctuation, emoji or stopwords, space-joined); empty when the tweet is
/// too short to keep.
std::string clean_tweet_text(const TweetRecord& tweet, const TextPreprocessConfig& config);

/// Users joined when any pair of their tweets has embedding cosine at least
/// `threshold`; the edge weight is the largest such cosine.
SimilarityGraph build_text_similarity_graph(const Corpus& corpus, const EmbeddingProvider& provider,
                                            double threshold, const TextPreprocessConfig& preprocess = {},
                                            const ProjectionOptions& options = {});

/// Builds one trace network per `config`.
SimilarityGraph build_trace(const Corpus& corpus, const TraceConfig& config,
                            const EntityOptions& entity_options, const EmbeddingProvider& embeddings,
                            unsigned threads = 1);

}  // namespace coordnet
