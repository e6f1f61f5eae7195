#include "coordnet/traces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "coordnet/error.hpp"
#include "coordnet/graph_io.hpp"
#include "coordnet/text.hpp"
#include "parallel.hpp"

namespace coordnet {

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::CoDomain: return "co_domain";
    case TraceKind::CoHashtag: return "co_hashtag";
    case TraceKind::TextSimilarity: return "text_similarity";
  }
  return "co_domain";
}

TraceKind parse_trace_kind(std::string_view name) {
  if (name == "co_domain") return TraceKind::CoDomain;
  if (name == "co_hashtag") return TraceKind::CoHashtag;
  if (name == "text_similarity") return TraceKind::TextSimilarity;
  throw ConfigError("unknown trace kind '" + std::string(name) +
                    "' (expected co_domain, co_hashtag or text_similarity)");
}

TraceConfig TraceConfig::defaults(TraceKind kind, std::string_view lang) {
  TraceConfig c;
  c.kind = kind;
  switch (kind) {
    case TraceKind::CoDomain:
      c.min_unique_entities = 3;
      c.min_df = 3;
      c.sim_threshold = 0.6;
      break;
    case TraceKind::CoHashtag:
      c.min_unique_entities = 6;
      c.min_df = 5;
      c.sim_threshold = 0.7;
      break;
    case TraceKind::TextSimilarity:
      c.min_unique_entities = 1;
      c.min_df = 1;
      c.sim_threshold = lang == "es" ? 0.95 : 0.90;
      break;
  }
  return c;
}

void TraceConfig::validate() const {
  if (!(sim_threshold >= 0.0 && sim_threshold <= 1.0)) throw ConfigError("sim_threshold must lie in [0, 1]");
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  if (min_unique_entities < 1) throw ConfigError("min_unique_entities must be at least 1");
}

namespace {

std::vector<std::string> entities_of(const TweetRecord& tweet, TraceKind kind, const EntityOptions& options) {
  if (kind == TraceKind::CoDomain) return filter_domains(tweet.urls, options.domain_filter).domains;
  if (options.sequence_mode) {
    if (tweet.hashtags.empty()) return {};
    return {text::join(tweet.hashtags, " ")};
  }
  return tweet.hashtags;
}

}  // namespace

UserEntityMatrix build_user_entity_matrix(const Corpus& corpus, TraceKind kind,
                                          std::size_t min_unique_entities, std::size_t min_df,
                                          const EntityOptions& options) {
  if (kind == TraceKind::TextSimilarity) {
    throw ConfigError("text_similarity has no user-entity matrix");
  }
  if (corpus.empty()) throw DataError("cannot build a user-entity matrix from an empty corpus");

  // Per-user entity counts, users in sorted order.
  std::vector<std::pair<std::string, std::map<std::string, double>>> rows;
  for (const auto& [user, indices] : corpus.user_index()) {
    std::map<std::string, double> counts;
    for (auto i : indices) {
      for (auto& entity : entities_of(corpus[i], kind, options)) counts[std::move(entity)] += 1.0;
    }
    if (counts.size() >= min_unique_entities) rows.emplace_back(user, std::move(counts));
  }

  std::map<std::string, std::size_t> df;
  for (const auto& [_, counts] : rows) {
    for (const auto& [entity, __] : counts) ++df[entity];
  }
  std::map<std::string, std::size_t> column;  // retained entity -> column index
  UserEntityMatrix m;
  for (const auto& [entity, count] : df) {
    if (count >= min_df) {
      column.emplace(entity, m.entities.size());
      m.entities.push_back(entity);
    }
  }
  std::erase_if(rows, [&](const auto& row) {
    return std::none_of(row.second.begin(), row.second.end(),
                        [&](const auto& kv) { return column.contains(kv.first); });
  });
  if (rows.empty()) {
    throw DataError(std::string(to_string(kind)) + ": no user passes min_unique_entities=" +
                    std::to_string(min_unique_entities) + " and min_df=" + std::to_string(min_df));
  }

  const double n = static_cast<double>(rows.size());
  std::vector<double> idf(m.entities.size());
  for (std::size_t j = 0; j < m.entities.size(); ++j) {
    idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[m.entities[j]]))) + 1.0;
  }

  std::vector<Eigen::Triplet<double>> triplets;
  m.row_norms.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.users.push_back(rows[r].first);
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& [entity, count] : rows[r].second) {
      if (auto it = column.find(entity); it != column.end()) entries.emplace_back(it->second, count * idf[it->second]);
    }
    double sq = 0.0;
    for (const auto& [_, w] : entries) sq += w * w;
    const double norm = std::sqrt(sq);
    m.row_norms[static_cast<Eigen::Index>(r)] = norm;
    for (const auto& [j, w] : entries) triplets.emplace_back(r, j, w / norm);
  }
  m.weights.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.entities.size()));
  m.weights.setFromTriplets(triplets.begin(), triplets.end());
  m.weights.makeCompressed();
  return m;
}

SimilarityGraph project_similarity(const UserEntityMatrix& matrix, double threshold,
                                   const ProjectionOptions& options) {
  using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  const RowMatrix& w = matrix.weights;
  const Eigen::SparseMatrix<double, Eigen::ColMajor> by_entity(w);  // inverted index
  const std::size_t n = static_cast<std::size_t>(w.rows());

  constexpr std::size_t kChunks = 64;
  std::vector<std::vector<Edge>> chunk_edges(kChunks);
  detail::parallel_chunks(n, kChunks, options.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<double> acc(n, 0.0);
    std::vector<Eigen::Index> touched;
    auto& out = chunk_edges[chunk];
    for (std::size_t u = begin; u < end; ++u) {
      touched.clear();
      // Entities are visited in ascending order, so each dot product is
      // summed in the same order as a sorted sparse merge of the two rows.
      for (RowMatrix::InnerIterator eu(w, static_cast<Eigen::Index>(u)); eu; ++eu) {
        for (decltype(by_entity)::InnerIterator ev(by_entity, eu.col()); ev; ++ev) {
          if (ev.row() <= static_cast<Eigen::Index>(u)) continue;
          if (acc[static_cast<std::size_t>(ev.row())] == 0.0) touched.push_back(ev.row());
          acc[static_cast<std::size_t>(ev.row())] += eu.value() * ev.value();
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto v : touched) {
        const double cosine = acc[static_cast<std::size_t>(v)];
        if (cosine >= threshold) out.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), cosine, 1});
        acc[static_cast<std::size_t>(v)] = 0.0;
      }
    }
  });

  std::vector<UserEdge> edges;
  for (const auto& chunk : chunk_edges) {
    for (const auto& e : chunk) edges.push_back({matrix.users[e.u], matrix.users[e.v], e.weight, 1});
  }
  GraphMetadata meta;
  meta.params["sim_threshold"] = format_double(threshold);
  return SimilarityGraph::from_edges(options.keep_isolates ? matrix.users : std::vector<std::string>{}, edges,
                                     std::move(meta));
}

std::string clean_tweet_text(const TweetRecord& tweet, const TextPreprocessConfig& config) {
  return text::join(text::clean_tokens(tweet.text, tweet.lang, config.min_tokens), " ");
}

SimilarityGraph build_text_similarity_graph(const Corpus& corpus, const EmbeddingProvider& provider,
                                            double threshold, const TextPreprocessConfig& preprocess,
                                            const ProjectionOptions& options) {
  // Tweets that survive cleaning, grouped by user (users in sorted order).
  std::vector<std::string> users;
  std::vector<std::uint32_t> owner;
  std::vector<std::string> cleaned;
  std::vector<std::string_view> ids;
  for (const auto& [user, indices] : corpus.user_index()) {
    bool kept_any = false;
    for (auto i : indices) {
      std::string clean = clean_tweet_text(corpus[i], preprocess);
      if (clean.empty()) continue;
      if (!kept_any) {
        users.push_back(user);
        kept_any = true;
      }
      owner.push_back(static_cast<std::uint32_t>(users.size() - 1));
      cleaned.push_back(std::move(clean));
      ids.push_back(corpus[i].tweet_id);
    }
  }
  std::vector<EmbeddingInput> inputs;
  inputs.reserve(cleaned.size());
  for (std::size_t i = 0; i < cleaned.size(); ++i) inputs.push_back({ids[i], cleaned[i]});
  const Eigen::MatrixXd emb = provider.embed(inputs);
  if (emb.rows() != static_cast<Eigen::Index>(inputs.size()) ||
      (emb.rows() > 0 && emb.cols() != static_cast<Eigen::Index>(provider.dimension()))) {
    throw ProviderError("embedding provider returned vectors of the wrong shape");
  }

  const std::size_t t = inputs.size();
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (t + kBlock - 1) / kBlock;
  using PairMax = std::map<std::pair<std::uint32_t, std::uint32_t>, double>;
  std::vector<PairMax> per_block(blocks);
  detail::parallel_chunks(blocks, blocks, options.threads, [&](std::size_t b, std::size_t, std::size_t) {
    const auto begin = static_cast<Eigen::Index>(b * kBlock);
    const auto rows = std::min<Eigen::Index>(kBlock, static_cast<Eigen::Index>(t) - begin);
    const auto rest = static_cast<Eigen::Index>(t) - begin;
    // Upper-triangular band: this block's tweets against themselves and all later tweets.
    const Eigen::MatrixXd sims = emb.middleRows(begin, rows) * emb.bottomRows(rest).transpose();
    auto& best = per_block[b];
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto ui = owner[static_cast<std::size_t>(begin + i)];
      for (Eigen::Index j = i + 1; j < rest; ++j) {
        const double s = sims(i, j);
        if (s < threshold) continue;
        const auto uj = owner[static_cast<std::size_t>(begin + j)];
        if (ui == uj) continue;
        auto key = std::minmax(ui, uj);
        auto [it, inserted] = best.emplace(key, s);
        if (!inserted) it->second = std::max(it->second, s);
      }
    }
  });
  PairMax merged;
  for (const auto& block : per_block) {
    for (const auto& [key, s] : block) {
      auto [it, inserted] = merged.emplace(key, s);
      if (!inserted) it->second = std::max(it->second, s);
    }
  }

  std::vector<UserEdge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, s] : merged) edges.push_back({users[key.first], users[key.second], s, 1});
  GraphMetadata meta;
  meta.trace_kinds = {"text_similarity"};
  meta.params["sim_threshold"] = format_double(threshold);
  meta.params["embedding_provider"] = provider.name();
  return SimilarityGraph::from_edges(options.keep_isolates ? users : std::vector<std::string>{}, edges,
                                     std::move(meta));
}

SimilarityGraph build_trace(const Corpus& corpus, const TraceConfig& config, const EntityOptions& entity_options,
                            const EmbeddingProvider& embeddings, unsigned threads) {
  config.validate();
  const ProjectionOptions projection{config.keep_isolates, threads};
  if (config.kind == TraceKind::TextSimilarity) {
    return build_text_similarity_graph(corpus, embeddings, config.sim_threshold,
                                       TextPreprocessConfig{config.min_tokens}, projection);
  }
  EntityOptions opts = entity_options;
  opts.sequence_mode = config.sequence_mode;
  const auto matrix = build_user_entity_matrix(corpus, config.kind, config.min_unique_entities, config.min_df, opts);
  SimilarityGraph g = project_similarity(matrix, config.sim_threshold, projection);
  GraphMetadata meta = g.metadata();
  meta.trace_kinds = {std::string(to_string(config.kind))};
  meta.params["min_unique_entities"] = std::to_string(config.min_unique_entities);
  meta.params["min_df"] = std::to_string(config.min_df);
  g.set_metadata(std::move(meta));
  return g;
}

}  // namespace coordnet
