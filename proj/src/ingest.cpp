#include "coordnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "coordnet/error.hpp"
#include "coordnet/rng.hpp"
#include "coordnet/text.hpp"

namespace coordnet {

using nlohmann::json;

Corpus::Corpus(std::vector<TweetRecord> records) : records_(std::move(records)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.tweet_id.empty()) throw DataError("record " + std::to_string(i) + " has an empty tweet_id");
    if (!seen.insert(r.tweet_id).second) throw DataError("duplicate tweet_id " + r.tweet_id);
    lang_index_[r.lang].push_back(i);
    user_index_[r.user_id].push_back(i);
  }
}

std::span<const std::size_t> Corpus::tweets_of(std::string_view user_id) const {
  auto it = user_index_.find(user_id);
  if (it == user_index_.end()) return {};
  return it->second;
}

std::span<const std::size_t> Corpus::tweets_in(std::string_view lang) const {
  auto it = lang_index_.find(lang);
  if (it == lang_index_.end()) return {};
  return it->second;
}

std::vector<std::string> Corpus::users() const {
  std::vector<std::string> out;
  out.reserve(user_index_.size());
  for (const auto& [user, _] : user_index_) out.push_back(user);
  return out;
}

Corpus Corpus::subset(std::vector<std::size_t> indices) const {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<TweetRecord> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(records_.at(i));
  return Corpus(std::move(out));
}

Corpus Corpus::filter_lang(std::string_view lang) const {
  auto idx = tweets_in(lang);
  return subset({idx.begin(), idx.end()});
}

std::string SchemaConfig::key_for(const std::string& field) const {
  auto it = field_map.find(field);
  return it == field_map.end() ? field : it->second;
}

namespace {

struct Malformed {
  std::string reason;
};

const json* lookup(const json& obj, const std::string& dotted) {
  const json* cur = &obj;
  std::size_t pos = 0;
  while (true) {
    auto dot = dotted.find('.', pos);
    std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
    if (dot == std::string::npos) return cur;
    pos = dot + 1;
  }
}

std::string required_string(const json& obj, const SchemaConfig& schema, const std::string& field,
                            bool allow_empty = false) {
  const json* v = lookup(obj, schema.key_for(field));
  if (!v || v->is_null()) throw Malformed{"missing " + field};
  std::string s;
  if (v->is_string()) {
    s = v->get<std::string>();
  } else if (v->is_number_integer() && (field == "tweet_id" || field == "user_id")) {
    s = v->dump();
  } else {
    throw Malformed{"bad " + field};
  }
  if (s.empty() && !allow_empty) throw Malformed{"empty " + field};
  return s;
}

std::uint64_t optional_count(const json& obj, const SchemaConfig& schema, const std::string& field) {
  const json* v = lookup(obj, schema.key_for(field));
  if (!v || v->is_null()) return 0;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer()) {
    auto x = v->get<std::int64_t>();
    if (x < 0) throw Malformed{"negative " + field};
    return static_cast<std::uint64_t>(x);
  }
  throw Malformed{"bad " + field};
}

std::vector<std::string> optional_strings(const json& obj, const SchemaConfig& schema,
                                          const std::string& field, bool& present) {
  const json* v = lookup(obj, schema.key_for(field));
  present = v && !v->is_null();
  std::vector<std::string> out;
  if (!present) return out;
  if (!v->is_array()) throw Malformed{"bad " + field};
  for (const auto& item : *v) {
    if (!item.is_string()) throw Malformed{"bad " + field};
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<std::string> normalize_hashtags(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (auto tag : raw) {
    while (!tag.empty() && tag.front() == '#') tag.erase(tag.begin());
    tag = text::to_lower(tag);
    if (!tag.empty()) out.push_back(std::move(tag));
  }
  return out;
}

TweetRecord parse_record(const std::string& line, const SchemaConfig& schema) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception&) {
    throw Malformed{"invalid json"};
  }
  if (!obj.is_object()) throw Malformed{"not an object"};

  TweetRecord r;
  r.tweet_id = required_string(obj, schema, "tweet_id");
  r.user_id = required_string(obj, schema, "user_id");
  auto ts = parse_timestamp(required_string(obj, schema, "created_at"));
  if (!ts) throw Malformed{"bad created_at"};
  if (schema.horizon && *ts > *schema.horizon) throw Malformed{"future created_at"};
  r.created_at = *ts;
  r.lang = text::to_lower(required_string(obj, schema, "lang"));
  r.text = required_string(obj, schema, "text", /*allow_empty=*/true);

  bool has_tags = false;
  auto tags = optional_strings(obj, schema, "hashtags", has_tags);
  r.hashtags = has_tags ? normalize_hashtags(tags) : text::extract_hashtags(r.text);
  bool has_urls = false;
  r.urls = optional_strings(obj, schema, "urls", has_urls);

  r.like_count = optional_count(obj, schema, "like_count");
  r.retweet_count = optional_count(obj, schema, "retweet_count");
  r.quote_count = optional_count(obj, schema, "quote_count");
  r.reply_count = optional_count(obj, schema, "reply_count");
  if (const json* v = lookup(obj, schema.key_for("is_retweet")); v && !v->is_null()) {
    if (!v->is_boolean()) throw Malformed{"bad is_retweet"};
    r.is_retweet = v->get<bool>();
  }
  return r;
}

}  // namespace

ParseResult parse_corpus(std::istream& in, const SchemaConfig& schema) {
  if (!in) throw IoError("unreadable input stream");
  ParseResult result;
  std::vector<TweetRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.lines;
    try {
      TweetRecord r = parse_record(line, schema);
      if (!ids.insert(r.tweet_id).second) throw Malformed{"duplicate tweet_id"};
      records.push_back(std::move(r));
    } catch (const Malformed& m) {
      ++result.skipped;
      ++result.skip_reasons[m.reason];
    }
  }
  if (in.bad()) throw IoError("error while reading input stream");
  if (result.lines > 0 &&
      static_cast<double>(result.skipped) > schema.max_malformed_fraction * static_cast<double>(result.lines)) {
    throw DataError(std::to_string(result.skipped) + " of " + std::to_string(result.lines) +
                    " lines are malformed; input does not match the record schema");
  }
  result.corpus = Corpus(std::move(records));
  return result;
}

ParseResult parse_corpus_file(const std::string& path, const SchemaConfig& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path);
  return parse_corpus(in, schema);
}

std::string to_json_line(const TweetRecord& r) {
  // Keys are emitted sorted, so the line is canonical for a given record.
  json obj = {{"tweet_id", r.tweet_id},
              {"user_id", r.user_id},
              {"created_at", format_timestamp(r.created_at)},
              {"lang", r.lang},
              {"text", r.text},
              {"hashtags", r.hashtags},
              {"urls", r.urls},
              {"like_count", r.like_count},
              {"retweet_count", r.retweet_count},
              {"quote_count", r.quote_count},
              {"reply_count", r.reply_count},
              {"is_retweet", r.is_retweet}};
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.records()) out << to_json_line(r) << '\n';
}

Corpus balanced_sample(const Corpus& corpus, std::string_view lang_a, std::string_view lang_b,
                       std::uint64_t seed) {
  auto a = corpus.tweets_in(lang_a);
  auto b = corpus.tweets_in(lang_b);
  if (a.empty()) throw DataError("language '" + std::string(lang_a) + "' is absent from the corpus");
  if (b.empty()) throw DataError("language '" + std::string(lang_b) + "' is absent from the corpus");

  std::vector<std::size_t> small(a.begin(), a.end());
  std::vector<std::size_t> large(b.begin(), b.end());
  if (a.size() == b.size()) {
    small.insert(small.end(), large.begin(), large.end());
    return corpus.subset(std::move(small));
  }
  if (small.size() > large.size()) std::swap(small, large);

  auto [lo, hi] = std::minmax_element(small.begin(), small.end(), [&](std::size_t x, std::size_t y) {
    return corpus[x].created_at < corpus[y].created_at;
  });
  const Timestamp start = corpus[*lo].created_at;
  const Timestamp end = corpus[*hi].created_at;
  std::erase_if(large, [&](std::size_t i) {
    return corpus[i].created_at < start || corpus[i].created_at > end;
  });

  // If the larger language has fewer records inside the span than the
  // smaller one has overall, both sides shrink to the in-span count.
  const std::size_t target = std::min(small.size(), large.size());
  Rng rng(seed);
  auto take = [&](std::vector<std::size_t>& pool) {
    if (pool.size() > target) {
      rng.shuffle(std::span(pool));
      pool.resize(target);
    }
  };
  take(large);
  take(small);
  small.insert(small.end(), large.begin(), large.end());
  return corpus.subset(std::move(small));
}

}  // namespace coordnet
