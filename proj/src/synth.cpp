#include "coordnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>

#include "coordnet/error.hpp"
#include "coordnet/rng.hpp"
#include "coordnet/text.hpp"

namespace coordnet {

std::string_view to_string(Coordination c) {
  switch (c) {
    case Coordination::Domains: return "domains";
    case Coordination::Hashtags: return "hashtags";
    case Coordination::NearDuplicateText: return "near_duplicate_text";
  }
  return "domains";
}

Coordination parse_coordination(std::string_view name) {
  for (auto c : {Coordination::Domains, Coordination::Hashtags, Coordination::NearDuplicateText}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown coordination kind '" + std::string(name) + "'");
}

CampaignSpec CampaignSpec::default_spec() {
  using namespace std::chrono;
  CampaignSpec spec;
  spec.start = sys_days{year{2024} / January / 1};
  spec.end = sys_days{year{2025} / January / 1} - seconds{1};
  spec.groups.assign(3, GroupSpec{});
  return spec;
}

void CampaignSpec::validate() const {
  if (end <= start) throw ConfigError("campaign time span is empty");
  if (langs.empty()) throw ConfigError("campaign needs at least one language");
  if (organic_min_tweets < 1 || organic_max_tweets < organic_min_tweets) {
    throw ConfigError("organic tweet range is invalid");
  }
  if (!(zipf_exponent > 0.0)) throw ConfigError("zipf exponent must be positive");
  std::size_t domain_pools = 0;
  std::size_t hashtag_pools = 0;
  for (const auto& g : groups) {
    if (g.size < 2) throw ConfigError("planted groups need at least two members");
    if (g.entity_pool_size < 1) throw ConfigError("group entity pools need at least one entity");
    if (g.burst_window.count() < 0) throw ConfigError("burst window must be non-negative");
    if (g.bursts < 1) throw ConfigError("planted groups need at least one burst");
    for (auto k : g.kinds) {
      if (k == Coordination::Domains) domain_pools += g.entity_pool_size;
      if (k == Coordination::Hashtags) hashtag_pools += g.entity_pool_size;
    }
  }
  // Organic users keep at least half of each global pool.
  if (2 * domain_pools > domain_pool_size) throw ConfigError("group domain pools exceed the global domain pool");
  if (2 * hashtag_pools > hashtag_pool_size) throw ConfigError("group hashtag pools exceed the global hashtag pool");
}

std::vector<std::string> GroundTruth::members(int g) const {
  std::vector<std::string> out;
  for (const auto& [user, label] : group) {
    if (label == g) out.push_back(user);
  }
  return out;
}

int GroundTruth::group_count() const {
  int n = 0;
  for (const auto& [_, label] : group) n = std::max(n, label + 1);
  return n;
}

namespace {

using namespace std::chrono;

class Zipf {
 public:
  Zipf(std::size_t n, double s) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += std::pow(static_cast<double>(k + 1), -s);
      cdf_[k] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }
  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

struct Vocabulary {
  std::vector<std::vector<std::string_view>> slots;
};

const Vocabulary& vocabulary(std::string_view lang) {
  static const Vocabulary en{{
      {"voters", "neighbors", "teachers", "farmers", "nurses", "veterans", "students", "workers", "families",
       "retirees", "drivers", "parents", "officials", "reporters", "volunteers", "engineers", "pastors", "owners"},
      {"discussed", "questioned", "praised", "criticized", "watched", "debated", "celebrated", "ignored",
       "supported", "reviewed", "shared", "followed", "compared", "analyzed", "mentioned", "tracked"},
      {"local", "national", "rural", "urban", "economic", "regional", "historic", "recent", "quiet", "busy",
       "early", "crowded", "rainy", "sunny", "tense", "hopeful", "costly", "narrow"},
      {"budget", "debate", "rally", "forecast", "hearing", "policy", "festival", "market", "bridge", "school",
       "harvest", "stadium", "clinic", "highway", "library", "museum", "factory", "election"},
      {"downtown", "yesterday", "tonight", "downstate", "outside", "online", "nearby", "overseas", "upstairs",
       "afterwards", "meanwhile", "everywhere", "recently", "anyway", "finally", "together"},
      {"ohio", "texas", "georgia", "arizona", "nevada", "michigan", "florida", "iowa", "maine", "oregon",
       "kansas", "utah", "idaho", "vermont", "alaska", "montana"}}};
  static const Vocabulary es{{
      {"votantes", "vecinos", "maestros", "granjeros", "enfermeras", "veteranos", "estudiantes", "obreros",
       "familias", "jubilados", "conductores", "padres", "funcionarios", "periodistas", "voluntarios",
       "ingenieros", "pastores", "dueños"},
      {"discutieron", "cuestionaron", "elogiaron", "criticaron", "miraron", "debatieron", "celebraron",
       "ignoraron", "apoyaron", "revisaron", "compartieron", "siguieron", "compararon", "analizaron",
       "mencionaron", "rastrearon"},
      {"local", "nacional", "rural", "urbano", "económico", "regional", "histórico", "reciente", "tranquilo",
       "ocupado", "temprano", "lleno", "lluvioso", "soleado", "tenso", "costoso", "estrecho", "nuevo"},
      {"presupuesto", "debate", "mitin", "pronóstico", "audiencia", "política", "festival", "mercado", "puente",
       "escuela", "cosecha", "estadio", "clínica", "carretera", "biblioteca", "museo", "fábrica", "elección"},
      {"ayer", "anoche", "afuera", "adentro", "cerca", "lejos", "pronto", "después", "mientras", "siempre",
       "recién", "finalmente", "juntos", "igualmente", "temprano", "luego"},
      {"jalisco", "sonora", "texas", "florida", "arizona", "nevada", "chihuahua", "oaxaca", "yucatán", "puebla",
       "sinaloa", "durango", "colima", "tabasco", "morelos", "hidalgo"}}};
  return lang == "es" ? es : en;
}

std::string_view pick(Rng& rng, const std::vector<std::string_view>& words) {
  return words[static_cast<std::size_t>(rng.below(words.size()))];
}

// Organic sentence: two clauses drawn independently from the slot lists.
std::string organic_sentence(Rng& rng, std::string_view lang) {
  const auto& v = vocabulary(lang);
  std::vector<std::string> words;
  for (int clause = 0; clause < 2; ++clause) {
    for (const auto& slot : v.slots) words.emplace_back(pick(rng, slot));
  }
  return text::join(words, " ");
}

// Base message for one burst of a near-duplicate campaign.
std::vector<std::string> campaign_message(Rng& rng, std::string_view lang, int group) {
  const auto& v = vocabulary(lang);
  std::vector<std::string> words;
  for (int clause = 0; clause < 3; ++clause) {
    for (const auto& slot : v.slots) words.emplace_back(pick(rng, slot));
  }
  words.push_back("campaign" + std::to_string(group));
  return words;
}

// At most two token edits: substitute a word or drop one.
std::string near_duplicate(Rng& rng, std::vector<std::string> words, std::string_view lang) {
  const auto& v = vocabulary(lang);
  const auto edits = rng.below(3);
  for (std::uint64_t e = 0; e < edits && words.size() > 1; ++e) {
    const auto pos = static_cast<std::size_t>(rng.below(words.size()));
    if (rng.below(2) == 0) {
      words[pos] = std::string(pick(rng, v.slots[pos % v.slots.size()]));
    } else {
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(pos));
    }
  }
  return text::join(words, " ");
}

std::vector<std::string> make_domain_pool(std::size_t n) {
  static const char* tlds[] = {"com", "org", "net", "co.uk", "com.mx", "es", "news", "com.ar"};
  // A few high-traffic platforms up front so the default filter has work to do.
  std::vector<std::string> pool = {"x.com", "youtube.com", "youtu.be", "bit.ly"};
  for (std::size_t k = pool.size(); k < n; ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "outlet%04zu.%s", k, tlds[k % std::size(tlds)]);
    pool.emplace_back(buf);
  }
  pool.resize(n);
  return pool;
}

std::vector<std::string> make_hashtag_pool(std::size_t n) {
  std::vector<std::string> pool;
  for (std::size_t k = 0; k < n; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "tag%04zu", k);
    pool.emplace_back(buf);
  }
  return pool;
}

std::string url_for(Rng& rng, const std::string& domain) {
  const bool www = rng.below(3) == 0;
  return "https://" + std::string(www ? "www." : "") + domain + "/story/" + std::to_string(rng.below(1000000));
}

std::uint64_t engagement(Rng& rng, double mean) {
  return static_cast<std::uint64_t>(std::floor(-std::log(1.0 - rng.uniform()) * mean));
}

struct Draft {
  std::size_t user = 0;  // index into the user table
  Timestamp at{};
  std::string lang;
  std::string text;
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
};

}  // namespace

SynthOutput generate(const CampaignSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const auto domains = make_domain_pool(spec.domain_pool_size);
  const auto hashtags = make_hashtag_pool(spec.hashtag_pool_size);

  // Reserve dedicated pools from the least popular end.
  std::size_t domain_tail = domains.size();
  std::size_t hashtag_tail = hashtags.size();
  std::vector<std::vector<std::string>> group_domains(spec.groups.size());
  std::vector<std::vector<std::string>> group_tags(spec.groups.size());
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto& gs = spec.groups[g];
    for (auto k : gs.kinds) {
      if (k == Coordination::Domains) {
        domain_tail -= gs.entity_pool_size;
        group_domains[g].assign(domains.begin() + static_cast<std::ptrdiff_t>(domain_tail),
                                domains.begin() + static_cast<std::ptrdiff_t>(domain_tail + gs.entity_pool_size));
      }
      if (k == Coordination::Hashtags) {
        hashtag_tail -= gs.entity_pool_size;
        group_tags[g].assign(hashtags.begin() + static_cast<std::ptrdiff_t>(hashtag_tail),
                             hashtags.begin() + static_cast<std::ptrdiff_t>(hashtag_tail + gs.entity_pool_size));
      }
    }
  }
  const Zipf domain_zipf(domain_tail, spec.zipf_exponent);
  const Zipf hashtag_zipf(hashtag_tail, spec.zipf_exponent);

  // User table: organic users first, then group members; ids come from a
  // shuffled numbering so membership is not visible in id order.
  std::size_t total_users = spec.n_organic;
  for (const auto& g : spec.groups) total_users += g.size;
  std::vector<int> label(total_users, -1);
  {
    std::size_t next = spec.n_organic;
    for (std::size_t g = 0; g < spec.groups.size(); ++g) {
      for (std::size_t m = 0; m < spec.groups[g].size; ++m) label[next++] = static_cast<int>(g);
    }
  }
  std::vector<std::size_t> numbering(total_users);
  std::iota(numbering.begin(), numbering.end(), 1);
  rng.shuffle(std::span(numbering));
  std::vector<std::string> ids(total_users);
  for (std::size_t i = 0; i < total_users; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "u%05zu", numbering[i]);
    ids[i] = buf;
  }

  const auto span_seconds = static_cast<std::uint64_t>((spec.end - spec.start).count());
  auto random_time = [&] { return spec.start + seconds{static_cast<std::int64_t>(rng.below(span_seconds + 1))}; };

  auto organic_tweet = [&](std::size_t user, const std::string& lang, bool with_hashtags) {
    Draft d;
    d.user = user;
    d.at = random_time();
    d.lang = lang;
    d.text = organic_sentence(rng, lang);
    if (rng.uniform() < spec.url_probability) d.urls.push_back(url_for(rng, domains[domain_zipf.sample(rng)]));
    if (with_hashtags && rng.uniform() < spec.hashtag_probability) {
      const auto n = 1 + rng.below(2);
      for (std::uint64_t k = 0; k < n; ++k) d.hashtags.push_back(hashtags[hashtag_zipf.sample(rng)]);
    }
    return d;
  };

  std::vector<Draft> drafts;
  for (std::size_t u = 0; u < spec.n_organic; ++u) {
    const std::string primary = spec.langs[static_cast<std::size_t>(rng.below(spec.langs.size()))];
    std::string secondary = primary;
    if (spec.langs.size() > 1 && rng.uniform() < spec.bilingual_fraction) {
      while (secondary == primary) secondary = spec.langs[static_cast<std::size_t>(rng.below(spec.langs.size()))];
    }
    const auto n = spec.organic_min_tweets + rng.below(spec.organic_max_tweets - spec.organic_min_tweets + 1);
    for (std::uint64_t t = 0; t < n; ++t) {
      const std::string& lang = (secondary != primary && (t == 1 || rng.uniform() < 0.3)) ? secondary : primary;
      drafts.push_back(organic_tweet(u, lang, true));
    }
  }

  std::size_t member_base = spec.n_organic;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto& gs = spec.groups[g];
    const std::string& lang = spec.langs[g % spec.langs.size()];
    const bool co_domain = std::find(gs.kinds.begin(), gs.kinds.end(), Coordination::Domains) != gs.kinds.end();
    const bool co_tag = std::find(gs.kinds.begin(), gs.kinds.end(), Coordination::Hashtags) != gs.kinds.end();
    const bool co_text =
        std::find(gs.kinds.begin(), gs.kinds.end(), Coordination::NearDuplicateText) != gs.kinds.end();
    const auto window = static_cast<std::uint64_t>(gs.burst_window.count());

    for (std::size_t b = 0; b < gs.bursts; ++b) {
      const Timestamp center = spec.start + seconds{static_cast<std::int64_t>(rng.below(span_seconds - std::min(span_seconds, window) + 1))};
      const auto message = campaign_message(rng, lang, static_cast<int>(g));
      // Each burst has at least two participants so every coordinated post
      // has a co-member post inside the window.
      std::vector<std::size_t> members(gs.size);
      std::iota(members.begin(), members.end(), member_base);
      std::vector<std::size_t> joined;
      for (auto m : members) {
        if (rng.uniform() < gs.burst_participation) joined.push_back(m);
      }
      while (joined.size() < 2) {
        const auto m = member_base + static_cast<std::size_t>(rng.below(gs.size));
        if (std::find(joined.begin(), joined.end(), m) == joined.end()) joined.push_back(m);
      }
      std::sort(joined.begin(), joined.end());
      for (auto m : joined) {
        Draft d;
        d.user = m;
        d.at = center + seconds{static_cast<std::int64_t>(rng.below(window + 1))};
        d.lang = lang;
        d.text = co_text ? near_duplicate(rng, message, lang) : organic_sentence(rng, lang);
        if (co_domain) d.urls.push_back(url_for(rng, group_domains[g][static_cast<std::size_t>(rng.below(group_domains[g].size()))]));
        if (co_tag) {
          // The first pool tag is the campaign slogan and rides on every post.
          d.hashtags.push_back(group_tags[g][0]);
          for (int extra = 0; extra < 2 && group_tags[g].size() > 1; ++extra) {
            d.hashtags.push_back(group_tags[g][1 + static_cast<std::size_t>(rng.below(group_tags[g].size() - 1))]);
          }
        }
        drafts.push_back(std::move(d));
      }
    }
    for (std::size_t m = member_base; m < member_base + gs.size; ++m) {
      for (std::size_t t = 0; t < gs.background_tweets; ++t) drafts.push_back(organic_tweet(m, lang, false));
    }
    member_base += gs.size;
  }

  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) { return a.at < b.at; });
  std::vector<TweetRecord> records;
  records.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    auto& d = drafts[i];
    TweetRecord r;
    char buf[24];
    std::snprintf(buf, sizeof buf, "t%08zu", i + 1);
    r.tweet_id = buf;
    r.user_id = ids[d.user];
    r.created_at = d.at;
    r.lang = d.lang;
    r.text = d.text;
    for (const auto& tag : d.hashtags) r.text += " #" + tag;
    for (const auto& url : d.urls) r.text += " " + url;
    r.hashtags = std::move(d.hashtags);
    r.urls = std::move(d.urls);
    const bool planted = label[d.user] >= 0;
    r.like_count = engagement(rng, planted ? 3.0 : 12.0);
    r.retweet_count = engagement(rng, planted ? 6.0 : 3.0);
    r.quote_count = engagement(rng, 0.5);
    r.reply_count = engagement(rng, 1.5);
    r.is_retweet = rng.uniform() < 0.005;
    records.push_back(std::move(r));
  }

  SynthOutput out;
  out.corpus = Corpus(std::move(records));
  for (std::size_t i = 0; i < total_users; ++i) out.truth.group[ids[i]] = label[i];
  return out;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  for (const auto& [user, g] : truth.group) {
    out << user << '\t' << (g < 0 ? std::string("organic") : std::to_string(g)) << '\n';
  }
}

GroundTruth read_ground_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read ground truth " + path);
  GroundTruth truth;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("ground truth line '" + line + "' needs user_id<TAB>group");
    const std::string label = line.substr(tab + 1);
    int g = -1;
    if (label != "organic") {
      try {
        g = std::stoi(label);
      } catch (const std::exception&) {
        throw DataError("bad ground truth group '" + label + "'");
      }
      if (g < 0) throw DataError("bad ground truth group '" + label + "'");
    }
    truth.group[line.substr(0, tab)] = g;
  }
  return truth;
}

namespace {

std::size_t pairs(std::size_t n) { return n * (n - 1) / 2; }

double entropy(const std::map<int, std::size_t>& counts, double n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

RecoveryScores score_recovery(const GroundTruth& truth, const std::map<std::string, int>& detected) {
  RecoveryScores s;
  std::map<int, std::size_t> truth_sizes;
  for (const auto& [_, g] : truth.group) {
    if (g >= 0) ++truth_sizes[g];
  }
  for (const auto& [_, n] : truth_sizes) s.truth_pairs += pairs(n);

  std::map<int, std::size_t> detected_sizes;
  std::map<int, std::size_t> truth_on_detected;  // organic included as -1
  std::map<std::pair<int, int>, std::size_t> joint;
  for (const auto& [user, c] : detected) {
    auto it = truth.group.find(user);
    if (it == truth.group.end()) throw DataError("detected user " + user + " is not in the ground truth");
    ++detected_sizes[c];
    ++truth_on_detected[it->second];
    ++joint[{it->second, c}];
  }
  s.detected_users = detected.size();
  for (const auto& [_, n] : detected_sizes) s.detected_pairs += pairs(n);
  for (const auto& [key, n] : joint) {
    if (key.first >= 0) s.true_positive_pairs += pairs(n);
  }

  s.vacuous = s.detected_pairs == 0 || s.truth_pairs == 0;
  s.precision = s.detected_pairs ? static_cast<double>(s.true_positive_pairs) / static_cast<double>(s.detected_pairs) : 1.0;
  s.recall = s.truth_pairs ? static_cast<double>(s.true_positive_pairs) / static_cast<double>(s.truth_pairs) : 1.0;
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;

  if (!detected.empty()) {
    const double n = static_cast<double>(detected.size());
    const double ht = entropy(truth_on_detected, n);
    const double hd = entropy(detected_sizes, n);
    double mi = 0.0;
    for (const auto& [key, c] : joint) {
      const double pxy = static_cast<double>(c) / n;
      const double px = static_cast<double>(truth_on_detected[key.first]) / n;
      const double py = static_cast<double>(detected_sizes[key.second]) / n;
      mi += pxy * std::log(pxy / (px * py));
    }
    if (ht + hd == 0.0) {
      s.nmi = 1.0;
    } else {
      s.nmi = std::clamp(2.0 * mi / (ht + hd), 0.0, 1.0);
    }
  }
  return s;
}

RecoveryScores score_recovery(const GroundTruth& truth, const SimilarityGraph& graph, const Partition& partition) {
  std::map<std::string, int> detected;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    detected[graph.user(static_cast<NodeId>(i))] = partition.assignment.at(i);
  }
  return score_recovery(truth, detected);
}

RecoveryScores score_recovery(const GroundTruth& truth, const DriverSet& drivers) {
  std::map<std::string, int> detected;
  for (const auto& u : drivers.users) detected[u] = 0;
  return score_recovery(truth, detected);
}

}  // namespace coordnet
