#include "data/wordlists.hpp"

#include <algorithm>
#include <initializer_list>

namespace coordnet::data {
namespace {

std::vector<std::string_view> sorted(std::initializer_list<std::string_view> words) {
  std::vector<std::string_view> v(words);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

const std::vector<std::string_view> kEmpty;

}  // namespace

const std::vector<std::string_view>& stopwords(std::string_view lang) {
  static const auto en = sorted({
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
      "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
      "by", "can", "could", "did", "do", "does", "doing", "don", "down", "during", "each", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its",
      "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of",
      "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
      "rt", "s", "same", "she", "should", "so", "some", "such", "t", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to", "too", "under", "until", "up", "very", "was", "we", "were", "what", "when",
      "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you", "your",
      "yours", "yourself", "yourselves", "amp", "via", "ll", "re", "ve", "m", "d", "y"});
  static const auto es = sorted({
      "a", "al", "algo", "algunas", "algunos", "ante", "antes", "como", "con", "contra", "cual",
      "cuando", "de", "del", "desde", "donde", "durante", "e", "el", "ella", "ellas", "ellos",
      "en", "entre", "era", "erais", "eran", "eras", "eres", "es", "esa", "esas", "ese", "eso",
      "esos", "esta", "estaba", "estado", "estamos", "estan", "estar", "estas", "este", "esto",
      "estos", "está", "están", "fue", "fueron", "fui", "ha", "habia", "había", "han", "has",
      "hasta", "hay", "la", "las", "le", "les", "lo", "los", "me", "mi", "mis", "mucho", "muy",
      "más", "mí", "nada", "ni", "no", "nos", "nosotros", "o", "os", "otra", "otras", "otro",
      "otros", "para", "pero", "poco", "por", "porque", "que", "quien", "qué", "rt", "se", "sea",
      "ser", "si", "sido", "sin", "sobre", "son", "su", "sus", "sí", "también", "tanto", "te",
      "ti", "tiene", "tienen", "todo", "todos", "tu", "tus", "tú", "un", "una", "uno", "unos",
      "vosotros", "y", "ya", "yo", "él", "via"});
  if (lang == "en") return en;
  if (lang == "es") return es;
  return kEmpty;
}

const std::vector<std::string_view>& positive_words(std::string_view lang) {
  static const auto en = sorted({
      "amazing", "awesome", "beautiful", "best", "better", "brave", "brilliant", "celebrate",
      "champion", "congrats", "congratulations", "excellent", "fantastic", "free", "freedom",
      "glad", "good", "great", "happy", "hero", "honest", "hope", "hopeful", "incredible",
      "inspiring", "joy", "love", "loved", "lovely", "nice", "perfect", "proud", "safe",
      "strong", "success", "successful", "support", "thank", "thanks", "victory", "win",
      "winning", "wonderful"});
  static const auto es = sorted({
      "alegría", "apoyo", "bien", "bonito", "bueno", "buena", "celebrar", "esperanza", "excelente",
      "exito", "éxito", "feliz", "felicidades", "fuerte", "fuerza", "ganar", "gracias", "gran",
      "grande", "héroe", "honesto", "libertad", "lindo", "maravilloso", "mejor", "orgullo",
      "orgulloso", "paz", "perfecto", "seguro", "sí", "triunfo", "victoria", "viva", "amor",
      "increíble", "genial", "justicia"});
  if (lang == "en") return en;
  if (lang == "es") return es;
  return kEmpty;
}

const std::vector<std::string_view>& negative_words(std::string_view lang) {
  static const auto en = sorted({
      "afraid", "angry", "awful", "bad", "corrupt", "corruption", "crime", "criminal", "crisis",
      "danger", "dangerous", "dead", "destroy", "disaster", "disgrace", "dishonest", "evil",
      "fail", "failed", "failure", "fake", "fear", "fraud", "hate", "horrible", "illegal", "lie",
      "liar", "lies", "lose", "loser", "mess", "pathetic", "poor", "rigged", "sad", "scam",
      "shame", "stolen", "terrible", "threat", "ugly", "violence", "weak", "worse", "worst",
      "wrong"});
  static const auto es = sorted({
      "asco", "corrupción", "corrupto", "crimen", "criminal", "crisis", "culpa", "daño", "desastre",
      "engaño", "falso", "fracaso", "fraude", "horrible", "ilegal", "malo", "mala", "mal", "mentira",
      "mentiras", "mentiroso", "miedo", "muerte", "odio", "peligro", "peor", "pobre", "robo",
      "terrible", "tristeza", "triste", "vergüenza", "violencia", "amenaza", "basura"});
  if (lang == "en") return en;
  if (lang == "es") return es;
  return kEmpty;
}

bool has_sentiment_lexicon(std::string_view lang) { return lang == "en" || lang == "es"; }

const std::vector<std::string_view>& multi_label_suffixes() {
  static const auto list = sorted({
      // United Kingdom, Europe
      "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk", "ltd.uk", "plc.uk", "sch.uk",
      "com.es", "org.es", "gob.es", "nom.es", "edu.es", "com.pt", "gov.pt", "com.gr", "com.pl",
      "co.at", "or.at", "gv.at", "com.tr", "gov.tr", "org.tr", "com.ua", "co.it",
      // Latin America
      "com.mx", "org.mx", "gob.mx", "edu.mx", "net.mx", "com.ar", "gob.ar", "org.ar", "net.ar",
      "com.br", "gov.br", "org.br", "net.br", "com.co", "gov.co", "org.co", "net.co", "edu.co",
      "com.ve", "gob.ve", "org.ve", "com.pe", "gob.pe", "org.pe", "gob.cl", "com.ec", "gob.ec",
      "com.uy", "gub.uy", "com.py", "gov.py", "com.bo", "gob.bo", "com.gt", "gob.gt", "com.sv",
      "gob.sv", "com.hn", "gob.hn", "com.ni", "gob.ni", "com.pa", "gob.pa", "com.do", "gob.do",
      "com.pr", "co.cr", "go.cr", "com.cu", "gob.cu",
      // Asia-Pacific, Africa, Middle East
      "com.au", "net.au", "org.au", "gov.au", "edu.au", "co.nz", "org.nz", "govt.nz", "co.jp",
      "ne.jp", "or.jp", "go.jp", "ac.jp", "co.kr", "or.kr", "go.kr", "com.cn", "net.cn", "org.cn",
      "gov.cn", "com.hk", "com.tw", "com.sg", "co.in", "gov.in", "net.in", "org.in", "co.za",
      "gov.za", "org.za", "co.il", "gov.il", "com.ph", "gov.ph", "com.my", "co.id", "go.id",
      "com.pk", "com.ng", "com.eg", "co.ke", "com.sa", "co.th",
      // Private registries
      "blogspot.com", "github.io", "herokuapp.com", "netlify.app", "appspot.com",
      "cloudfront.net"});
  return list;
}

const std::vector<std::string_view>& default_domain_filter(std::string_view lang) {
  static const auto en = sorted({"youtu.be", "x.com", "youtube.com", "dlvr.it", "trib.al",
                                 "ift.tt", "tiktok.com", "bit.ly", "yahoo.com"});
  static const auto es = sorted({"dlvr.it", "youtu.be", "youtube.com", "x.com", "bit.ly", "buff.ly",
                                 "ift.tt", "ow.ly", "tinyurl.com", "short.gy", "trib.al",
                                 "acortar.link", "uni.vi"});
  if (lang == "es") return es;
  if (lang == "en") return en;
  return kEmpty;
}

}  // namespace coordnet::data
