#include "coordnet/text.hpp"

#include <algorithm>

#include "data/wordlists.hpp"

namespace coordnet::text {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') ||
           cp == '_';
  }
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x3FF) return true;  // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;  // Cyrillic
  return false;
}

namespace {

char32_t lower_cp(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return cp | 1;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (lower_cp(s[pos + k]) != prefix[k]) return false;
  }
  return true;
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0 || cp == 0x3000 ||
         (cp >= 0x2000 && cp <= 0x200A);
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  for (auto& cp : cps) cp = lower_cp(cp);
  return encode_utf8(cps);
}

std::vector<std::string> extract_hashtags(std::string_view text) {
  const std::u32string cps = decode_utf8(text);
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] != U'#' && cps[i] != 0xFF03) continue;
    // '#' glued to a preceding word character is not a hashtag (e.g. "C#").
    if (i > 0 && is_word_char(cps[i - 1])) continue;
    std::size_t j = i + 1;
    std::u32string tag;
    while (j < cps.size() && is_word_char(cps[j])) tag.push_back(lower_cp(cps[j++]));
    if (!tag.empty()) tags.push_back(encode_utf8(tag));
    i = j - 1;
  }
  return tags;
}

std::vector<std::string> word_tokens(std::string_view text) {
  const std::u32string cps = decode_utf8(text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (starts_with_ci(cps, i, U"http://") || starts_with_ci(cps, i, U"https://") ||
        starts_with_ci(cps, i, U"www.") || cps[i] == U'@') {
      while (i < n && !is_space(cps[i])) ++i;
      continue;
    }
    if (!is_word_char(cps[i])) {
      ++i;
      continue;
    }
    std::u32string tok;
    while (i < n && is_word_char(cps[i])) tok.push_back(lower_cp(cps[i++]));
    tokens.push_back(encode_utf8(tok));
  }
  return tokens;
}

bool is_stopword(std::string_view lang, std::string_view token) {
  const auto& list = data::stopwords(lang);
  return std::binary_search(list.begin(), list.end(), token);
}

std::vector<std::string> clean_tokens(std::string_view text, std::string_view lang,
                                      std::size_t min_tokens) {
  std::vector<std::string> kept;
  for (auto& tok : word_tokens(text)) {
    if (!is_stopword(lang, tok)) kept.push_back(std::move(tok));
  }
  if (kept.size() < min_tokens) kept.clear();
  return kept;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace coordnet::text
