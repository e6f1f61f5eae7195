#include "coordnet/domain.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "coordnet/error.hpp"
#include "coordnet/text.hpp"
#include "data/wordlists.hpp"

namespace coordnet {
namespace {

bool is_host_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
}

std::optional<std::string> host_of(std::string_view url) {
  std::size_t start = 0;
  if (auto scheme = url.find("://"); scheme != std::string_view::npos) {
    std::string_view s = url.substr(0, scheme);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        })) {
      return std::nullopt;
    }
    start = scheme + 3;
  } else if (url.starts_with("//")) {
    start = 2;
  }
  std::string_view rest = url.substr(start);
  std::string_view authority = rest.substr(0, rest.find_first_of("/?#"));
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  if (auto colon = authority.find(':'); colon != std::string_view::npos) {
    std::string_view port = authority.substr(colon + 1);
    if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    authority = authority.substr(0, colon);
  }
  std::string host;
  host.reserve(authority.size());
  for (char c : authority) host.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || !std::all_of(host.begin(), host.end(), is_host_char)) return std::nullopt;
  if (host.find('.') == std::string::npos || host.front() == '.' ||
      host.find("..") != std::string::npos) {
    return std::nullopt;
  }
  return host;
}

bool is_ipv4(std::string_view host) {
  return std::all_of(host.begin(), host.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.'; });
}

bool is_suffix(std::string_view candidate) {
  if (candidate.find('.') == std::string_view::npos) return true;
  const auto& list = data::multi_label_suffixes();
  return std::binary_search(list.begin(), list.end(), candidate);
}

}  // namespace

std::optional<std::string> try_extract_base_domain(std::string_view url) noexcept {
  try {
    auto host = host_of(url);
    if (!host) return std::nullopt;
    if (is_ipv4(*host)) return host;
    if (host->find('.') != std::string::npos && is_suffix(*host)) return std::nullopt;

    // Walk label boundaries from the left; the first (longest) suffix match
    // wins, and the base domain is that suffix plus one more label.
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < host->size(); ++i) {
      if ((*host)[i] == '.') starts.push_back(i + 1);
    }
    for (std::size_t k = 1; k < starts.size(); ++k) {
      if (is_suffix(std::string_view(*host).substr(starts[k]))) {
        return host->substr(starts[k - 1]);
      }
    }
    return std::nullopt;  // host is itself a public suffix
  } catch (...) {
    return std::nullopt;
  }
}

std::string extract_base_domain(std::string_view url) {
  if (auto d = try_extract_base_domain(url)) return *d;
  throw DataError("cannot extract base domain from '" + std::string(url) + "'");
}

DomainFilterList DomainFilterList::parse(std::string_view text) {
  DomainFilterList list;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string entry = text::to_lower(line.substr(b, e - b + 1));
    auto base = try_extract_base_domain("https://" + entry);
    if (!base || *base != entry) {
      throw ConfigError("domain filter line " + std::to_string(lineno) + ": '" + entry +
                        "' is not a base domain");
    }
    list.add(std::move(entry));
  }
  return list;
}

DomainFilterList DomainFilterList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read domain filter list " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

DomainFilterList DomainFilterList::defaults(std::string_view lang) {
  DomainFilterList list;
  if (lang == "en" || lang == "es") {
    for (auto d : data::default_domain_filter(lang)) list.add(std::string(d));
  } else {
    for (auto d : data::default_domain_filter("en")) list.add(std::string(d));
    for (auto d : data::default_domain_filter("es")) list.add(std::string(d));
  }
  return list;
}

void DomainFilterList::add(std::string domain) { blocked_.insert(std::move(domain)); }

FilteredDomains filter_domains(std::span<const std::string> urls, const DomainFilterList& filter) {
  FilteredDomains out;
  for (const auto& url : urls) {
    auto base = try_extract_base_domain(url);
    if (!base) {
      ++out.extraction_failures;
      continue;
    }
    if (!filter.contains(*base)) out.domains.push_back(std::move(*base));
  }
  return out;
}

}  // namespace coordnet
