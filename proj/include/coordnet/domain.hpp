#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coordnet {

/// Registered base domain (one label above the public suffix), lowercased.
/// Throws DataError for strings without a parseable host.
std::string extract_base_domain(std::string_view url);
std::optional<std::string> try_extract_base_domain(std::string_view url) noexcept;

/// Set of base domains excluded from domain-based analysis.
class DomainFilterList {
 public:
  DomainFilterList() = default;

  /// One base domain per line; '#' starts a comment. Entries that are not
  /// already base domains are rejected with a ConfigError.
  static DomainFilterList parse(std::string_view text);
  static DomainFilterList load(const std::string& path);
  /// Bundled lists: "en", "es", or anything else for their union.
  static DomainFilterList defaults(std::string_view lang);

  void add(std::string domain);
  bool contains(std::string_view domain) const { return blocked_.contains(std::string(domain)); }
  const std::set<std::string>& blocked() const { return blocked_; }
  std::size_t size() const { return blocked_.size(); }

 private:
  std::set<std::string> blocked_;
};

struct FilteredDomains {
  std::vector<std::string> domains;
  std::size_t extraction_failures = 0;
};

/// Base domains of `urls` not in `filter`, in input order with multiplicity.
FilteredDomains filter_domains(std::span<const std::string> urls, const DomainFilterList& filter);

}  // namespace coordnet
