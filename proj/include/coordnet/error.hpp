#pragma once

#include <stdexcept>
#include <string>

namespace coordnet {

// Exit-code class a failure maps to at the CLI boundary.
enum class ErrorKind { Usage = 1, Data = 2, Internal = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad configuration, flags, or parameter values.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// Input data that cannot be processed (wrong schema, inconsistent corpus, empty results).
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

struct ProviderError : Error {
  explicit ProviderError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

}  // namespace coordnet
