#pragma once

#include <stdexcept>
#include <string>

namespace cloze {

/// Malformed or inconsistent input data (bad passage, bad record, bad file).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric or protocol verification failed (gradient check, manifest mismatch).
class VerifyError : public std::runtime_error {
 public:
  explicit VerifyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cloze
