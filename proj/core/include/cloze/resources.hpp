#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "cloze/types.hpp"

namespace cloze {

using TokenSet = std::unordered_set<Token>;

/// Loads a one-token-per-line UTF-8 list. Blank lines and lines starting
/// with '#' are skipped.
TokenSet load_token_set(const std::string& path);

std::vector<Token> load_token_list(const std::string& path);

/// Resolves the directory holding the bundled punctuation/stopword lists.
/// Order: explicit override, CLOZE_RESOURCES env var, <exe>/../share/cloze/
/// resources, ./resources, then the source tree the library was built from.
std::string resource_dir(const std::string& override_dir = "");

TokenSet load_punctuation(const std::string& override_dir = "");
TokenSet load_stopwords(const std::string& override_dir = "");

}  // namespace cloze
