#include "cloze/resources.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cloze/error.hpp"

#ifndef CLOZE_SOURCE_RESOURCE_DIR
#define CLOZE_SOURCE_RESOURCE_DIR ""
#endif

namespace cloze {

namespace fs = std::filesystem;

std::vector<Token> load_token_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open token list: " + path);
  std::vector<Token> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

TokenSet load_token_set(const std::string& path) {
  auto list = load_token_list(path);
  return TokenSet(list.begin(), list.end());
}

static bool has_lists(const fs::path& dir) {
  return fs::exists(dir / "punctuation.txt") && fs::exists(dir / "stopwords.txt");
}

std::string resource_dir(const std::string& override_dir) {
  if (!override_dir.empty()) {
    if (!has_lists(override_dir))
      throw DataError("resource dir missing punctuation.txt/stopwords.txt: " +
                      override_dir);
    return override_dir;
  }
  if (const char* env = std::getenv("CLOZE_RESOURCES")) {
    if (has_lists(env)) return env;
  }
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    fs::path installed = exe.parent_path().parent_path() / "share" / "cloze" / "resources";
    if (has_lists(installed)) return installed.string();
  }
  if (has_lists("resources")) return "resources";
  if (has_lists(CLOZE_SOURCE_RESOURCE_DIR)) return CLOZE_SOURCE_RESOURCE_DIR;
  throw DataError("cannot locate bundled resources; set CLOZE_RESOURCES");
}

TokenSet load_punctuation(const std::string& override_dir) {
  return load_token_set((fs::path(resource_dir(override_dir)) / "punctuation.txt").string());
}

TokenSet load_stopwords(const std::string& override_dir) {
  return load_token_set((fs::path(resource_dir(override_dir)) / "stopwords.txt").string());
}

}  // namespace cloze
