#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cloze/config.hpp"
#include "cloze/error.hpp"
#include "cloze/resources.hpp"
#include "cloze/text.hpp"

namespace cloze::cli {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kVerifyError = 3;

inline Config load_config_or_default(const std::string& path) {
  return path.empty() ? Config{} : Config::load(path);
}

/// Reconstructs the invocation for artifact metadata.
inline std::string join_invocation(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

/// Reads evaluation data: JSON Lines when the file ends in .jsonl,
/// otherwise the one-passage-per-line text format.
inline std::vector<Instance> read_eval_data(const std::string& path,
                                            const TokenSet& punctuation) {
  if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl")
    return read_instances(path);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path);
  std::vector<Instance> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(parse_passage_line(line, punctuation,
                                       path + ":" + std::to_string(lineno)));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// Subcommand registrations; each installs its callback on the app.
void register_build_data(CLI::App& app, int& rc, std::string invocation);
void register_train(CLI::App& app, int& rc, std::string invocation);
void register_evaluate(CLI::App& app, int& rc, std::string invocation);
void register_predict(CLI::App& app, int& rc, std::string invocation);
void register_compare(CLI::App& app, int& rc, std::string invocation);
void register_baseline(CLI::App& app, int& rc, std::string invocation);
void register_gradcheck(CLI::App& app, int& rc, std::string invocation);

}  // namespace cloze::cli
