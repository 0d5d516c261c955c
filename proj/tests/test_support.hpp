#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cloze/resources.hpp"
#include "cloze/rng.hpp"
#include "cloze/text.hpp"
#include "cloze/types.hpp"

namespace cloze::test {

inline const TokenSet& punctuation() {
  static const TokenSet set = load_punctuation(CLOZE_TEST_RESOURCE_DIR);
  return set;
}

inline const TokenSet& stopwords() {
  static const TokenSet set = load_stopwords(CLOZE_TEST_RESOURCE_DIR);
  return set;
}

inline Sentence tok(const std::string& spaced) {
  return tokenize_whitespace(spaced);
}

inline Instance make_instance(const std::vector<std::string>& context_sentences,
                              const std::string& target_sentence,
                              const std::string& id = "t") {
  Instance inst;
  inst.id = id;
  for (const auto& s : context_sentences) inst.context.push_back(tok(s));
  inst.target_sentence = tok(target_sentence);
  inst.target_word = inst.target_sentence.back();
  return inst;
}

/// Random instances over a small word list; the target word is always
/// planted in the context so losses are defined.
inline Instance random_instance(Rng& rng, size_t n_sentences = 3,
                                size_t words_per_sentence = 5,
                                const std::string& id = "r") {
  static const std::vector<std::string> kWords = {
      "cat",  "dog",  "bird", "tree", "house", "river", "stone",
      "wolf", "moon", "star", "road", "cloud", "fire",  "grass"};
  Instance inst;
  inst.id = id;
  std::vector<Token> all;
  for (size_t s = 0; s < n_sentences; ++s) {
    Sentence sent;
    for (size_t w = 0; w < words_per_sentence; ++w) {
      const auto& t = kWords[rng.below(kWords.size())];
      sent.push_back(t);
      all.push_back(t);
    }
    sent.push_back(".");
    inst.context.push_back(sent);
  }
  Sentence target;
  for (size_t w = 0; w + 1 < words_per_sentence; ++w)
    target.push_back(kWords[rng.below(kWords.size())]);
  target.push_back(all[rng.below(all.size())]);  // answer present in context
  inst.target_sentence = target;
  inst.target_word = target.back();
  return inst;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("cloze_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name = "") const {
    return name.empty() ? dir_.string() : (dir_ / name).string();
  }

 private:
  std::filesystem::path dir_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

}  // namespace cloze::test
