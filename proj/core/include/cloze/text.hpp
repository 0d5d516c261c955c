#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cloze/resources.hpp"
#include "cloze/types.hpp"

namespace cloze {

/// Sentence terminators. A boundary is placed after a terminator token,
/// extended over any run of closing quotes/brackets, which attach left.
bool is_sentence_terminator(const Token& t);
bool is_closing_token(const Token& t);

std::vector<Token> tokenize_whitespace(const std::string& text);

/// Partition of the token stream: concatenating the result restores the
/// input exactly. Empty input yields an empty result.
std::vector<Sentence> split_sentences(const std::vector<Token>& tokens);

/// One whitespace-tokenized passage per line; the last sentence is the
/// target sentence and its final token the target word. Throws DataError
/// ("malformed passage") on fewer than two sentences, an empty line, or a
/// punctuation target word.
Instance parse_passage_line(const std::string& line, const TokenSet& punctuation,
                            const std::string& id = "");

/// Joins all sentences with single spaces; inverse of parse_passage_line
/// for instances whose context sentences end in a terminator.
std::string render_passage(const Instance& inst);

/// Streaming reader for the JSON Lines instance format. Single consumer.
class InstanceReader {
 public:
  explicit InstanceReader(const std::string& path);
  /// Next instance, or nullopt at end of file. Throws DataError naming the
  /// line number on a malformed record.
  std::optional<Instance> next();
  size_t line_number() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t line_ = 0;
};

std::vector<Instance> read_instances(const std::string& path);
void write_instances(const std::vector<Instance>& instances, const std::string& path);
std::string instance_to_json_line(const Instance& inst);
Instance instance_from_json_line(const std::string& line, const std::string& where);

}  // namespace cloze
