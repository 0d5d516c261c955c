#include "cloze/text.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

#include "cloze/error.hpp"

namespace cloze {

using nlohmann::ordered_json;

bool is_sentence_terminator(const Token& t) {
  return t == "." || t == "!" || t == "?";
}

bool is_closing_token(const Token& t) {
  return t == "''" || t == "'" || t == "\"" || t == ")" || t == "]" ||
         t == "}" || t == "”" || t == "’" || t == "»";
}

std::vector<Token> tokenize_whitespace(const std::string& text) {
  std::vector<Token> tokens;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<Sentence> split_sentences(const std::vector<Token>& tokens) {
  std::vector<Sentence> sentences;
  Sentence current;
  size_t i = 0;
  while (i < tokens.size()) {
    current.push_back(tokens[i]);
    if (is_sentence_terminator(tokens[i])) {
      ++i;
      while (i < tokens.size() && is_closing_token(tokens[i])) {
        current.push_back(tokens[i]);
        ++i;
      }
      sentences.push_back(std::move(current));
      current.clear();
    } else {
      ++i;
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

Instance parse_passage_line(const std::string& line, const TokenSet& punctuation,
                            const std::string& id) {
  const auto tokens = tokenize_whitespace(line);
  if (tokens.empty()) throw DataError("malformed passage: empty line");
  const auto sentences = split_sentences(tokens);
  if (sentences.size() < 2)
    throw DataError("malformed passage: fewer than 2 sentences");
  Instance inst;
  inst.id = id;
  inst.context.assign(sentences.begin(), sentences.end() - 1);
  inst.target_sentence = sentences.back();
  inst.target_word = inst.target_sentence.back();
  if (punctuation.count(inst.target_word))
    throw DataError("malformed passage: target word '" + inst.target_word +
                    "' is punctuation");
  return inst;
}

std::string render_passage(const Instance& inst) {
  std::ostringstream out;
  bool first = true;
  auto emit = [&](const Sentence& s) {
    for (const auto& t : s) {
      if (!first) out << ' ';
      out << t;
      first = false;
    }
  };
  for (const auto& s : inst.context) emit(s);
  emit(inst.target_sentence);
  return out.str();
}

const std::vector<std::string>& phenomenon_labels() {
  static const std::vector<std::string> kLabels = {
      "single name cue",   "simple speaker tracking",
      "basic reference",   "discourse inference rule",
      "semantic trigger",  "coreference",
      "external knowledge"};
  return kLabels;
}

bool is_known_label(const std::string& label) {
  for (const auto& l : phenomenon_labels())
    if (l == label) return true;
  return false;
}

static ordered_json sentence_to_json(const Sentence& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : s) arr.push_back(t);
  return arr;
}

static Sentence sentence_from_json(const ordered_json& arr, const std::string& where) {
  if (!arr.is_array()) throw DataError(where + ": sentence is not an array");
  Sentence s;
  for (const auto& t : arr) {
    if (!t.is_string()) throw DataError(where + ": token is not a string");
    s.push_back(t.get<std::string>());
  }
  return s;
}

std::string instance_to_json_line(const Instance& inst) {
  ordered_json j;
  j["id"] = inst.id;
  ordered_json ctx = ordered_json::array();
  for (const auto& s : inst.context) ctx.push_back(sentence_to_json(s));
  j["context"] = ctx;
  j["target_sentence"] = sentence_to_json(inst.target_sentence);
  j["target_word"] = inst.target_word;
  if (!inst.labels.empty()) {
    ordered_json labels = ordered_json::array();
    for (const auto& l : inst.labels) labels.push_back(l);
    j["labels"] = labels;
  }
  return j.dump();
}

Instance instance_from_json_line(const std::string& line, const std::string& where) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw DataError(where + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw DataError(where + ": record is not an object");
  for (const auto& key : {"id", "context", "target_sentence", "target_word"})
    if (!j.contains(key))
      throw DataError(where + ": record missing key '" + std::string(key) + "'");
  Instance inst;
  if (!j["id"].is_string()) throw DataError(where + ": id is not a string");
  inst.id = j["id"].get<std::string>();
  if (!j["context"].is_array()) throw DataError(where + ": context is not an array");
  for (const auto& s : j["context"])
    inst.context.push_back(sentence_from_json(s, where));
  inst.target_sentence = sentence_from_json(j["target_sentence"], where);
  if (!j["target_word"].is_string())
    throw DataError(where + ": target_word is not a string");
  inst.target_word = j["target_word"].get<std::string>();
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw DataError(where + ": labels is not an array");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw DataError(where + ": label is not a string");
      const auto label = l.get<std::string>();
      if (!is_known_label(label))
        throw DataError(where + ": unknown label '" + label + "'");
      inst.labels.push_back(label);
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key != "id" && key != "context" && key != "target_sentence" &&
        key != "target_word" && key != "labels")
      throw DataError(where + ": unknown key '" + key + "'");
  }
  if (inst.target_sentence.empty())
    throw DataError(where + ": target_sentence is empty");
  if (inst.target_word != inst.target_sentence.back())
    throw DataError(where + ": target_word does not equal final target-sentence token");
  return inst;
}

InstanceReader::InstanceReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw DataError("cannot open instance file: " + path);
}

std::optional<Instance> InstanceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    return instance_from_json_line(line, path_ + ":" + std::to_string(line_));
  }
  return std::nullopt;
}

std::vector<Instance> read_instances(const std::string& path) {
  InstanceReader reader(path);
  std::vector<Instance> out;
  while (auto inst = reader.next()) out.push_back(std::move(*inst));
  return out;
}

void write_instances(const std::vector<Instance>& instances, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const auto& inst : instances) out << instance_to_json_line(inst) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace cloze
