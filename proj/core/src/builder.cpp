#include "cloze/builder.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cloze/error.hpp"
#include "cloze/rng.hpp"
#include "cloze/text.hpp"

namespace cloze {

namespace fs = std::filesystem;

std::vector<Document> read_corpus_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("corpus dir not found: " + dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file())
      paths.push_back(fs::relative(entry.path(), dir).string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Document> docs;
  docs.reserve(paths.size());
  for (const auto& rel : paths) {
    std::ifstream in(fs::path(dir) / rel, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + rel);
    std::stringstream buf;
    buf << in.rdbuf();
    Document doc;
    doc.id = rel;
    doc.sentences = split_sentences(tokenize_whitespace(buf.str()));
    docs.push_back(std::move(doc));
  }
  return docs;
}

namespace {

struct Window {
  size_t start = 0;           // first context sentence
  size_t context_sentences = 0;
  Sentence target;            // trailing punctuation run stripped
};

// Applies the window geometry at one start position: 4 context sentences,
// extended to 5 when 4 hold fewer than min_context_tokens. Returns false
// when no window fits (not enough sentences, context still short, or the
// target sentence is empty after stripping trailing punctuation).
bool make_window(const Document& doc, size_t start, const TokenSet& punctuation,
                 const BuilderOptions& opts, Window* out) {
  auto tokens_in = [&](size_t count) {
    size_t n = 0;
    for (size_t i = start; i < start + count; ++i) n += doc.sentences[i].size();
    return n;
  };
  size_t ctx = opts.base_context_sentences;
  if (start + ctx >= doc.sentences.size()) return false;
  if (tokens_in(ctx) < opts.min_context_tokens) {
    ctx = opts.max_context_sentences;
    if (start + ctx >= doc.sentences.size()) return false;
    if (tokens_in(ctx) < opts.min_context_tokens) return false;
  }
  Sentence target = doc.sentences[start + ctx];
  while (!target.empty() && punctuation.count(target.back())) target.pop_back();
  if (target.empty()) return false;
  out->start = start;
  out->context_sentences = ctx;
  out->target = std::move(target);
  return true;
}

Instance window_to_instance(const Document& doc, const Window& w) {
  Instance inst;
  inst.id = doc.id + ":" + std::to_string(w.start);
  inst.context.assign(doc.sentences.begin() + w.start,
                      doc.sentences.begin() + w.start + w.context_sentences);
  inst.target_sentence = w.target;
  inst.target_word = w.target.back();
  return inst;
}

}  // namespace

std::vector<Instance> build_instances(const std::vector<Document>& corpus,
                                      const TokenSet& punctuation,
                                      const BuilderOptions& opts) {
  std::vector<Instance> out;
  for (const auto& doc : corpus) {
    if (doc.sentences.empty()) continue;
    for (size_t start = 0; start + opts.base_context_sentences < doc.sentences.size();
         ++start) {
      Window w;
      if (!make_window(doc, start, punctuation, opts, &w)) continue;
      if (w.target.size() < opts.min_target_tokens) continue;
      if (punctuation.count(w.target.back())) continue;
      Instance inst = window_to_instance(doc, w);
      if (!answer_in_context(inst)) continue;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

std::vector<Instance> sample_control(const std::vector<Document>& corpus,
                                     const TokenSet& punctuation, size_t n,
                                     uint64_t seed) {
  if (n == 0) throw DataError("control sample size must be at least 1");
  std::vector<Instance> windows;
  for (const auto& doc : corpus) {
    if (doc.sentences.empty()) continue;
    BuilderOptions opts;
    for (size_t start = 0; start + opts.base_context_sentences < doc.sentences.size();
         ++start) {
      Window w;
      if (!make_window(doc, start, punctuation, opts, &w)) continue;
      if (punctuation.count(w.target.back())) continue;
      windows.push_back(window_to_instance(doc, w));
    }
  }
  if (windows.size() < n)
    throw DataError("corpus has only " + std::to_string(windows.size()) +
                    " control windows, need " + std::to_string(n));
  Rng rng(derive_seed(seed, /*tag=*/0xC0117201));
  std::vector<size_t> order(windows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  order.resize(n);
  std::sort(order.begin(), order.end());  // keep corpus order in the sample
  std::vector<Instance> out;
  out.reserve(n);
  for (size_t idx : order) out.push_back(std::move(windows[idx]));
  return out;
}

std::pair<std::vector<Instance>, std::vector<Instance>> split_instances(
    const std::vector<Instance>& instances, const SplitSpec& spec) {
  const size_t n = instances.size();
  const size_t train_n = static_cast<size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));
  Rng rng(derive_seed(spec.rng_seed, /*tag=*/0x59117));
  std::vector<Instance> train, val;
  if (spec.by_document) {
    std::vector<std::string> doc_order;
    std::unordered_map<std::string, std::vector<size_t>> by_doc;
    for (size_t i = 0; i < n; ++i) {
      const auto& id = instances[i].id;
      const auto doc = id.substr(0, id.rfind(':'));
      auto [it, fresh] = by_doc.try_emplace(doc);
      if (fresh) doc_order.push_back(doc);
      it->second.push_back(i);
    }
    rng.shuffle(doc_order);
    size_t assigned = 0;
    for (const auto& doc : doc_order) {
      auto& side = assigned < train_n ? train : val;
      for (size_t i : by_doc[doc]) side.push_back(instances[i]);
      if (assigned < train_n) assigned += by_doc[doc].size();
    }
  } else {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (size_t k = 0; k < n; ++k)
      (k < train_n ? train : val).push_back(instances[order[k]]);
  }
  return {std::move(train), std::move(val)};
}

CorpusStats corpus_stats(const std::vector<Instance>& instances) {
  if (instances.empty()) throw DataError("corpus_stats: no instances");
  CorpusStats stats;
  stats.instance_count = instances.size();
  size_t in_ctx = 0, sent_total = 0, tok_total = 0;
  for (const auto& inst : instances) {
    if (answer_in_context(inst)) ++in_ctx;
    sent_total += inst.context.size();
    tok_total += context_token_count(inst);
  }
  const double n = static_cast<double>(instances.size());
  stats.answer_in_context_fraction = static_cast<double>(in_ctx) / n;
  stats.mean_context_sentences = static_cast<double>(sent_total) / n;
  stats.mean_context_tokens = static_cast<double>(tok_total) / n;
  return stats;
}

}  // namespace cloze
