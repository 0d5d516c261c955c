#include "cloze/features.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cloze {

PositionFeatures compute_features(const Instance& inst) {
  const auto context = flatten_context(inst);
  const auto query = query_tokens(inst);
  const std::unordered_set<Token> in_query(query.begin(), query.end());
  const Token* blank_left = query.empty() ? nullptr : &query.back();

  std::unordered_map<Token, size_t> frequency;
  std::unordered_map<Token, size_t> first_occurrence;
  for (size_t i = 0; i < context.size(); ++i) {
    auto [it, fresh] = first_occurrence.try_emplace(context[i], i);
    (void)it;
    (void)fresh;
    ++frequency[context[i]];
  }

  PositionFeatures out;
  out.context_length = context.size();
  out.values.assign(context.size() * kNumFeatures, 0.0);
  const double len = static_cast<double>(context.size());
  for (size_t i = 0; i < context.size(); ++i) {
    const Token& w = context[i];
    double* row = out.values.data() + i * kNumFeatures;
    row[0] = in_query.count(w) ? 1.0 : 0.0;
    row[1] = static_cast<double>(frequency[w]);
    row[2] = static_cast<double>(first_occurrence[w]) / len;
    row[3] = (i > 0 && blank_left != nullptr && context[i - 1] == *blank_left)
                 ? 1.0
                 : 0.0;
  }
  return out;
}

}  // namespace cloze
