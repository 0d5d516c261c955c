#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloze/prediction.hpp"
#include "cloze/types.hpp"

namespace cloze {

struct LabelSlice {
  size_t count = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  size_t n_total = 0;
  size_t n_answer_in_context = 0;
  double accuracy_all = 0.0;
  double accuracy_context = 0.0;  // over answer-in-context instances only
  std::map<int, double> top_k;    // top_k[1] == accuracy_all
  std::map<std::string, LabelSlice> per_label;
  bool has_labels = false;
};

/// Returns a prediction or abstains; abstentions count as wrong.
using PredictFn = std::function<std::optional<Prediction>(const Instance&)>;

/// Exact-match, case-sensitive accuracy over all instances and over the
/// answer-in-context subset, with top-k for k = 1..max_k. Throws DataError
/// on an empty instance list.
EvalReport evaluate(const std::vector<Instance>& instances,
                    const PredictFn& predict, int max_k = 3,
                    bool slice_labels = false);

/// Per-label accuracy over instances bearing each label; instances with
/// several labels contribute to every one of them.
std::map<std::string, LabelSlice> slice_by_label(
    const std::vector<Instance>& instances,
    const std::vector<bool>& correct);

nlohmann::ordered_json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::ordered_json& j);

struct NamedReport {
  std::string name;
  EvalReport report;
};

/// Aligned text table sorted by accuracy_all descending; ties keep name
/// order.
std::string comparison_table(std::vector<NamedReport> reports);
nlohmann::ordered_json comparison_json(std::vector<NamedReport> reports);

}  // namespace cloze
