#include "cloze/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "cloze/error.hpp"

namespace cloze {

EvalReport evaluate(const std::vector<Instance>& instances,
                    const PredictFn& predict, int max_k, bool slice_labels) {
  if (instances.empty()) throw DataError("evaluate: no instances");
  if (max_k < 1) throw DataError("evaluate: max_k must be >= 1");
  EvalReport report;
  report.n_total = instances.size();
  std::vector<size_t> topk_hits(static_cast<size_t>(max_k), 0);
  size_t context_hits = 0;
  std::vector<bool> correct(instances.size(), false);
  for (size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const bool in_ctx = answer_in_context(inst);
    if (in_ctx) ++report.n_answer_in_context;
    const auto pred = predict(inst);
    if (pred.has_value() && !pred->ranked.empty()) {
      for (int k = 1; k <= max_k; ++k)
        if (pred->has_in_top(inst.target_word, static_cast<size_t>(k)))
          ++topk_hits[static_cast<size_t>(k - 1)];
      if (pred->top() == inst.target_word) {
        correct[i] = true;
        if (in_ctx) ++context_hits;
      }
    }
  }
  const double n = static_cast<double>(report.n_total);
  report.accuracy_all = static_cast<double>(topk_hits[0]) / n;
  report.accuracy_context =
      report.n_answer_in_context == 0
          ? 0.0
          : static_cast<double>(context_hits) /
                static_cast<double>(report.n_answer_in_context);
  for (int k = 1; k <= max_k; ++k)
    report.top_k[k] = static_cast<double>(topk_hits[static_cast<size_t>(k - 1)]) / n;
  if (slice_labels) {
    report.per_label = slice_by_label(instances, correct);
    report.has_labels = !report.per_label.empty();
  }
  return report;
}

std::map<std::string, LabelSlice> slice_by_label(
    const std::vector<Instance>& instances, const std::vector<bool>& correct) {
  std::map<std::string, std::pair<size_t, size_t>> acc;  // label -> (count, hits)
  for (size_t i = 0; i < instances.size(); ++i) {
    for (const auto& label : instances[i].labels) {
      auto& slot = acc[label];
      ++slot.first;
      if (correct[i]) ++slot.second;
    }
  }
  std::map<std::string, LabelSlice> out;
  for (const auto& [label, counts] : acc)
    out[label] = {counts.first, static_cast<double>(counts.second) /
                                    static_cast<double>(counts.first)};
  return out;
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["n_total"] = report.n_total;
  j["n_answer_in_context"] = report.n_answer_in_context;
  j["accuracy_all"] = report.accuracy_all;
  j["accuracy_context"] = report.accuracy_context;
  nlohmann::ordered_json topk;
  for (const auto& [k, v] : report.top_k) topk[std::to_string(k)] = v;
  j["top_k"] = topk;
  if (report.has_labels) {
    nlohmann::ordered_json labels;
    for (const auto& [label, slice] : report.per_label)
      labels[label] = {{"count", slice.count}, {"accuracy", slice.accuracy}};
    j["per_label"] = labels;
  }
  return j;
}

EvalReport report_from_json(const nlohmann::ordered_json& j) {
  EvalReport report;
  report.n_total = j.at("n_total").get<size_t>();
  report.n_answer_in_context = j.at("n_answer_in_context").get<size_t>();
  report.accuracy_all = j.at("accuracy_all").get<double>();
  report.accuracy_context = j.at("accuracy_context").get<double>();
  for (const auto& [k, v] : j.at("top_k").items())
    report.top_k[std::stoi(k)] = v.get<double>();
  if (j.contains("per_label")) {
    report.has_labels = true;
    for (const auto& [label, slice] : j.at("per_label").items())
      report.per_label[label] = {slice.at("count").get<size_t>(),
                                 slice.at("accuracy").get<double>()};
  }
  return report;
}

namespace {

void sort_reports(std::vector<NamedReport>& reports) {
  std::sort(reports.begin(), reports.end(),
            [](const NamedReport& a, const NamedReport& b) {
              if (a.report.accuracy_all != b.report.accuracy_all)
                return a.report.accuracy_all > b.report.accuracy_all;
              return a.name < b.name;
            });
}

}  // namespace

std::string comparison_table(std::vector<NamedReport> reports) {
  if (reports.empty()) throw DataError("compare: no reports");
  sort_reports(reports);
  size_t name_width = 6;
  for (const auto& r : reports) name_width = std::max(name_width, r.name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "method"
      << "  " << std::right << std::setw(8) << "all" << std::setw(10)
      << "context" << std::setw(8) << "n" << '\n';
  out << std::string(name_width + 28, '-') << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& r : reports) {
    out << std::left << std::setw(static_cast<int>(name_width)) << r.name << "  "
        << std::right << std::setw(8) << r.report.accuracy_all << std::setw(10)
        << r.report.accuracy_context << std::setw(8) << r.report.n_total << '\n';
  }
  return out.str();
}

nlohmann::ordered_json comparison_json(std::vector<NamedReport> reports) {
  sort_reports(reports);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j = report_to_json(r.report);
    nlohmann::ordered_json row;
    row["name"] = r.name;
    for (auto& [k, v] : j.items()) row[k] = v;
    arr.push_back(row);
  }
  return arr;
}

}  // namespace cloze
