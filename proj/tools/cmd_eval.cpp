#include <filesystem>

#include "cloze/eval.hpp"
#include "cloze/parallel.hpp"
#include "reader_runtime.hpp"

namespace cloze::cli {

namespace {

struct EvaluateOpts {
  std::string model_path;
  std::string data_path;
  std::string config_path;
  std::string name;
  size_t topk = 3;
  bool labels = false;
  size_t jobs = 1;
};

struct PredictOpts {
  std::string model_path;
  std::string data_path;
  std::string config_path;
  size_t topk = 3;
  bool strict = false;
};

struct CompareOpts {
  std::string reports_dir;
  bool json = false;
};

}  // namespace

void register_evaluate(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<EvaluateOpts>();
  auto* cmd = app.add_subcommand("evaluate", "Score a reader checkpoint on a dataset");
  cmd->add_option("--model", opts->model_path, "reader checkpoint")->required();
  cmd->add_option("--data", opts->data_path, "instances (.jsonl) or passages")
      ->required();
  cmd->add_option("--topk", opts->topk, "largest k for top-k accuracy");
  cmd->add_flag("--labels", opts->labels, "slice accuracy by phenomenon label");
  cmd->add_option("--config", opts->config_path, "config file (JSON)");
  cmd->add_option("--name", opts->name, "report name (default: model file stem)");
  cmd->add_option("--jobs", opts->jobs, "worker threads for prediction");

  cmd->callback([opts, &rc, invocation]() {
    const Config config = load_config_or_default(opts->config_path);
    const TokenSet punct = load_punctuation(config.resource_dir);
    const auto instances = read_eval_data(opts->data_path, punct);
    if (instances.empty()) throw DataError("no instances in " + opts->data_path);
    LoadedReader reader = load_reader(opts->model_path, punct);

    std::vector<std::optional<Prediction>> preds(instances.size());
    parallel_for(instances.size(), opts->jobs,
                 [&](size_t i) { preds[i] = reader.predict(instances[i]); });
    const auto report = evaluate(
        instances,
        [&](const Instance& inst) {
          const size_t idx = static_cast<size_t>(&inst - instances.data());
          return preds[idx];
        },
        static_cast<int>(opts->topk), opts->labels);

    nlohmann::ordered_json j;
    j["name"] = opts->name.empty()
                    ? std::filesystem::path(opts->model_path).stem().string()
                    : opts->name;
    const auto body = report_to_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    j["invocation"] = invocation;
    std::cout << j.dump(2) << std::endl;
    rc = kOk;
  });
}

void register_predict(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<PredictOpts>();
  auto* cmd = app.add_subcommand(
      "predict", "Emit ranked candidates per passage as JSON Lines");
  cmd->add_option("--model", opts->model_path, "reader checkpoint")->required();
  cmd->add_option("--data", opts->data_path, "instances (.jsonl) or passages")
      ->required();
  cmd->add_option("--topk", opts->topk, "candidates per instance");
  cmd->add_flag("--strict", opts->strict, "malformed lines fail the run");
  cmd->add_option("--config", opts->config_path, "config file (JSON)");

  cmd->callback([opts, &rc, invocation]() {
    (void)invocation;
    const Config config = load_config_or_default(opts->config_path);
    const TokenSet punct = load_punctuation(config.resource_dir);
    LoadedReader reader = load_reader(opts->model_path, punct);
    size_t failures = 0;

    auto emit = [&](const Instance& inst) {
      nlohmann::ordered_json j;
      j["id"] = inst.id;
      const auto pred = reader.predict(inst);
      nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
      if (pred) {
        const size_t k = std::min(opts->topk, pred->ranked.size());
        for (size_t i = 0; i < k; ++i)
          ranked.push_back({{"token", pred->ranked[i].token},
                            {"score", pred->ranked[i].score}});
      }
      j["ranked"] = ranked;
      j["gold"] = inst.target_word;
      std::cout << j.dump() << '\n';
    };

    const bool jsonl = opts->data_path.size() >= 6 &&
                       opts->data_path.substr(opts->data_path.size() - 6) == ".jsonl";
    if (jsonl) {
      InstanceReader in(opts->data_path);
      while (auto inst = in.next()) emit(*inst);
    } else {
      std::ifstream in(opts->data_path);
      if (!in) throw DataError("cannot open data file: " + opts->data_path);
      std::string line;
      size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
          emit(parse_passage_line(line, punct,
                                  opts->data_path + ":" + std::to_string(lineno)));
        } catch (const DataError& e) {
          ++failures;
          nlohmann::ordered_json j;
          j["line"] = lineno;
          j["error"] = e.what();
          std::cout << j.dump() << '\n';
        }
      }
    }
    rc = (opts->strict && failures > 0) ? kDataError : kOk;
  });
}

void register_compare(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<CompareOpts>();
  auto* cmd = app.add_subcommand(
      "compare", "Tabulate evaluation reports from a directory");
  cmd->add_option("--reports", opts->reports_dir, "directory of report JSON files")
      ->required();
  cmd->add_flag("--json", opts->json, "emit the table as JSON");

  cmd->callback([opts, &rc, invocation]() {
    (void)invocation;
    namespace fs = std::filesystem;
    if (!fs::is_directory(opts->reports_dir))
      throw DataError("not a directory: " + opts->reports_dir);
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(opts->reports_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<NamedReport> reports;
    for (const auto& p : paths) {
      std::ifstream in(p);
      nlohmann::ordered_json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw DataError("bad report " + p + ": " + e.what());
      }
      NamedReport nr;
      nr.name = j.contains("name") ? j["name"].get<std::string>()
                                   : fs::path(p).stem().string();
      nr.report = report_from_json(j);
      reports.push_back(std::move(nr));
    }
    if (reports.empty()) throw DataError("no .json reports in " + opts->reports_dir);
    if (opts->json)
      std::cout << comparison_json(reports).dump(2) << std::endl;
    else
      std::cout << comparison_table(reports);
    rc = kOk;
  });
}

}  // namespace cloze::cli
