#include "cloze/builder.hpp"
#include "common.hpp"

namespace cloze::cli {

namespace {

struct BuildDataOpts {
  std::string corpus_dir;
  std::string out_path;
  std::string val_out;
  std::string control_out;
  size_t control_n = 1000;
  double train_fraction = 1618782.0 / 1827123.0;
  uint64_t seed = 0;
  bool split_by_doc = false;
  std::string config_path;
};

void write_sidecar_meta(const std::string& data_path, const std::string& invocation,
                        const nlohmann::ordered_json& details) {
  nlohmann::ordered_json meta;
  meta["invocation"] = invocation;
  meta["details"] = details;
  std::ofstream out(data_path + ".meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace

void register_build_data(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<BuildDataOpts>();
  auto* cmd = app.add_subcommand(
      "build-data", "Scan a tokenized corpus and emit cloze instances");
  cmd->add_option("--corpus", opts->corpus_dir, "corpus directory (one document per file)")
      ->required();
  cmd->add_option("--out", opts->out_path, "training instances output (JSON Lines)")
      ->required();
  cmd->add_option("--val-out", opts->val_out, "validation split output");
  cmd->add_option("--train-fraction", opts->train_fraction,
                  "train share of the split (default 1618782/1827123)");
  cmd->add_option("--seed", opts->seed, "split/sampling seed");
  cmd->add_flag("--split-by-doc", opts->split_by_doc,
                "assign whole documents to one side of the split");
  cmd->add_option("--control-out", opts->control_out,
                  "also write an unfiltered control sample here");
  cmd->add_option("--control-n", opts->control_n, "control sample size");
  cmd->add_option("--config", opts->config_path, "config file (JSON)");

  cmd->callback([opts, &rc, invocation]() {
    const Config config = load_config_or_default(opts->config_path);
    const TokenSet punct = load_punctuation(config.resource_dir);
    const auto corpus = read_corpus_dir(opts->corpus_dir);
    auto instances = build_instances(corpus, punct);
    if (instances.empty())
      throw DataError("no instances pass the filters in " + opts->corpus_dir);

    const auto stats = corpus_stats(instances);
    nlohmann::ordered_json out_json;
    out_json["instances"] = stats.instance_count;
    out_json["answer_in_context_fraction"] = stats.answer_in_context_fraction;
    out_json["mean_context_sentences"] = stats.mean_context_sentences;
    out_json["mean_context_tokens"] = stats.mean_context_tokens;

    nlohmann::ordered_json details;
    details["corpus"] = opts->corpus_dir;
    details["seed"] = opts->seed;
    details["train_fraction"] = opts->train_fraction;

    if (!opts->val_out.empty()) {
      SplitSpec spec;
      spec.train_fraction = opts->train_fraction;
      spec.rng_seed = opts->seed;
      spec.by_document = opts->split_by_doc;
      auto [train, val] = split_instances(instances, spec);
      write_instances(train, opts->out_path);
      write_instances(val, opts->val_out);
      write_sidecar_meta(opts->out_path, invocation, details);
      write_sidecar_meta(opts->val_out, invocation, details);
      out_json["train_count"] = train.size();
      out_json["val_count"] = val.size();
    } else {
      write_instances(instances, opts->out_path);
      write_sidecar_meta(opts->out_path, invocation, details);
      out_json["train_count"] = instances.size();
      out_json["val_count"] = 0;
    }

    if (!opts->control_out.empty()) {
      auto control = sample_control(corpus, punct, opts->control_n, opts->seed);
      write_instances(control, opts->control_out);
      write_sidecar_meta(opts->control_out, invocation, details);
      const auto cstats = corpus_stats(control);
      out_json["control"] = {
          {"count", cstats.instance_count},
          {"answer_in_context_fraction", cstats.answer_in_context_fraction}};
    }
    out_json["invocation"] = invocation;
    std::cout << out_json.dump(2) << std::endl;
    rc = kOk;
  });
}

}  // namespace cloze::cli
