#include "cloze/reader_gradcheck.hpp"
#include "common.hpp"

namespace cloze::cli {

namespace {

struct GradcheckOpts {
  std::string reader = "all";
  uint64_t seed = 7;
  double eps = 1e-5;
  double tol = 1e-4;
  bool corrupt = false;
  std::string config_path;
};

}  // namespace

void register_gradcheck(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<GradcheckOpts>();
  auto* cmd = app.add_subcommand(
      "gradcheck",
      "Verify analytic reader gradients against central differences (64-bit)");
  cmd->add_option("--reader", opts->reader,
                  "all | stanford | stanford-mod | as | ga")
      ->check(CLI::IsMember({"all", "stanford", "stanford-mod", "as", "ga"}));
  cmd->add_option("--seed", opts->seed, "parameter init seed");
  cmd->add_option("--eps", opts->eps, "finite-difference step");
  cmd->add_option("--tol", opts->tol, "relative tolerance");
  cmd->add_flag("--corrupt", opts->corrupt,
                "negative control: corrupt one gradient and expect failure");
  cmd->add_option("--config", opts->config_path, "config file (JSON)");

  cmd->callback([opts, &rc, invocation]() {
    const Config config = load_config_or_default(opts->config_path);
    const TokenSet punct = load_punctuation(config.resource_dir);
    std::vector<ReaderKind> kinds;
    if (opts->reader == "all")
      kinds = {ReaderKind::Stanford, ReaderKind::StanfordMod,
               ReaderKind::AttentionSum, ReaderKind::GatedAttention};
    else
      kinds = {*reader_kind_from_name(opts->reader)};

    bool all_pass = true;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (ReaderKind kind : kinds) {
      for (bool features : {false, true}) {
        ReaderGradCheckOptions gopts;
        gopts.seed = opts->seed;
        gopts.epsilon = opts->eps;
        gopts.tolerance = opts->tol;
        gopts.corrupt = opts->corrupt;
        const auto report = run_reader_gradcheck(kind, features, punct, gopts);
        all_pass = all_pass && report.pass;
        nlohmann::ordered_json j;
        j["reader"] = reader_kind_name(kind);
        j["features"] = features;
        j["pass"] = report.pass;
        j["coords_checked"] = report.coords_checked;
        j["worst_rel_err"] = report.worst_rel_err;
        j["worst_param"] = report.worst_param;
        j["worst_index"] = report.worst_index;
        results.push_back(j);
        std::cerr << (report.pass ? "PASS " : "FAIL ") << reader_kind_name(kind)
                  << (features ? "+features" : "") << "  worst "
                  << report.worst_param << "[" << report.worst_index
                  << "] rel_err=" << report.worst_rel_err << '\n';
      }
    }
    nlohmann::ordered_json out;
    out["pass"] = all_pass;
    out["tolerance"] = opts->tol;
    out["results"] = results;
    out["invocation"] = invocation;
    std::cout << out.dump(2) << std::endl;
    rc = all_pass ? kOk : kVerifyError;
  });
}

}  // namespace cloze::cli
