#include "common.hpp"

using namespace cloze;
using namespace cloze::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "cloze - build last-word prediction datasets from raw text, train\n"
      "attention readers and language-model baselines, and evaluate them.\n"};
  app.require_subcommand(1);
  app.footer(Config::help_text());

  int rc = kOk;
  const std::string invocation = join_invocation(argc, argv);
  register_build_data(app, rc, invocation);
  register_train(app, rc, invocation);
  register_evaluate(app, rc, invocation);
  register_predict(app, rc, invocation);
  register_compare(app, rc, invocation);
  register_baseline(app, rc, invocation);
  register_gradcheck(app, rc, invocation);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const VerifyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return rc;
}
