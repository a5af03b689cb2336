#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"

using namespace qclab::cli;

int main(int argc, char** argv) {
  CLI::App app{"qclab: Beltrami solver and verification harness"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&)> run;

  auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Options&), bool needs_manifest) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* man = sub->add_option("--manifest", o.manifest, "manifest JSON");
    if (needs_manifest) man->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed (overrides the manifest)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->callback([&, fn, sub] {
      o.seed_given = sub->count("--seed") > 0;
      run = fn;
    });
  };
  add("solve", "solve a Beltrami problem", cmd_solve, true);
  add("verify", "run a verification suite (default suite without --manifest)", cmd_verify, false);
  add("whitney", "build and audit a Whitney covering", cmd_whitney, true);
  add("norms", "evaluate norms of a field", cmd_norms, true);
  add("report", "summarize the verification CSVs in --out", cmd_report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return run(o);
  } catch (const qclab::Error& e) {
    std::cerr << "qclab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qclab: bad manifest: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qclab: " << e.what() << "\n";
    return 2;
  }
}
