// Command line front end: run, compare, validate-config.
#include "regpath/experiment.hpp"
#include "regpath/front_io.hpp"
#include "regpath/log.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

void print_issues(const regpath::ConfigError& e) {
  std::cerr << "config validation failed:\n";
  for (const auto& s : e.issues()) std::cerr << "  " << s << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularization path tracing for l1-regularized models"};
  app.require_subcommand(1);

  std::string config_path, out_dir, front_a, front_b, report_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "config file (JSON)")->required();
  run->add_option("--out", out_dir, "output root (default: paths.output_dir)");
  run->add_option("--seed", seed, "overrides the config seed");
  run->add_flag("--quiet", quiet, "suppress log output; the run directory is still printed");

  auto* cmp = app.add_subcommand("compare", "compare two exported fronts");
  cmp->add_option("front_a", front_a, "first front CSV")->required();
  cmp->add_option("front_b", front_b, "second front CSV")->required();
  cmp->add_option("--out", report_path, "write the JSON report here as well");
  cmp->add_flag("--quiet", quiet, "suppress stdout report");

  auto* val = app.add_subcommand("validate-config", "check a config without running it");
  val->add_option("--config", config_path, "config file (JSON)")->required();
  val->add_option("--seed", seed, "overrides the config seed");
  val->add_flag("--quiet", quiet, "suppress the resolved config on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }
  regpath::set_quiet(quiet);

  try {
    if (*val) {
      const auto cfg = regpath::load_config(config_path, seed);
      if (!quiet) std::cout << cfg.resolved.dump(2) << '\n';
      return kOk;
    }
    if (*run) {
      const auto cfg = regpath::load_config(config_path, seed);
      regpath::log_info("running " + config_path);
      const auto outcome = regpath::run_experiment(cfg, out_dir);
      std::cout << outcome.run_dir.string() << '\n';
      return kOk;
    }
    if (*cmp) {
      const auto report = regpath::compare_front_files(front_a, front_b, report_path);
      if (!quiet) std::cout << report.dump(2) << '\n';
      return kOk;
    }
  } catch (const regpath::ConfigError& e) {
    print_issues(e);
    return kValidation;
  } catch (const regpath::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
