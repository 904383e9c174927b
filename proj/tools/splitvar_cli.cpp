#include <iostream>

#include "CLI11.hpp"
#include "splitvar/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Split-density variational experiments"};
  std::string config;
  splitvar::cli::RunOptions opts;
  app.add_option("--config", config, "experiment config (JSON)")->required();
  app.add_option("--threads", opts.threads, "worker threads for cell loops")
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict", opts.strict, "treat warnings as failures");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : splitvar::cli::kValidation;
  }
  return splitvar::cli::run_file(config, opts, std::cout, std::cerr);
}
