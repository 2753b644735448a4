#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uavlos/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"UAV-to-UAV line-of-sight blockage toolkit"};
  app.set_version_flag("--version", std::string("uavlos ") + UAVLOS_VERSION);

  std::string verb;
  std::string config_path;
  std::string out_dir;
  std::string trace_input;
  unsigned threads = 0;
  app.add_option("verb", verb, "Command to run")
      ->required()
      ->check(CLI::IsMember(uavlos::command_verbs()));
  app.add_option("-c,--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "Output directory (overrides out_dir)");
  app.add_option("--trace", trace_input,
                 "Trace CSV for fit-markov (default <out_dir>/trace.csv)");
  app.add_option("-j,--threads", threads, "Worker threads (0: all cores)");
  CLI11_PARSE(app, argc, argv);

  uavlos::RunConfig cfg;
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    cfg = uavlos::parse_config(text);
  } catch (const uavlos::ConfigError& e) {
    std::cerr << "uavlos: " << config_path << ": " << e.what() << '\n';
    return 2;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  cfg.sweep.workers = threads;

  return uavlos::run_command(verb, cfg, {trace_input}, std::cout, std::cerr);
}
