#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "teichlab/experiments.hpp"

using namespace teichlab;

namespace {

void print_catalogue(std::ostream& os) {
  std::size_t width = 0;
  for (const auto& e : experiment_catalogue()) width = std::max(width, e.name.size());
  for (const auto& e : experiment_catalogue()) os << e.name << std::string(width + 2 - e.name.size(), ' ') << e.description << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teich-lab: experiments on interval exchanges and the SL(2,R) action on translation surfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  auto* list = app.add_subcommand("list", "list the experiments");
  bool as_json = false;
  list->add_flag("--json", as_json, "print the catalogue as JSON");

  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  run->add_option("config", config_path, "config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory (overrides out_dir)");
  auto* seed_opt = run->add_option("--seed", seed, "seed (overrides the config)");
  auto* threads_opt = run->add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*list) {
    if (as_json)
      std::cout << catalogue_json().dump(2) << "\n";
    else
      print_catalogue(std::cout);
    return 0;
  }

  try {
    const Json config = read_json_file(config_path);
    if (config.is_object() && config.contains("experiment") && config["experiment"].is_string() &&
        !find_experiment(config["experiment"].get<std::string>())) {
      std::cerr << "unknown experiment '" << config["experiment"].get<std::string>() << "'; available:\n";
      print_catalogue(std::cerr);
      return 2;
    }
    RunOptions opt;
    if (*out_opt) opt.out_dir = out_dir;
    if (*seed_opt) opt.seed = seed;
    if (*threads_opt) opt.threads = threads;
    const auto res = run_experiment(config, opt);
    std::cout << res.summary.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << Json{{"status", "error"}, {"error", errc_name(e.code())}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << Json{{"status", "error"}, {"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
