#include <iostream>

#include "CLI11.hpp"
#include "skewlab/cli.hpp"

int main(int argc, char** argv) {
  using namespace skewlab;
  CLI::App app{"skewlab: skew products over torus rotations and flows"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  RunRequest req;
  std::uint64_t seed = 0;
  std::string config, out;
  std::vector<CLI::App*> subs;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "config file")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out, "output directory");
    subs.push_back(sub);
  }
  std::string emit_dir;
  CLI::App* emit = app.add_subcommand("emit-examples", "write the shipped example configs");
  emit->add_option("--out", emit_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (emit->parsed()) {
    try {
      for (const auto& p : emit_example_configs(emit_dir)) std::cout << p.string() << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    return 0;
  }
  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    req.command = sub->get_name();
    req.config = config;
    if (sub->count("--seed")) req.seed = seed;
    if (sub->count("--out")) req.out = out;
  }
  return run_command(req, std::cout, std::cerr);
}
