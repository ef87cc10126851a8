#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chtheta/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Theta-functional Camassa-Holm solutions on real hyperelliptic M-curves"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  for (const char* name : {"solve", "periods", "check-fay", "check-pde"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for relative output paths");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string subcommand = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> out;
  if (!out_dir.empty()) out = out_dir;
  return chtheta::run(subcommand, config, out, std::cout, std::cerr);
}
