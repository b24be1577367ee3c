#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <CLI11.hpp>
#include "viscowave/cli.hpp"
#include "viscowave/parallel.hpp"

int main(int argc, char **argv)
{
  CLI::App app{"Spectral-Galerkin boundary control of viscoelastic waves"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  for (const auto &name : viscowave::cli::Commands())
  {
    auto *sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads (default VISCOWAVE_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : viscowave::cli::kParseError;
  }

  if (threads == 0)
  {
    if (const char *env = std::getenv("VISCOWAVE_THREADS"))
    {
      threads = std::atoi(env);
    }
  }
  if (threads > 0)
  {
    viscowave::SetWorkerThreads(threads);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return viscowave::cli::RunMain(command, config_path,
                                 out_dir.empty() ? std::nullopt
                                                 : std::optional<std::filesystem::path>(out_dir));
}
