#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xic/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"signed reduced discriminant contours for exponential sums"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir = "out";
  int workers = 1;
  double window = 0.0;
  int grid = 0;

  const auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--config", configPath, "job file")->required();
    cmd->add_option("--out", outDir, "output directory");
    cmd->add_option("--workers", workers, "worker threads for independent sign classes");
    cmd->add_option("--window", window, "override the window half width");
    cmd->add_option("--grid", grid, "override the evaluation grid");
  };
  CLI::App* cmdContour =
      app.add_subcommand("contour", "trace signed contours to CSV and SVG");
  CLI::App* cmdChambers =
      app.add_subcommand("chambers", "count chambers and write report.json");
  CLI::App* cmdVerify =
      app.add_subcommand("verify", "run the full property suite");
  CLI::App* cmdBounds =
      app.add_subcommand("bounds", "print the closed form bounds");
  for (CLI::App* cmd : {cmdContour, cmdChambers, cmdVerify, cmdBounds})
    addCommon(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    xic::JobConfig cfg = xic::parseConfigFile(configPath);
    if (window > 0.0) cfg.window = window;
    if (grid > 0) cfg.grid = grid;

    if (cmdContour->parsed()) {
      xic::runContourCommand(cfg, outDir, workers);
    } else if (cmdChambers->parsed()) {
      xic::runChambersCommand(cfg, outDir, workers);
    } else if (cmdVerify->parsed()) {
      return xic::runVerifyCommand(cfg, outDir, workers, std::cout);
    } else if (cmdBounds->parsed()) {
      std::cout << xic::boundsTable(cfg);
    }
    return 0;
  } catch (const xic::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
