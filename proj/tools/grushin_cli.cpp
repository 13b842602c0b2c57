#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grushin/config.hpp"
#include "grushin/experiments.hpp"
#include "grushin/parallel.hpp"

int main(int argc, char** argv)
{
  CLI::App app{"Bilinear Riesz means on Grushin-type spaces: numerical experiments"};
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  app.add_option("command", command, "grid, field, riesz, kernel, verify, thresholds, probe or replay")->required();
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("overrides", overrides, "key=value overrides");
  CLI11_PARSE(app, argc, argv);

  std::string command_line;
  for (int i = 0; i < argc; ++i)
    command_line += (i ? " " : "") + std::string(argv[i]);

  try {
    grushin::Config cfg;
    if (!config_path.empty())
      cfg = grushin::load_config(config_path);
    std::string text;
    for (const auto& o : overrides)
      text += o + "\n";
    for (const auto& [k, v] : grushin::parse_config(text))
      cfg[k] = v;
    if (grushin::has_key(cfg, "workers"))
      grushin::set_worker_count(static_cast<int>(grushin::get_int(cfg, "workers")));
    if (const char* env = std::getenv("GRUSHIN_WORKERS"); env && std::atoi(env) > 0)
      grushin::set_worker_count(std::atoi(env));
    return grushin::run_command(command, cfg, out_dir, command_line, std::cout);
  } catch (const grushin::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
