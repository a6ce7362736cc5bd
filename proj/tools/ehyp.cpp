// ehyp: run one experiment from a JSON config or from command-line flags.
//
//   ehyp --config run.json
//   ehyp verify-sympos --c 2 --output report.json
//
// Flags after the command become config keys; values are parsed as JSON
// when possible (numbers, booleans, arrays), otherwise kept as strings.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ehyp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"elliptic-hyperbolic toolkit"};
  std::string config_path;
  std::string command;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("command", command, "command name (overrides the config's)");
  app.allow_extras();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : ehyp::cli::kConfig;
  }

  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) {
    try {
      cfg = nlohmann::json::parse(ehyp::read_text(config_path));
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return ehyp::cli::kConfig;
    }
  }
  if (!command.empty()) cfg["command"] = command;

  const std::vector<std::string> extras = app.remaining();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& flag = extras[i];
    if (flag.rfind("--", 0) != 0 || i + 1 >= extras.size()) {
      std::cerr << "config error: expected '--key value', got '" << flag << "'\n";
      return ehyp::cli::kConfig;
    }
    const std::string value = extras[++i];
    try {
      cfg[flag.substr(2)] = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
      cfg[flag.substr(2)] = value;
    }
  }
  return ehyp::cli::run(cfg, std::cout, std::cerr);
}
