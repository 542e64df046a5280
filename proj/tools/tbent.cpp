#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbent/errors.hpp"
#include "tbent/io.hpp"

namespace {

// Every RunConfig key is also a flag of the same name.
const std::vector<std::string> kFlagKeys = {
    "family", "N",           "t",       "boundary",     "lambda", "alpha_pi", "nu",      "Va",     "Vb",
    "q",      "alpha",       "W",       "mu",           "J",      "distance", "seed",    "method", "samples",
    "samples_by_N", "bins",  "e_min",   "e_max",        "binning", "realization", "sweep_param", "grid",
    "sizes",  "threshold",   "output",  "format",       "plot_dir", "threads"};

struct Invocation {
  std::string config_file;
  std::string from_output;
  std::map<std::string, std::string> flags;
};

void add_common(CLI::App* sub, Invocation& inv) {
  sub->add_option("-c,--config", inv.config_file, "config file of key = value lines");
  sub->add_option("--from-output", inv.from_output, "re-run the config embedded in a previous output file");
  for (const auto& key : kFlagKeys)
    sub->add_option((key == "output" ? "-o,--" : "--") + key, inv.flags[key], "config key " + key);
}

int run(tbent::Command command, const Invocation& inv) {
  tbent::KeyValues entries;
  if (!inv.from_output.empty()) {
    const auto embedded = tbent::extract_embedded_config(tbent::read_text_file(inv.from_output));
    entries = tbent::parse_key_values(embedded);
  }
  if (!inv.config_file.empty()) {
    const auto more = tbent::parse_key_values(tbent::read_text_file(inv.config_file));
    entries.insert(entries.end(), more.begin(), more.end());
  }
  for (const auto& [k, v] : entries)
    if (k == "command" && v != tbent::to_string(command))
      throw tbent::ConfigError("command: config says '" + v + "' but the '" + std::string(tbent::to_string(command)) +
                               "' subcommand was invoked");
  entries.emplace_back("command", std::string(tbent::to_string(command)));
  for (const auto& key : kFlagKeys)
    if (const auto& v = inv.flags.at(key); !v.empty()) entries.emplace_back(key, v);

  const auto config = tbent::parse_config(entries);
  std::cerr << tbent::config_text(config, "# ");

  const auto output = tbent::execute(config);
  const auto text = tbent::render(config, output);
  if (config.output.empty()) {
    std::cout << text;
  } else {
    tbent::write_text_file(config.output, text);
  }
  if (!config.plot_dir.empty()) tbent::emit_plot_data(config.plot_dir, config, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mode-entanglement concurrence of one-dimensional tight-binding chains"};
  app.require_subcommand(1);

  const std::vector<std::pair<tbent::Command, std::string>> commands = {
      {tbent::Command::Spectrum, "diagonalize one realization, per-state concurrence"},
      {tbent::Command::Ensemble, "disorder-averaged concurrence binned in energy"},
      {tbent::Command::Sweep, "spectrum-averaged concurrence over a parameter grid"},
      {tbent::Command::Edges, "mobility edges from the binned ensemble curve"}};

  std::map<tbent::Command, Invocation> invocations;
  std::map<tbent::Command, CLI::App*> subs;
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(std::string(tbent::to_string(cmd)), help);
    add_common(sub, invocations[cmd]);
    subs[cmd] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [cmd, sub] : subs)
      if (sub->parsed()) return run(cmd, invocations.at(cmd));
  } catch (const tbent::ConvergenceFailure& e) {
    std::cerr << "numerical failure: " << e.what();
    if (e.realization) std::cerr << " (realization " << *e.realization << ")";
    std::cerr << "\n";
    return 3;
  } catch (const tbent::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tbent::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
