#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tbent/ensemble.hpp"
#include "tbent/entanglement.hpp"
#include "tbent/sweep.hpp"

namespace tbent {

enum class Command { Spectrum, Ensemble, Sweep, Edges };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c);
Command parse_command(std::string_view s);

/// A grid as written in the config ("start:stop:step" or a comma list) and
/// the values it expands to.
struct GridSpec {
  std::string text;
  std::vector<double> values;
};

GridSpec parse_grid(std::string_view text);

struct RunConfig {
  Command command = Command::Spectrum;
  ModelParams model;
  /// Realization solved by the spectrum command.
  std::uint64_t realization = 0;
  EnsembleSpec ensemble;  // ensemble.params mirrors model
  SweepParameter sweep_parameter = SweepParameter::Lambda;
  GridSpec grid;
  std::vector<int> sizes;
  std::map<int, int> samples_by_size;
  double threshold = 0.8;

  std::filesystem::path output;
  OutputFormat format = OutputFormat::Csv;
  std::filesystem::path plot_dir;

  SweepSpec sweep_spec() const;
};

/// Ordered key -> value pairs, as read from a config file or flags.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; '#' starts a comment, "#!" lines are embedded
/// provenance and are read like plain lines.
KeyValues parse_key_values(std::string_view text);

/// Validates and resolves every key. Later duplicates override earlier ones.
/// Unknown keys, keys that do not apply to the family or command, missing
/// required keys and out-of-range values raise ConfigError naming the key.
RunConfig parse_config(const KeyValues& entries);
RunConfig parse_config(std::string_view text);

/// Canonical, fully resolved configuration (defaults included). Output
/// location keys are left out since they do not affect results. Feeding
/// the text back to parse_config reproduces the same run.
KeyValues resolved_config(const RunConfig& config);
std::string config_text(const RunConfig& config, std::string_view line_prefix = "");

/// The "#! key = value" block of a CSV output, or the "config" object of a
/// JSON output, as config text.
std::string extract_embedded_config(std::string_view file_text);

/// Shortest-exact: 17 significant digits, locale independent.
std::string format_double(double x);
double parse_double(std::string_view s, std::string_view key = "value");

/// Results of one run, ready to serialize.
struct RunOutput {
  std::optional<ConcurrenceReport> spectrum;
  std::optional<EnsembleResult> ensemble;
  std::optional<SweepResult> sweep;
  std::optional<MobilityEdgeEstimate> edges;
};

RunOutput execute(const RunConfig& config);

/// File contents for `output` in config.format, provenance embedded.
std::string render(const RunConfig& config, const RunOutput& output);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// One whitespace-delimited file per series plus manifest.txt listing them
/// in ascending N. Returns the series file paths in manifest order.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir, const RunConfig& config,
                                                  const RunOutput& output);

/// Rows of a CSV written by render(), keyed by column name; empty fields
/// read back as NaN.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(std::string_view text);

}  // namespace tbent
