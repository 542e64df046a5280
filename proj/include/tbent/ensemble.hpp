#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tbent/eigensolve.hpp"
#include "tbent/lattice.hpp"

namespace tbent {

enum class BinningMode {
  /// Uniform energy bins.
  Energy,
  /// One bin per eigenstate index beta, centred at the mean energy of beta.
  StateIndex,
};

struct EnergyRange {
  double min;
  double max;
};

struct EnsembleSpec {
  ModelParams params;
  int samples = 1;
  int energy_bins = 100;
  std::optional<EnergyRange> energy_range;
  std::uint64_t base_seed = 0;
  BinningMode binning = BinningMode::Energy;
  /// Sweeps only need the global average; skip per-state scatter.
  bool collect_states = true;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 0;
  SolverOptions solver{EigenMethod::InverseIteration, false};

  /// Sample count actually used: deterministic families need only one.
  int effective_samples() const { return params.is_deterministic() ? 1 : samples; }

  void validate() const;
};

/// Ensemble-averaged N<C^beta> against energy. Empty bins have count 0 and
/// NaN mean/stderr; writers omit them.
struct BinnedCurve {
  std::vector<double> bin_centers;
  std::vector<double> mean_scaled_concurrence;
  std::vector<double> std_error;
  std::vector<std::size_t> counts;
  EnergyRange range{0.0, 0.0};
  std::size_t out_of_range = 0;

  std::size_t size() const noexcept { return bin_centers.size(); }
  bool populated(std::size_t i) const noexcept { return counts[i] > 0; }
  std::size_t populated_count() const;
};

struct GlobalStats {
  double mean = 0.0;    // mean over realizations of N<C>
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  int samples = 0;
};

/// Everything one disorder realization contributes.
struct RealizationResult {
  std::uint64_t index = 0;
  std::vector<double> energies;
  std::vector<double> scaled_concurrence;  // N<C^beta>, aligned with energies
  double scaled_global = 0.0;               // N<C>
};

/// Solves one realization: build, diagonalize, concurrence.
RealizationResult run_realization(const EnsembleSpec& spec, std::uint64_t index);

/// Realization results keyed by index. Merging is a set union, so partial
/// accumulators over disjoint index sets combine in any order to the same
/// final result.
class EnsembleAccumulator {
 public:
  void add(RealizationResult r);
  void merge(const EnsembleAccumulator& other);
  std::size_t size() const noexcept { return results_.size(); }
  const std::map<std::uint64_t, RealizationResult>& results() const noexcept { return results_; }

  GlobalStats global_stats() const;
  BinnedCurve binned(const EnsembleSpec& spec) const;

 private:
  std::map<std::uint64_t, RealizationResult> results_;
};

struct EnsembleResult {
  BinnedCurve curve;  // empty when spec.collect_states is false
  GlobalStats global;
};

/// Runs realizations 0..samples-1 on a worker pool. Output does not depend
/// on the worker count.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

/// Accumulator for realizations [first, last); building block for
/// distributing one ensemble over several calls.
EnsembleAccumulator run_realizations(const EnsembleSpec& spec, std::uint64_t first, std::uint64_t last);

struct CurvePoint {
  double energy;
  double value;
};

/// Uniform bins over `range` (default: data min/max padded by 1% of the
/// width). A point on the top edge goes to the last bin; points outside a
/// user range are counted in out_of_range.
BinnedCurve bin_energies(std::span<const CurvePoint> points, int bins,
                         std::optional<EnergyRange> range = std::nullopt);

}  // namespace tbent
