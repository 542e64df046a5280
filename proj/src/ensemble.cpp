#include "tbent/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "tbent/entanglement.hpp"
#include "tbent/errors.hpp"

namespace tbent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Running mean and M2 (Welford), fed in a fixed order.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  double std_error() const {
    if (count < 2) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

int worker_count(int requested, std::uint64_t jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(n), std::max<std::uint64_t>(jobs, 1)));
}

}  // namespace

void EnsembleSpec::validate() const {
  params.validate();
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (collect_states && binning == BinningMode::Energy && energy_bins < 8)
    throw ConfigError("bins must be at least 8");
  if (energy_range && !(energy_range->max > energy_range->min))
    throw ConfigError("e_max must exceed e_min");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

std::size_t BinnedCurve::populated_count() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

RealizationResult run_realization(const EnsembleSpec& spec, std::uint64_t index) {
  ModelParams params = spec.params;
  params.seed = spec.base_seed;
  const Hamiltonian h = build_hamiltonian(params, index);
  Spectrum spectrum;
  try {
    spectrum = diagonalize(h, spec.solver);
  } catch (ConvergenceFailure& e) {
    ConvergenceFailure tagged(e.index(), std::string(e.what()) + " (realization " + std::to_string(index) + ")");
    tagged.realization = index;
    throw tagged;
  }
  const auto report = spectrum_concurrence(spectrum);
  RealizationResult r;
  r.index = index;
  r.scaled_global = report.scaled_global;
  if (spec.collect_states) {
    r.energies.reserve(report.per_state.size());
    r.scaled_concurrence.reserve(report.per_state.size());
    for (const auto& s : report.per_state) {
      r.energies.push_back(s.energy);
      r.scaled_concurrence.push_back(s.scaled);
    }
  }
  return r;
}

void EnsembleAccumulator::add(RealizationResult r) {
  const auto index = r.index;
  if (!results_.emplace(index, std::move(r)).second)
    throw ConfigError("realization " + std::to_string(index) + " accumulated twice");
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  for (const auto& [index, r] : other.results_) add(r);
}

GlobalStats EnsembleAccumulator::global_stats() const {
  Moments m;
  for (const auto& [index, r] : results_) m.add(r.scaled_global);
  return {m.mean, m.std_error(), static_cast<int>(m.count)};
}

BinnedCurve EnsembleAccumulator::binned(const EnsembleSpec& spec) const {
  if (spec.binning == BinningMode::StateIndex) {
    std::size_t n = 0;
    for (const auto& [index, r] : results_) n = std::max(n, r.energies.size());
    std::vector<Moments> energy(n), value(n);
    for (const auto& [index, r] : results_) {
      for (std::size_t b = 0; b < r.energies.size(); ++b) {
        energy[b].add(r.energies[b]);
        value[b].add(r.scaled_concurrence[b]);
      }
    }
    BinnedCurve curve;
    for (std::size_t b = 0; b < n; ++b) {
      curve.bin_centers.push_back(energy[b].mean);
      curve.mean_scaled_concurrence.push_back(value[b].count ? value[b].mean : kNaN);
      curve.std_error.push_back(value[b].count ? value[b].std_error() : kNaN);
      curve.counts.push_back(value[b].count);
    }
    if (n > 0) curve.range = {curve.bin_centers.front(), curve.bin_centers.back()};
    return curve;
  }
  std::vector<CurvePoint> points;
  for (const auto& [index, r] : results_)
    for (std::size_t b = 0; b < r.energies.size(); ++b) points.push_back({r.energies[b], r.scaled_concurrence[b]});
  return bin_energies(points, spec.energy_bins, spec.energy_range);
}

EnsembleAccumulator run_realizations(const EnsembleSpec& spec, std::uint64_t first, std::uint64_t last) {
  spec.validate();
  const std::uint64_t jobs = last > first ? last - first : 0;
  std::vector<RealizationResult> slots(jobs);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::uint64_t failed_job = std::numeric_limits<std::uint64_t>::max();
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t job = next.fetch_add(1);
      if (job >= jobs) return;
      try {
        slots[job] = run_realization(spec, first + job);
      } catch (...) {
        // keep the lowest failing index so the reported error is reproducible
        std::lock_guard lock(failure_mutex);
        if (job < failed_job) {
          failed_job = job;
          failure = std::current_exception();
        }
      }
    }
  };

  const int workers = worker_count(spec.threads, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleAccumulator acc;
  for (auto& r : slots) acc.add(std::move(r));
  return acc;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const auto acc = run_realizations(spec, 0, static_cast<std::uint64_t>(spec.effective_samples()));
  EnsembleResult out;
  out.global = acc.global_stats();
  if (spec.collect_states) out.curve = acc.binned(spec);
  return out;
}

BinnedCurve bin_energies(std::span<const CurvePoint> points, int bins, std::optional<EnergyRange> range) {
  if (bins < 1) throw ConfigError("bin_energies: bins must be at least 1");
  if (points.empty()) throw ConfigError("bin_energies: no points");
  EnergyRange r;
  if (range) {
    r = *range;
    if (!(r.max > r.min)) throw ConfigError("bin_energies: empty energy range");
  } else {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const CurvePoint& a, const CurvePoint& b) { return a.energy < b.energy; });
    const double width = hi->energy - lo->energy;
    const double pad = width > 0.0 ? 0.01 * width : std::max(1e-3, 0.01 * std::abs(lo->energy));
    r = {lo->energy - pad, hi->energy + pad};
  }

  const double width = (r.max - r.min) / bins;
  std::vector<Moments> acc(bins);
  BinnedCurve curve;
  curve.range = r;
  for (const auto& p : points) {
    if (p.energy < r.min || p.energy > r.max || !std::isfinite(p.energy)) {
      ++curve.out_of_range;
      continue;
    }
    auto b = static_cast<long long>((p.energy - r.min) / width);
    b = std::clamp<long long>(b, 0, bins - 1);
    acc[b].add(p.value);
  }
  for (int b = 0; b < bins; ++b) {
    curve.bin_centers.push_back(r.min + (b + 0.5) * width);
    curve.counts.push_back(acc[b].count);
    curve.mean_scaled_concurrence.push_back(acc[b].count ? acc[b].mean : kNaN);
    curve.std_error.push_back(acc[b].count ? acc[b].std_error() : kNaN);
  }
  return curve;
}

}  // namespace tbent
