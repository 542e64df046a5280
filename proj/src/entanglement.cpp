#include "tbent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tbent/errors.hpp"

namespace tbent {

double pairwise_concurrence(std::span<const double> state, std::size_t i, std::size_t j) {
  if (i == j) throw ConfigError("pairwise_concurrence: sites must differ");
  if (i >= state.size() || j >= state.size()) throw ConfigError("pairwise_concurrence: site out of range");
  return 2.0 * std::abs(state[i] * state[j]);
}

double state_concurrence(std::span<const double> state) {
  const double n = static_cast<double>(state.size());
  if (state.size() < 2) return 0.0;
  double sum_abs = 0.0;
  for (double a : state) sum_abs += std::abs(a);
  const double pairs = n * (n - 1.0) / 2.0;
  // sum_abs >= 1 for a normalized state; rounding can undershoot by an ulp
  return std::max(0.0, (sum_abs * sum_abs - 1.0) / pairs);
}

double participation_ratio(std::span<const double> state) {
  double s4 = 0.0;
  for (double a : state) s4 += a * a * a * a;
  return 1.0 / s4;
}

double minimum_pairwise_concurrence(std::span<const double> state) {
  if (state.size() < 2) throw ConfigError("minimum_pairwise_concurrence: need at least two sites");
  double lo = std::numeric_limits<double>::infinity();
  double next = lo;
  for (double a : state) {
    const double m = std::abs(a);
    if (m < lo) {
      next = lo;
      lo = m;
    } else if (m < next) {
      next = m;
    }
  }
  return 2.0 * lo * next;
}

ConcurrenceReport spectrum_concurrence(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  ConcurrenceReport report;
  report.per_state.reserve(n);
  double total = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const auto psi = spectrum.state(b);
    const double c = state_concurrence(psi);
    report.per_state.push_back({spectrum.energies()[b], c, static_cast<double>(n) * c, participation_ratio(psi)});
    total += c;
  }
  report.m = n;
  report.global = n > 0 ? total / static_cast<double>(n) : 0.0;
  report.scaled_global = static_cast<double>(n) * report.global;
  return report;
}

}  // namespace tbent
