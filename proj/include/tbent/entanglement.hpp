#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tbent/eigensolve.hpp"

namespace tbent {

/// C_ij = 2 |Psi_i Psi_j|, i != j.
double pairwise_concurrence(std::span<const double> state, std::size_t i, std::size_t j);

/// <C> of one state: ((sum_i |Psi_i|)^2 - 1) / d with d = N(N-1)/2, i.e. the
/// mean of C_ij over all pairs i < j of a normalized state.
double state_concurrence(std::span<const double> state);

/// 1 / sum_i |Psi_i|^4
double participation_ratio(std::span<const double> state);

/// min over pairs of C_ij: twice the product of the two smallest |Psi_i|.
double minimum_pairwise_concurrence(std::span<const double> state);

struct StateConcurrence {
  double energy;
  double concurrence;  // <C^beta>
  double scaled;       // N <C^beta>
  double participation_ratio;
};

struct ConcurrenceReport {
  std::vector<StateConcurrence> per_state;
  double global = 0.0;  // <C>, mean over all M states
  double scaled_global = 0.0;  // N <C>
  std::size_t m = 0;
};

ConcurrenceReport spectrum_concurrence(const Spectrum& spectrum);

}  // namespace tbent
