#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tbent/matrix.hpp"
#include "tbent/random.hpp"

namespace tbent {

enum class Family { SlowlyVarying, RandomDimer, LongRangeCorrelated, LongRangeHopping };
enum class Boundary { Open, Periodic };

/// Distance used in the long-range hopping J / dist^mu under periodic
/// boundaries: the ring distance min(|m-n|, N-|m-n|), or the bare |m-n|.
enum class HoppingDistance { Ring, Bare };

std::string_view to_string(Family f);
std::string_view to_string(Boundary b);
std::string_view to_string(HoppingDistance d);
Family parse_family(std::string_view s);
Boundary parse_boundary(std::string_view s);
HoppingDistance parse_hopping_distance(std::string_view s);

/// Parameters of one tight-binding model. Only the fields belonging to
/// `family` are read by the builders; the others keep their defaults.
struct ModelParams {
  Family family = Family::SlowlyVarying;
  int n = 0;
  double t = 1.0;

  // slowly varying: V_n = lambda * cos(alpha_pi * n^nu), alpha_pi = pi * alpha
  double lambda = 0.0;
  double alpha_pi = 0.2;
  double nu = 0.7;

  // random dimer
  double va = 0.0;
  double vb = 1.0;
  double q = 0.5;

  // long-range correlated, spectral exponent
  double alpha = 2.0;

  // long-range hopping
  double w = 0.0;
  double mu = 1.5;
  double j = 1.0;
  HoppingDistance distance = HoppingDistance::Ring;

  std::uint64_t seed = 0;
  /// Unset means the family default: periodic for long-range hopping,
  /// open for the others.
  std::optional<Boundary> boundary;

  Boundary resolved_boundary() const {
    if (boundary) return *boundary;
    return family == Family::LongRangeHopping ? Boundary::Periodic : Boundary::Open;
  }

  bool is_deterministic() const { return family == Family::SlowlyVarying; }

  /// Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct PotentialVector {
  std::vector<double> values;
  ModelParams params;
  std::uint64_t realization_index = 0;

  std::size_t size() const noexcept { return values.size(); }
};

class Hamiltonian {
 public:
  using Storage = std::variant<Tridiagonal, SquareMatrix>;

  Hamiltonian(Tridiagonal t, Boundary b) : storage_(std::move(t)), boundary_(b) {}
  Hamiltonian(SquareMatrix m, Boundary b) : storage_(std::move(m)), boundary_(b) {}

  std::size_t dimension() const;
  Boundary boundary() const noexcept { return boundary_; }
  bool is_tridiagonal() const noexcept { return std::holds_alternative<Tridiagonal>(storage_); }

  const Tridiagonal& tridiagonal() const { return std::get<Tridiagonal>(storage_); }
  const SquareMatrix& dense() const { return std::get<SquareMatrix>(storage_); }
  const Storage& storage() const noexcept { return storage_; }

  /// Element access for either storage.
  double at(std::size_t row, std::size_t col) const;
  SquareMatrix to_dense() const;

  /// y = H x
  void apply(std::span<const double> x, std::span<double> y) const;

  double trace() const;
  double max_abs() const;

 private:
  Storage storage_;
  Boundary boundary_;
};

/// V_n = lambda * cos(alpha_pi * n^nu), n = 1..N.
PotentialVector build_slowly_varying(const ModelParams& params);

/// Sites (2p, 2p+1) share V_a with probability q, otherwise V_b.
PotentialVector build_random_dimer(const ModelParams& params, RandomStream& rng);

/// Amplitudes [k^-alpha (2 pi / N)^(1-alpha)]^(1/2) for k = 1..N/2.
std::vector<double> correlated_amplitudes(int n, double alpha);

/// Raw sequence V_i = sum_k amplitudes[k-1] cos(2 pi i k / N + phases[k-1]),
/// i = 1..n, by direct summation.
std::vector<double> correlated_sequence(int n, std::span<const double> amplitudes,
                                        std::span<const double> phases);

/// Shifts and scales in place to mean 0 and population standard deviation 1.
void normalize_unit_variance(std::span<double> values);

/// Power-law correlated potential with random phases, normalized to mean 0
/// and unit standard deviation.
PotentialVector build_long_range_correlated(const ModelParams& params, RandomStream& rng);

/// Dense ring with eps_n ~ U[-W/2, W/2] on the diagonal and J / dist^mu off it.
Hamiltonian build_long_range_hopping(const ModelParams& params, RandomStream& rng);

/// Nearest-neighbour chain with hopping -t. A periodic chain is stored dense.
Hamiltonian assemble_chain_hamiltonian(const PotentialVector& potential, double t, Boundary boundary);

/// Builds the potential (if any) and Hamiltonian of realization `index`,
/// drawing from RandomStream::for_realization(params.seed, index).
Hamiltonian build_hamiltonian(const ModelParams& params, std::uint64_t index = 0);

/// The on-site potential of realization `index`; for long-range hopping this
/// is the random diagonal eps_n.
PotentialVector build_potential(const ModelParams& params, std::uint64_t index = 0);

}  // namespace tbent
