#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tbent/lattice.hpp"
#include "tbent/matrix.hpp"

namespace tbent {

/// All eigenpairs of a real symmetric matrix, ascending in energy.
/// Eigenvector `beta` is stored contiguously: state(beta)[n] = Psi_n^beta.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::vector<double> energies, std::vector<double> states);

  std::size_t size() const noexcept { return energies_.size(); }
  std::span<const double> energies() const noexcept { return energies_; }
  std::span<const double> state(std::size_t beta) const noexcept {
    return {states_.data() + beta * size(), size()};
  }
  std::span<const double> states() const noexcept { return states_; }

  /// max_beta ||H Psi - E Psi||_2, when it was computed.
  std::optional<double> residual_norm;

 private:
  std::vector<double> energies_;
  std::vector<double> states_;
};

struct TridiagonalReduction {
  Tridiagonal tridiagonal;
  /// Orthogonal Q with Q^T H Q = T.
  SquareMatrix accumulator;
};

/// Householder reduction of a dense symmetric matrix to tridiagonal form.
TridiagonalReduction householder_tridiagonalize(const SquareMatrix& h);

/// Implicit-shift QL on `t`, rotating the columns of `accumulator` (pass the
/// identity for a bare tridiagonal problem). Returns eigenvectors
/// accumulator * Z, sorted ascending. Throws ConvergenceFailure after 50
/// sweeps on one eigenvalue.
Spectrum tql_implicit(const Tridiagonal& t, const SquareMatrix& accumulator);

/// Eigenvalues only, ascending, O(n^2).
std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t);

enum class EigenMethod {
  /// QL eigenvalues, inverse-iteration eigenvectors: O(n^2) on a chain.
  InverseIteration,
  /// QL with the accumulator rotated explicitly: O(n^3) on a chain.
  QlAccumulate,
};

struct SolverOptions {
  EigenMethod method = EigenMethod::InverseIteration;
  bool compute_residual = true;
};

/// Full eigendecomposition. Tridiagonal Hamiltonians go straight to the
/// tridiagonal solver; dense ones are reduced by Householder first.
Spectrum diagonalize(const Hamiltonian& h, const SolverOptions& options = {});
Spectrum diagonalize(const SquareMatrix& h, const SolverOptions& options = {});
Spectrum diagonalize(const Tridiagonal& t, const SolverOptions& options = {});

/// max_beta ||H Psi^beta - E_beta Psi^beta||_2
double max_residual(const Hamiltonian& h, const Spectrum& s);

}  // namespace tbent
