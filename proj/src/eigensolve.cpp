#include "tbent/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tbent/errors.hpp"
#include "tbent/random.hpp"

namespace tbent {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxQlSweeps = 50;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Entries here are O(1) energies, far from overflow; std::hypot is slow.
inline double pythag(double a, double b) { return std::sqrt(a * a + b * b); }

void check_finite_symmetric(const SquareMatrix& h) {
  for (double v : h.data())
    if (!std::isfinite(v)) throw ConfigError("diagonalize: matrix has non-finite entries");
  if (!h.is_symmetric()) throw ConfigError("diagonalize: matrix is not symmetric");
}

void check_finite(const Tridiagonal& t) {
  if (t.size() == 0) throw ConfigError("diagonalize: empty matrix");
  if (t.off_diagonal.size() + 1 != t.size())
    throw ConfigError("diagonalize: tridiagonal needs n-1 off-diagonal entries");
  for (double v : t.diagonal)
    if (!std::isfinite(v)) throw ConfigError("diagonalize: matrix has non-finite entries");
  for (double v : t.off_diagonal)
    if (!std::isfinite(v)) throw ConfigError("diagonalize: matrix has non-finite entries");
}

/// Householder vectors of the reduction. Row k of `vectors` holds v_k on
/// indices k+1..n-1 with v_k[k+1] = 1; H_k = I - tau_k v_k v_k^T.
struct Reflectors {
  Tridiagonal tridiagonal;
  SquareMatrix vectors;
  std::vector<double> tau;
};

/// Works on the lower triangle only (columns c <= row i).
Reflectors reduce(const SquareMatrix& h) {
  const std::size_t n = h.size();
  SquareMatrix a = h;
  Reflectors out{Tridiagonal{std::vector<double>(n), std::vector<double>(n > 0 ? n - 1 : 0)},
                 SquareMatrix(n), std::vector<double>(n, 0.0)};
  std::vector<double> p(n), w(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1;
    const double alpha = a(lo, k);
    double sigma = 0.0;
    for (std::size_t i = lo + 1; i < n; ++i) sigma += a(i, k) * a(i, k);

    if (sigma == 0.0) {
      out.tau[k] = 0.0;
      out.tridiagonal.off_diagonal[k] = alpha;
      continue;
    }

    const double norm = std::sqrt(alpha * alpha + sigma);
    const double beta = alpha > 0.0 ? -norm : norm;
    const double tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    double* v = out.vectors.row(k).data();
    v[lo] = 1.0;
    for (std::size_t i = lo + 1; i < n; ++i) v[i] = a(i, k) * scale;
    out.tau[k] = tau;
    out.tridiagonal.off_diagonal[k] = beta;

    // A22 <- H A22 H with p = tau A22 v, w = p - (tau/2)(p.v) v
    std::fill(p.begin() + lo, p.end(), 0.0);
    for (std::size_t i = lo; i < n; ++i) {
      const double* r = a.row(i).data();
      const double vi = v[i];
      double acc = 0.0;
      for (std::size_t c = lo; c < i; ++c) {
        acc += r[c] * v[c];
        p[c] += r[c] * vi;
      }
      p[i] += acc + r[i] * vi;
    }
    double pv = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
      p[i] *= tau;
      pv += p[i] * v[i];
    }
    const double half = 0.5 * tau * pv;
    for (std::size_t i = lo; i < n; ++i) w[i] = p[i] - half * v[i];
    for (std::size_t i = lo; i < n; ++i) {
      double* r = a.row(i).data();
      const double vi = v[i];
      const double wi = w[i];
      for (std::size_t c = lo; c <= i; ++c) r[c] -= vi * w[c] + wi * v[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.tridiagonal.diagonal[i] = a(i, i);
  if (n >= 2) out.tridiagonal.off_diagonal[n - 2] = a(n - 1, n - 2);
  return out;
}

/// Q = H_0 H_1 ... H_{n-3}, accumulated backwards.
SquareMatrix form_accumulator(const Reflectors& r) {
  const std::size_t n = r.vectors.size();
  SquareMatrix q = SquareMatrix::identity(n);
  std::vector<double> s(n);
  for (std::size_t kk = n >= 2 ? n - 2 : 0; kk-- > 0;) {
    const double tau = r.tau[kk];
    if (tau == 0.0) continue;
    const std::size_t lo = kk + 1;
    const auto v = r.vectors.row(kk);
    // s = v^T Q[lo:, lo:]
    std::fill(s.begin() + lo, s.end(), 0.0);
    for (std::size_t i = lo; i < n; ++i) {
      const auto row = q.row(i);
      const double vi = v[i];
      for (std::size_t c = lo; c < n; ++c) s[c] += vi * row[c];
    }
    for (std::size_t i = lo; i < n; ++i) {
      auto row = q.row(i);
      const double f = tau * v[i];
      for (std::size_t c = lo; c < n; ++c) row[c] -= f * s[c];
    }
  }
  return q;
}

/// Replaces each row z (an eigenvector of T) by Q z.
void back_transform(const Reflectors& r, std::vector<double>& rows) {
  const std::size_t n = r.vectors.size();
  constexpr std::size_t kBlock = 16;
  for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
    const std::size_t b1 = std::min(n, b0 + kBlock);
    for (std::size_t kk = n >= 2 ? n - 2 : 0; kk-- > 0;) {
      const double tau = r.tau[kk];
      if (tau == 0.0) continue;
      const std::size_t lo = kk + 1;
      const double* v = r.vectors.row(kk).data();
      for (std::size_t b = b0; b < b1; ++b) {
        double* z = rows.data() + b * n;
        double s = 0.0;
        for (std::size_t i = lo; i < n; ++i) s += v[i] * z[i];
        s *= tau;
        for (std::size_t i = lo; i < n; ++i) z[i] -= s * v[i];
      }
    }
  }
}

/// Implicit QL on d (diagonal) and e (e[i] couples i, i+1; e has size n and
/// e[n-1] is scratch). When `z` is non-null its rows are rotated alongside.
void ql_iterate(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z,
                std::size_t index_offset = 0) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlSweeps)
          throw ConvergenceFailure(index_offset + l, "QL iteration did not converge for eigenvalue " +
                                                         std::to_string(index_offset + l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            double* zi = z->data() + i * n;
            double* zi1 = zi + n;
            for (std::size_t k = 0; k < n; ++k) {
              const double t = zi1[k];
              zi1[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<std::size_t> ascending_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

/// Modified Gram-Schmidt over runs of eigenvalues closer than `gap`.
void orthonormalize_clusters(std::span<const double> energies, std::vector<double>& rows, double gap) {
  const std::size_t n = energies.size();
  std::size_t start = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (j < n && energies[j] - energies[j - 1] < gap) continue;
    for (std::size_t a = start + 1; a < j; ++a) {
      std::span<double> x(rows.data() + a * n, n);
      for (std::size_t b = start; b < a; ++b) {
        std::span<const double> y(rows.data() + b * n, n);
        const double proj = dot(x, y);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * y[i];
      }
      const double nrm = norm2(x);
      for (double& v : x) v /= nrm;
    }
    start = j;
  }
}

/// LU factorization with partial pivoting of (T - shift I), LAPACK dgttrf
/// layout. Tiny pivots are replaced by +-pivot_floor.
struct ShiftedLu {
  std::vector<double> dl, d, du, du2, inv_d;
  std::vector<char> swapped;

  ShiftedLu(std::span<const double> diag, std::span<const double> off, double shift, double pivot_floor) {
    const std::size_t n = diag.size();
    d.resize(n);
    dl.assign(off.begin(), off.end());
    du.assign(off.begin(), off.end());
    du2.assign(n, 0.0);
    swapped.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
    auto floor_pivot = [&](double& p) {
      if (std::abs(p) < pivot_floor) p = p < 0.0 ? -pivot_floor : pivot_floor;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        floor_pivot(d[i]);
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (n > 0) floor_pivot(d[n - 1]);
    inv_d.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_d[i] = 1.0 / d[i];
  }

  void solve(std::span<double> b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double t = b[i];
        b[i] = b[i + 1];
        b[i + 1] = t - dl[i] * b[i];
      }
    }
    b[n - 1] *= inv_d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) * inv_d[n - 2];
    for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) * inv_d[i];
  }
};

/// Inverse iteration on one unreduced block. `eigenvalues` ascending.
/// Returns rows of length m.
std::vector<double> block_eigenvectors(std::span<const double> diag, std::span<const double> off,
                                       std::span<const double> eigenvalues, std::size_t index_offset) {
  const std::size_t m = diag.size();
  std::vector<double> rows(m * m, 0.0);
  if (m == 1) {
    rows[0] = 1.0;
    return rows;
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < m) r += std::abs(off[i]);
    norm = std::max(norm, r);
  }
  const double ortol = 1e-3 * norm;
  const double pertol = 10.0 * kEps * norm;
  const double pivot_floor = kEps * norm;
  const double growth_needed = 1.0 / (std::sqrt(static_cast<double>(m)) * 100.0 * kEps * norm);
  constexpr int kMaxIterations = 5;
  constexpr int kExtraIterations = 2;

  std::vector<double> x(m);
  // vectors closer than ortol in energy are orthogonalized explicitly; the
  // rest are orthogonal to O(eps ||T|| / gap) already
  std::size_t cluster_start = 0;
  double previous_shift = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double shift = eigenvalues[j];
    while (eigenvalues[j] - eigenvalues[cluster_start] > ortol) ++cluster_start;
    if (j > 0 && shift - previous_shift < pertol) shift = previous_shift + pertol;
    previous_shift = shift;

    // deterministic start vector
    RandomStream start(derive_seed(0x7462656e74ULL, index_offset + j));
    for (double& v : x) v = start.uniform(-1.0, 1.0);

    const ShiftedLu lu(diag, off, shift, pivot_floor);
    int converged_after = -1;
    for (int it = 0; it < kMaxIterations + kExtraIterations; ++it) {
      const double bn = norm2(x);
      for (double& v : x) v /= bn;
      lu.solve(x);
      for (std::size_t b = cluster_start; b < j; ++b) {
        std::span<const double> y(rows.data() + b * m, m);
        const double proj = dot(x, y);
        for (std::size_t i = 0; i < m; ++i) x[i] -= proj * y[i];
      }
      const double growth = norm2(x);
      if (converged_after < 0 && growth >= growth_needed) converged_after = it;
      if (converged_after >= 0 && it - converged_after >= kExtraIterations) break;
      if (converged_after < 0 && it + 1 >= kMaxIterations)
        throw ConvergenceFailure(index_offset + j, "inverse iteration did not converge for eigenvalue " +
                                                       std::to_string(index_offset + j));
    }
    // unit norm, largest component positive
    std::size_t jmax = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (std::abs(x[i]) > std::abs(x[jmax])) jmax = i;
    const double scale = (x[jmax] < 0.0 ? -1.0 : 1.0) / norm2(x);
    double* row = rows.data() + j * m;
    for (std::size_t i = 0; i < m; ++i) row[i] = x[i] * scale;
  }
  return rows;
}

struct Block {
  std::size_t begin;
  std::size_t end;
};

std::vector<Block> unreduced_blocks(const Tridiagonal& t) {
  std::vector<Block> blocks;
  const std::size_t n = t.size();
  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dd = std::abs(t.diagonal[i]) + std::abs(t.diagonal[i + 1]);
    if (std::abs(t.off_diagonal[i]) <= kEps * dd) {
      blocks.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  blocks.push_back({begin, n});
  return blocks;
}

/// Eigenvalues and eigenvectors (rows of length n) of a tridiagonal matrix
/// by blockwise QL eigenvalues plus inverse iteration.
std::pair<std::vector<double>, std::vector<double>> solve_by_inverse_iteration(const Tridiagonal& t) {
  const std::size_t n = t.size();
  std::vector<double> energies;
  std::vector<double> rows;
  energies.reserve(n);
  rows.reserve(n * n);
  for (const Block& blk : unreduced_blocks(t)) {
    const std::size_t m = blk.end - blk.begin;
    std::vector<double> d(t.diagonal.begin() + blk.begin, t.diagonal.begin() + blk.end);
    std::vector<double> e(m, 0.0);
    std::copy(t.off_diagonal.begin() + blk.begin, t.off_diagonal.begin() + blk.begin + (m - 1), e.begin());
    std::vector<double> off(e.begin(), e.begin() + (m - 1));
    ql_iterate(d, e, nullptr, blk.begin);
    std::sort(d.begin(), d.end());
    const auto block_rows = block_eigenvectors(
        std::span<const double>(t.diagonal.data() + blk.begin, m), off, d, blk.begin);
    for (std::size_t j = 0; j < m; ++j) {
      energies.push_back(d[j]);
      const std::size_t base = rows.size();
      rows.resize(base + n, 0.0);
      std::copy_n(block_rows.begin() + j * m, m, rows.begin() + base + blk.begin);
    }
  }
  const auto order = ascending_order(energies);
  std::vector<double> sorted_e(n), sorted_rows(n * n);
  for (std::size_t b = 0; b < n; ++b) {
    sorted_e[b] = energies[order[b]];
    std::copy_n(rows.begin() + order[b] * n, n, sorted_rows.begin() + b * n);
  }
  return {std::move(sorted_e), std::move(sorted_rows)};
}

double cluster_gap(std::span<const double> sorted_energies) {
  if (sorted_energies.empty()) return 0.0;
  return 1e-10 * (sorted_energies.back() - sorted_energies.front());
}

}  // namespace

Spectrum::Spectrum(std::vector<double> energies, std::vector<double> states)
    : energies_(std::move(energies)), states_(std::move(states)) {
  if (states_.size() != energies_.size() * energies_.size())
    throw ConfigError("Spectrum: state array does not match energy count");
}

TridiagonalReduction householder_tridiagonalize(const SquareMatrix& h) {
  check_finite_symmetric(h);
  auto r = reduce(h);
  auto q = form_accumulator(r);
  return {std::move(r.tridiagonal), std::move(q)};
}

Spectrum tql_implicit(const Tridiagonal& t, const SquareMatrix& accumulator) {
  check_finite(t);
  const std::size_t n = t.size();
  if (accumulator.size() != n) throw ConfigError("tql_implicit: accumulator size mismatch");
  std::vector<double> d = t.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
  // rows of zt are the columns of the accumulator
  std::vector<double> zt(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) zt[i * n + k] = accumulator(k, i);
  ql_iterate(d, e, &zt);

  const auto order = ascending_order(d);
  std::vector<double> energies(n), rows(n * n);
  for (std::size_t b = 0; b < n; ++b) {
    energies[b] = d[order[b]];
    std::copy_n(zt.begin() + order[b] * n, n, rows.begin() + b * n);
  }
  orthonormalize_clusters(energies, rows, cluster_gap(energies));
  return Spectrum(std::move(energies), std::move(rows));
}

std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t) {
  check_finite(t);
  std::vector<double> d = t.diagonal;
  std::vector<double> e(t.size(), 0.0);
  std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
  ql_iterate(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

Spectrum diagonalize(const Tridiagonal& t, const SolverOptions& options) {
  check_finite(t);
  Spectrum s;
  if (options.method == EigenMethod::QlAccumulate) {
    s = tql_implicit(t, SquareMatrix::identity(t.size()));
  } else {
    auto [energies, rows] = solve_by_inverse_iteration(t);
    s = Spectrum(std::move(energies), std::move(rows));
  }
  if (options.compute_residual) s.residual_norm = max_residual(Hamiltonian(t, Boundary::Open), s);
  return s;
}

Spectrum diagonalize(const SquareMatrix& h, const SolverOptions& options) {
  check_finite_symmetric(h);
  if (h.size() == 0) throw ConfigError("diagonalize: empty matrix");
  Spectrum s;
  const auto reflectors = reduce(h);
  if (options.method == EigenMethod::QlAccumulate) {
    s = tql_implicit(reflectors.tridiagonal, form_accumulator(reflectors));
  } else {
    auto [energies, rows] = solve_by_inverse_iteration(reflectors.tridiagonal);
    back_transform(reflectors, rows);
    orthonormalize_clusters(energies, rows, cluster_gap(energies));
    s = Spectrum(std::move(energies), std::move(rows));
  }
  if (options.compute_residual) s.residual_norm = max_residual(Hamiltonian(h, Boundary::Open), s);
  return s;
}

Spectrum diagonalize(const Hamiltonian& h, const SolverOptions& options) {
  if (h.is_tridiagonal()) return diagonalize(h.tridiagonal(), options);
  return diagonalize(h.dense(), options);
}

double max_residual(const Hamiltonian& h, const Spectrum& s) {
  const std::size_t n = s.size();
  std::vector<double> y(n);
  double worst = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const auto psi = s.state(b);
    h.apply(psi, y);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - s.energies()[b] * psi[i];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

}  // namespace tbent
