#include "tbent/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tbent/errors.hpp"

namespace tbent {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_finite(double v, const char* key) {
  require(std::isfinite(v), std::string(key) + " must be finite");
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::SlowlyVarying: return "slowly_varying";
    case Family::RandomDimer: return "random_dimer";
    case Family::LongRangeCorrelated: return "long_range_correlated";
    case Family::LongRangeHopping: return "long_range_hopping";
  }
  return "?";
}

std::string_view to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

std::string_view to_string(HoppingDistance d) { return d == HoppingDistance::Ring ? "ring" : "bare"; }

Family parse_family(std::string_view s) {
  for (Family f : {Family::SlowlyVarying, Family::RandomDimer, Family::LongRangeCorrelated,
                   Family::LongRangeHopping})
    if (s == to_string(f)) return f;
  throw ConfigError("family: unknown model family '" + std::string(s) +
                    "' (expected slowly_varying, random_dimer, long_range_correlated or "
                    "long_range_hopping)");
}

Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("boundary: expected 'open' or 'periodic', got '" + std::string(s) + "'");
}

HoppingDistance parse_hopping_distance(std::string_view s) {
  if (s == "ring") return HoppingDistance::Ring;
  if (s == "bare") return HoppingDistance::Bare;
  throw ConfigError("distance: expected 'ring' or 'bare', got '" + std::string(s) + "'");
}

void ModelParams::validate() const {
  require(n >= 2, "N must be at least 2 (got " + std::to_string(n) + ")");
  require_finite(t, "t");
  switch (family) {
    case Family::SlowlyVarying:
      require_finite(lambda, "lambda");
      require_finite(alpha_pi, "alpha_pi");
      require(alpha_pi > 0.0, "alpha_pi must be positive");
      require(nu >= 0.0 && nu <= 1.0, "nu must lie in [0, 1]");
      break;
    case Family::RandomDimer:
      require(n % 2 == 0, "N must be even for the random dimer model (got " + std::to_string(n) + ")");
      require_finite(va, "Va");
      require_finite(vb, "Vb");
      require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
      break;
    case Family::LongRangeCorrelated:
      require(n % 2 == 0,
              "N must be even for the long-range correlated model (got " + std::to_string(n) + ")");
      require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
      break;
    case Family::LongRangeHopping:
      require(std::isfinite(w) && w >= 0.0, "W must be non-negative");
      require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
      require_finite(j, "J");
      break;
  }
}

std::size_t Hamiltonian::dimension() const {
  return std::visit([](const auto& s) { return s.size(); }, storage_);
}

double Hamiltonian::at(std::size_t row, std::size_t col) const {
  if (const auto* m = std::get_if<SquareMatrix>(&storage_)) return (*m)(row, col);
  const auto& t = std::get<Tridiagonal>(storage_);
  if (row == col) return t.diagonal[row];
  if (row + 1 == col) return t.off_diagonal[row];
  if (col + 1 == row) return t.off_diagonal[col];
  return 0.0;
}

SquareMatrix Hamiltonian::to_dense() const {
  if (const auto* m = std::get_if<SquareMatrix>(&storage_)) return *m;
  return std::get<Tridiagonal>(storage_).to_dense();
}

void Hamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dimension();
  if (const auto* m = std::get_if<SquareMatrix>(&storage_)) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = m->row(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += r[k] * x[k];
      y[i] = acc;
    }
    return;
  }
  const auto& t = std::get<Tridiagonal>(storage_);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = t.diagonal[i] * x[i];
    if (i > 0) acc += t.off_diagonal[i - 1] * x[i - 1];
    if (i + 1 < n) acc += t.off_diagonal[i] * x[i + 1];
    y[i] = acc;
  }
}

double Hamiltonian::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) s += at(i, i);
  return s;
}

double Hamiltonian::max_abs() const {
  double m = 0.0;
  if (const auto* d = std::get_if<SquareMatrix>(&storage_)) {
    for (double v : d->data()) m = std::max(m, std::abs(v));
    return m;
  }
  const auto& t = std::get<Tridiagonal>(storage_);
  for (double v : t.diagonal) m = std::max(m, std::abs(v));
  for (double v : t.off_diagonal) m = std::max(m, std::abs(v));
  return m;
}

PotentialVector build_slowly_varying(const ModelParams& params) {
  params.validate();
  if (params.family != Family::SlowlyVarying) throw ConfigError("build_slowly_varying: wrong family");
  PotentialVector out{std::vector<double>(params.n), params, 0};
  for (int i = 0; i < params.n; ++i) {
    const double site = i + 1;
    out.values[i] = params.lambda * std::cos(params.alpha_pi * std::pow(site, params.nu));
  }
  return out;
}

PotentialVector build_random_dimer(const ModelParams& params, RandomStream& rng) {
  params.validate();
  if (params.family != Family::RandomDimer) throw ConfigError("build_random_dimer: wrong family");
  PotentialVector out{std::vector<double>(params.n), params, 0};
  for (int p = 0; p < params.n / 2; ++p) {
    const double v = rng.uniform() < params.q ? params.va : params.vb;
    out.values[2 * p] = v;
    out.values[2 * p + 1] = v;
  }
  return out;
}

std::vector<double> correlated_amplitudes(int n, double alpha) {
  std::vector<double> amp(n / 2);
  const double base = std::pow(2.0 * std::numbers::pi / n, 1.0 - alpha);
  for (int k = 1; k <= n / 2; ++k) amp[k - 1] = std::sqrt(std::pow(k, -alpha) * base);
  return amp;
}

std::vector<double> correlated_sequence(int n, std::span<const double> amplitudes,
                                        std::span<const double> phases) {
  if (amplitudes.size() != phases.size())
    throw ConfigError("correlated_sequence: amplitude and phase counts differ");
  // cos(2 pi m / N) and sin(2 pi m / N) for m = (i k) mod N
  std::vector<double> cos_table(n), sin_table(n);
  for (int m = 0; m < n; ++m) {
    const double angle = 2.0 * std::numbers::pi * m / n;
    cos_table[m] = std::cos(angle);
    sin_table[m] = std::sin(angle);
  }
  std::vector<double> values(n, 0.0);
  for (std::size_t kk = 0; kk < amplitudes.size(); ++kk) {
    const double a = amplitudes[kk];
    if (a == 0.0) continue;
    const double ac = a * std::cos(phases[kk]);
    const double as = a * std::sin(phases[kk]);
    const long long k = static_cast<long long>(kk) + 1;
    for (int i = 1; i <= n; ++i) {
      const auto m = static_cast<std::size_t>((i * k) % n);
      values[i - 1] += ac * cos_table[m] - as * sin_table[m];
    }
  }
  return values;
}

void normalize_unit_variance(std::span<double> values) {
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / count);
  if (!(sd > 0.0)) throw ConfigError("cannot normalize a constant sequence");
  for (double& v : values) v = (v - mean) / sd;
}

PotentialVector build_long_range_correlated(const ModelParams& params, RandomStream& rng) {
  params.validate();
  if (params.family != Family::LongRangeCorrelated)
    throw ConfigError("build_long_range_correlated: wrong family");
  const auto amp = correlated_amplitudes(params.n, params.alpha);
  std::vector<double> phases(amp.size());
  for (double& p : phases) p = 2.0 * std::numbers::pi * rng.uniform();
  PotentialVector out{correlated_sequence(params.n, amp, phases), params, 0};
  normalize_unit_variance(out.values);
  return out;
}

namespace {

std::vector<double> hopping_diagonal(const ModelParams& params, RandomStream& rng) {
  std::vector<double> eps(params.n);
  for (double& e : eps) e = rng.uniform(-0.5 * params.w, 0.5 * params.w);
  return eps;
}

}  // namespace

Hamiltonian build_long_range_hopping(const ModelParams& params, RandomStream& rng) {
  params.validate();
  if (params.family != Family::LongRangeHopping)
    throw ConfigError("build_long_range_hopping: wrong family");
  const std::size_t n = params.n;
  const Boundary boundary = params.resolved_boundary();
  const bool ring = boundary == Boundary::Periodic && params.distance == HoppingDistance::Ring;

  // hopping by separation, computed once so that equal distances give
  // bitwise equal elements
  std::vector<double> by_distance(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t dist = ring ? std::min(d, n - d) : d;
    by_distance[d] = params.j / std::pow(static_cast<double>(dist), params.mu);
  }

  const auto eps = hopping_diagonal(params, rng);
  SquareMatrix h(n);
  for (std::size_t m = 0; m < n; ++m) {
    h(m, m) = eps[m];
    for (std::size_t k = m + 1; k < n; ++k) {
      h(m, k) = by_distance[k - m];
      h(k, m) = h(m, k);
    }
  }
  return Hamiltonian(std::move(h), boundary);
}

Hamiltonian assemble_chain_hamiltonian(const PotentialVector& potential, double t, Boundary boundary) {
  const std::size_t n = potential.size();
  if (boundary == Boundary::Open) {
    Tridiagonal tri{potential.values, std::vector<double>(n > 0 ? n - 1 : 0, -t)};
    return Hamiltonian(std::move(tri), boundary);
  }
  SquareMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = potential.values[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = -t;
    h(i + 1, i) = -t;
  }
  if (n > 2) {
    h(0, n - 1) += -t;
    h(n - 1, 0) = h(0, n - 1);
  } else if (n == 2) {
    // the two bonds of a 2-site ring coincide
    h(0, 1) = -2.0 * t;
    h(1, 0) = -2.0 * t;
  }
  return Hamiltonian(std::move(h), boundary);
}

PotentialVector build_potential(const ModelParams& params, std::uint64_t index) {
  params.validate();
  auto rng = RandomStream::for_realization(params.seed, index);
  PotentialVector out;
  switch (params.family) {
    case Family::SlowlyVarying: out = build_slowly_varying(params); break;
    case Family::RandomDimer: out = build_random_dimer(params, rng); break;
    case Family::LongRangeCorrelated: out = build_long_range_correlated(params, rng); break;
    case Family::LongRangeHopping: out = PotentialVector{hopping_diagonal(params, rng), params, 0}; break;
  }
  out.realization_index = index;
  return out;
}

Hamiltonian build_hamiltonian(const ModelParams& params, std::uint64_t index) {
  params.validate();
  if (params.family == Family::LongRangeHopping) {
    auto rng = RandomStream::for_realization(params.seed, index);
    return build_long_range_hopping(params, rng);
  }
  return assemble_chain_hamiltonian(build_potential(params, index), params.t, params.resolved_boundary());
}

}  // namespace tbent
