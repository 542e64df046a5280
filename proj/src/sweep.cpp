#include "tbent/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tbent/errors.hpp"

namespace tbent {

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Lambda: return "lambda";
    case SweepParameter::AlphaPi: return "alpha_pi";
    case SweepParameter::Nu: return "nu";
    case SweepParameter::DimerDelta: return "delta";
    case SweepParameter::Q: return "q";
    case SweepParameter::Alpha: return "alpha";
    case SweepParameter::W: return "W";
    case SweepParameter::Mu: return "mu";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view s) {
  for (auto p : {SweepParameter::Lambda, SweepParameter::AlphaPi, SweepParameter::Nu, SweepParameter::DimerDelta,
                 SweepParameter::Q, SweepParameter::Alpha, SweepParameter::W, SweepParameter::Mu})
    if (s == to_string(p)) return p;
  throw ConfigError("sweep_param: unknown parameter '" + std::string(s) +
                    "' (expected lambda, alpha_pi, nu, delta, q, alpha, W or mu)");
}

std::string_view to_string(TransitionMethod m) {
  switch (m) {
    case TransitionMethod::MaxSlope: return "max_slope";
    case TransitionMethod::MaxCurvature: return "max_curvature";
    case TransitionMethod::JumpDetect: return "jump";
    case TransitionMethod::LinearDeparture: return "linear_departure";
  }
  return "?";
}

void apply_parameter(ModelParams& params, SweepParameter p, double value) {
  auto need = [&](Family f) {
    if (params.family != f)
      throw ConfigError("sweep_param " + std::string(to_string(p)) + " does not apply to family " +
                        std::string(to_string(params.family)));
  };
  switch (p) {
    case SweepParameter::Lambda: need(Family::SlowlyVarying); params.lambda = value; break;
    case SweepParameter::AlphaPi: need(Family::SlowlyVarying); params.alpha_pi = value; break;
    case SweepParameter::Nu: need(Family::SlowlyVarying); params.nu = value; break;
    case SweepParameter::DimerDelta: need(Family::RandomDimer); params.va = params.vb + value; break;
    case SweepParameter::Q: need(Family::RandomDimer); params.q = value; break;
    case SweepParameter::Alpha: need(Family::LongRangeCorrelated); params.alpha = value; break;
    case SweepParameter::W: need(Family::LongRangeHopping); params.w = value; break;
    case SweepParameter::Mu: need(Family::LongRangeHopping); params.mu = value; break;
  }
}

namespace {

void check_curve(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() != values.size()) throw ConfigError("detect_transition: grid and values differ in length");
  if (grid.size() < 5) throw ConfigError("detect_transition: need at least 5 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("detect_transition: grid must be strictly increasing");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TransitionReport detect_transition(std::span<const double> grid, std::span<const double> values,
                                   std::span<const double> std_error) {
  check_curve(grid, values);
  const std::size_t n = grid.size();
  TransitionReport report;

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean_err = 0.0;
  if (!std_error.empty()) {
    if (std_error.size() != n) throw ConfigError("detect_transition: std_error length mismatch");
    mean_err = std::accumulate(std_error.begin(), std_error.end(), 0.0) / static_cast<double>(n);
  }
  const double span = *hi - *lo;
  if (span == 0.0 || span < 10.0 * mean_err) return report;

  // max |slope| between neighbours
  std::vector<double> steps(n - 1);
  std::size_t best_slope = 0;
  double best_slope_value = -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    steps[i] = values[i + 1] - values[i];
    const double slope = std::abs(steps[i]) / (grid[i + 1] - grid[i]);
    if (slope > best_slope_value) {
      best_slope_value = slope;
      best_slope = i;
    }
  }
  report.max_slope = TransitionEstimate{0.5 * (grid[best_slope] + grid[best_slope + 1]), TransitionMethod::MaxSlope,
                                        grid[best_slope + 1] - grid[best_slope], best_slope_value};

  // Knee where the curve flattens fastest: the second derivative (non-uniform
  // three-point rule) taken with the sign that reduces |slope| along the
  // overall trend. A curve with no net trend falls back to |d2|.
  const double trend = (values[n - 1] > values[0]) - (values[n - 1] < values[0]);
  std::size_t best_curv = 1;
  double best_curv_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = grid[i] - grid[i - 1];
    const double hp = grid[i + 1] - grid[i];
    const double d2 = 2.0 * (steps[i] / hp - steps[i - 1] / hm) / (hp + hm);
    const double flattening = trend != 0.0 ? -trend * d2 : std::abs(d2);
    if (flattening > best_curv_value) {
      best_curv_value = flattening;
      best_curv = i;
    }
  }
  report.max_curvature =
      TransitionEstimate{grid[best_curv], TransitionMethod::MaxCurvature,
                         std::max(grid[best_curv] - grid[best_curv - 1], grid[best_curv + 1] - grid[best_curv]),
                         best_curv_value};

  // single step larger than 3x the median absolute step
  std::vector<double> abs_steps(steps.size());
  std::transform(steps.begin(), steps.end(), abs_steps.begin(), [](double s) { return std::abs(s); });
  const double med = median(abs_steps);
  const auto biggest = std::max_element(abs_steps.begin(), abs_steps.end());
  if (*biggest > 3.0 * med) {
    const auto i = static_cast<std::size_t>(biggest - abs_steps.begin());
    report.jump = TransitionEstimate{0.5 * (grid[i] + grid[i + 1]), TransitionMethod::JumpDetect,
                                     grid[i + 1] - grid[i], *biggest};
  }

  report.headline = report.jump ? report.jump : report.max_curvature;
  return report;
}

std::optional<TransitionEstimate> detect_linear_departure(std::span<const double> grid,
                                                          std::span<const double> values,
                                                          double fit_upper, double tolerance) {
  check_curve(grid, values);
  std::size_t m = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < grid.size() && grid[i] <= fit_upper; ++i, ++m) {
    sx += grid[i];
    sy += values[i];
    sxx += grid[i] * grid[i];
    sxy += grid[i] * values[i];
  }
  if (m < 2 || m == grid.size()) return std::nullopt;
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = values[i] - (intercept + slope * grid[i]);
    ss += r * r;
  }
  const double limit = std::max(tolerance, 3.0 * std::sqrt(ss / m));
  for (std::size_t i = m; i < grid.size(); ++i) {
    const double r = values[i] - (intercept + slope * grid[i]);
    if (std::abs(r) > limit)
      return TransitionEstimate{grid[i], TransitionMethod::LinearDeparture, grid[i] - grid[i - 1], std::abs(r)};
  }
  return std::nullopt;
}

int SweepSpec::samples_for(int n) const {
  const auto it = samples_by_size.find(n);
  return it != samples_by_size.end() ? it->second : base.samples;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ConfigError("grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("grid must be strictly increasing");
  if (sizes.empty()) throw ConfigError("sizes must not be empty");
  for (const auto& [n, s] : samples_by_size)
    if (s < 1) throw ConfigError("samples_by_N: sample count for N=" + std::to_string(n) + " must be positive");
  for (int n : sizes) {
    EnsembleSpec e = base;
    e.params.n = n;
    e.samples = samples_for(n);
    e.collect_states = false;
    for (double v : grid) {
      apply_parameter(e.params, parameter, v);
      e.validate();
    }
  }
}

SweepResult sweep_parameter(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.parameter = spec.parameter;
  result.grid = spec.grid;
  for (int n : spec.sizes) {
    EnsembleSpec e = spec.base;
    e.params.n = n;
    e.samples = spec.samples_for(n);
    e.collect_states = false;
    std::vector<SweepPoint> points;
    std::vector<double> means, errors;
    for (double v : spec.grid) {
      apply_parameter(e.params, spec.parameter, v);
      GlobalStats g;
      try {
        g = run_ensemble(e).global;
      } catch (ConvergenceFailure& err) {
        ConvergenceFailure tagged(err.index(), std::string(err.what()) + " at " + std::string(to_string(spec.parameter)) +
                                                   "=" + std::to_string(v) + ", N=" + std::to_string(n));
        tagged.realization = err.realization;
        throw tagged;
      }
      points.push_back({g.mean, g.std_error});
      means.push_back(g.mean);
      errors.push_back(g.std_error);
    }
    result.per_n[n] = std::move(points);
    if (spec.grid.size() >= 5) result.transitions[n] = detect_transition(spec.grid, means, errors);
  }
  return result;
}

MobilityEdgeEstimate detect_mobility_edges(const BinnedCurve& curve, double threshold, int n) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve.populated(i)) idx.push_back(i);
  if (idx.size() < 16)
    throw ConfigError("detect_mobility_edges: need at least 16 populated bins (got " + std::to_string(idx.size()) + ")");

  MobilityEdgeEstimate out;
  out.threshold = threshold;
  out.n = n;
  const auto& e = curve.bin_centers;
  const auto& v = curve.mean_scaled_concurrence;

  std::size_t first = idx.size();
  for (std::size_t k = 0; k < idx.size(); ++k)
    if (v[idx[k]] >= threshold) {
      first = k;
      break;
    }
  if (first == idx.size()) return out;  // nothing above threshold
  std::size_t last = first;
  for (std::size_t k = idx.size(); k-- > 0;)
    if (v[idx[k]] >= threshold) {
      last = k;
      break;
    }

  auto crossing = [&](std::size_t below, std::size_t above) {
    const double e0 = e[below], e1 = e[above], v0 = v[below], v1 = v[above];
    return e0 + (threshold - v0) * (e1 - e0) / (v1 - v0);
  };
  if (first > 0) out.lower_edge = crossing(idx[first - 1], idx[first]);
  if (last + 1 < idx.size()) out.upper_edge = crossing(idx[last + 1], idx[last]);
  return out;
}

std::vector<double> moving_average(std::span<const double> values, int width) {
  if (width < 1 || width % 2 == 0) throw ConfigError("moving_average: width must be odd and positive");
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i])) finite.push_back(i);
  std::vector<double> out(values.begin(), values.end());
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  const auto count = static_cast<std::ptrdiff_t>(finite.size());
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto a = std::max<std::ptrdiff_t>(0, k - half);
    const auto b = std::min<std::ptrdiff_t>(count - 1, k + half);
    double s = 0.0;
    for (auto m = a; m <= b; ++m) s += values[finite[m]];
    out[finite[k]] = s / static_cast<double>(b - a + 1);
  }
  return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i])) finite.push_back(i);
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < finite.size(); ++k) {
    const double v = values[finite[k]];
    if (v > values[finite[k - 1]] && v > values[finite[k + 1]]) out.push_back(finite[k]);
  }
  return out;
}

}  // namespace tbent
