#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tbent/ensemble.hpp"

namespace tbent {

/// Control parameters that can be swept. DimerDelta is V_a - V_b with V_b held
/// fixed.
enum class SweepParameter { Lambda, AlphaPi, Nu, DimerDelta, Q, Alpha, W, Mu };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view s);

/// Sets `value` on the field behind `p`; throws if it does not belong to the
/// family of `params`.
void apply_parameter(ModelParams& params, SweepParameter p, double value);

enum class TransitionMethod { MaxSlope, MaxCurvature, JumpDetect, LinearDeparture };

std::string_view to_string(TransitionMethod m);

struct TransitionEstimate {
  double location = 0.0;
  TransitionMethod method = TransitionMethod::MaxCurvature;
  double uncertainty = 0.0;  // one local grid spacing
  /// Steepest |dv/dx| (MaxSlope), the flattening curvature (MaxCurvature),
  /// or the jump step (JumpDetect).
  double strength = 0.0;
};

/// All estimators run on one curve. `headline` is JumpDetect when it fires
/// and MaxCurvature otherwise; every field is empty for a flat curve.
struct TransitionReport {
  std::optional<TransitionEstimate> headline;
  std::optional<TransitionEstimate> max_slope;
  std::optional<TransitionEstimate> max_curvature;
  std::optional<TransitionEstimate> jump;
};

/// Needs at least 5 strictly increasing grid points. `std_error`, when given,
/// sets the flatness floor: a curve whose range is below 10x the mean
/// standard error has no transition.
TransitionReport detect_transition(std::span<const double> grid, std::span<const double> values,
                                   std::span<const double> std_error = {});

/// First grid point above `fit_upper` whose value departs from the
/// least-squares line through the points at or below `fit_upper` by more than
/// `tolerance` (absolute) or 3x the fit's rms residual, whichever is larger.
std::optional<TransitionEstimate> detect_linear_departure(std::span<const double> grid,
                                                          std::span<const double> values,
                                                          double fit_upper, double tolerance);

struct SweepPoint {
  double mean;
  double std_error;
};

struct SweepSpec {
  EnsembleSpec base;
  SweepParameter parameter = SweepParameter::Lambda;
  std::vector<double> grid;
  std::vector<int> sizes;
  /// Per-size sample counts; sizes not listed use base.samples.
  std::map<int, int> samples_by_size;

  int samples_for(int n) const;
  void validate() const;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::Lambda;
  std::vector<double> grid;
  std::map<int, std::vector<SweepPoint>> per_n;
  std::map<int, TransitionReport> transitions;
};

/// One ensemble per (grid point, N). Every grid point reuses the same
/// realization seeds, so the disorder is common along the sweep.
SweepResult sweep_parameter(const SweepSpec& spec);

struct MobilityEdgeEstimate {
  std::optional<double> lower_edge;
  std::optional<double> upper_edge;
  double threshold = 0.8;
  int n = 0;
};

/// Outermost crossings of `threshold` by the curve, linearly interpolated
/// between populated bins. A side whose outermost bin is already above the
/// threshold has no edge there. Requires 16 populated bins.
MobilityEdgeEstimate detect_mobility_edges(const BinnedCurve& curve, double threshold = 0.8, int n = 0);

/// Centred moving average over `width` populated neighbours (odd width);
/// NaN entries stay NaN and are skipped.
std::vector<double> moving_average(std::span<const double> values, int width);

/// Indices of strict interior local maxima among the finite entries.
std::vector<std::size_t> local_maxima(std::span<const double> values);

}  // namespace tbent
