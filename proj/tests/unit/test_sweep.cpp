#include <doctest.h>

#include <cmath>
#include <numeric>

#include "tbent/errors.hpp"
#include "tbent/sweep.hpp"

using namespace tbent;

namespace {

std::vector<double> grid(double a, double b, double step) {
  std::vector<double> g;
  for (int i = 0; a + i * step <= b + 1e-9; ++i) g.push_back(a + i * step);
  return g;
}

BinnedCurve curve_from(const std::vector<double>& e, const std::vector<double>& v) {
  BinnedCurve c;
  c.bin_centers = e;
  c.mean_scaled_concurrence = v;
  c.std_error.assign(e.size(), 0.0);
  c.counts.assign(e.size(), 1);
  return c;
}

}  // namespace

TEST_CASE("transition estimators on synthetic curves") {
  SUBCASE("step at the midpoint") {
    const auto x = grid(0.0, 4.0, 0.1);
    std::vector<double> y;
    for (double xi : x) y.push_back(xi < 2.05 ? 1.0 - 0.01 * xi : 0.2 - 0.01 * xi);
    const auto r = detect_transition(x, y);
    REQUIRE(r.jump);
    CHECK(r.jump->location == doctest::Approx(2.05));
    CHECK(r.headline->method == TransitionMethod::JumpDetect);
  }
  SUBCASE("logistic: max slope at the centre") {
    const auto x = grid(0.0, 4.0, 0.1);
    std::vector<double> y;
    for (double xi : x) y.push_back(1.0 / (1.0 + std::exp((xi - 1.7) / 0.3)));
    const auto r = detect_transition(x, y);
    CHECK(std::abs(r.max_slope->location - 1.7) <= 0.1);
  }
  SUBCASE("kink where a linear decline flattens") {
    const auto x = grid(0.5, 4.0, 0.1);
    std::vector<double> y;
    for (double xi : x) y.push_back(xi < 2.0 ? 1.5 - 0.5 * xi : 0.5 - 0.1 * (xi - 2.0));
    const auto r = detect_transition(x, y);
    REQUIRE(r.max_curvature);
    CHECK(r.max_curvature->location == doctest::Approx(2.0));
  }
  SUBCASE("rising curve: the saturation knee, not the onset") {
    const auto x = grid(0.5, 4.0, 0.25);
    std::vector<double> y;
    // onset knee at 1.0 is sharper than the saturation knee at 2.0
    for (double xi : x) y.push_back(xi < 1.0 ? 0.05 : xi < 2.0 ? 0.05 + 0.5 * (xi - 1.0) : 0.55 + 0.2 * (xi - 2.0) / 2.0);
    const auto r = detect_transition(x, y);
    CHECK(r.max_curvature->location == doctest::Approx(2.0));
  }
  SUBCASE("flat within noise") {
    const auto x = grid(0.0, 1.0, 0.1);
    std::vector<double> y(x.size(), 1.0), err(x.size(), 0.1);
    y[4] = 1.05;
    const auto r = detect_transition(x, y, err);
    CHECK_FALSE(r.headline);
  }
  SUBCASE("input checks") {
    const std::vector<double> x{0, 1, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(detect_transition(x, y), ConfigError);
  }
}

TEST_CASE("brute-force scan agrees with max slope") {
  const auto x = grid(0.0, 3.0, 0.1);
  std::vector<double> y;
  for (double xi : x) y.push_back(std::sin(2.0 * xi) + 0.3 * xi);
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (std::abs(y[i + 1] - y[i]) > std::abs(y[best + 1] - y[best])) best = i;
  CHECK(detect_transition(x, y).max_slope->location == doctest::Approx(0.5 * (x[best] + x[best + 1])));
}

TEST_CASE("linear departure") {
  const auto x = grid(1.0, 2.2, 0.1);
  std::vector<double> y;
  for (double xi : x) y.push_back(xi < 1.7 ? 1.0 - 0.5 * xi : 1.0 - 0.5 * xi + 0.3 * (xi - 1.65));
  const auto r = detect_linear_departure(x, y, 1.5, 0.01);
  REQUIRE(r);
  CHECK(r->location == doctest::Approx(1.7));
  CHECK_FALSE(detect_linear_departure(x, y, 3.0, 0.01));
}

TEST_CASE("mobility edges") {
  SUBCASE("plateau between two crossings, against an indicator scan") {
    std::vector<double> e, v;
    for (int i = 0; i < 40; ++i) {
      e.push_back(-2.0 + 0.1 * i + 0.05);
      v.push_back(std::abs(e.back()) < 1.0 ? 1.6 : 0.2);
    }
    const auto m = detect_mobility_edges(curve_from(e, v), 0.8, 100);
    REQUIRE(m.lower_edge);
    REQUIRE(m.upper_edge);
    // the indicator v >= 0.8 switches between these bin centres
    std::size_t first = 0, last = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] >= 0.8) {
        if (!first) first = i;
        last = i;
      }
    CHECK(*m.lower_edge > e[first - 1]);
    CHECK(*m.lower_edge < e[first]);
    CHECK(*m.upper_edge > e[last]);
    CHECK(*m.upper_edge < e[last + 1]);
    CHECK(*m.lower_edge == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(m.n == 100);
  }
  SUBCASE("constant curve above threshold has no edges") {
    std::vector<double> e(20), v(20, 1.5);
    std::iota(e.begin(), e.end(), 0.0);
    const auto m = detect_mobility_edges(curve_from(e, v));
    CHECK_FALSE(m.lower_edge);
    CHECK_FALSE(m.upper_edge);
  }
  SUBCASE("rising curve has only a lower edge") {
    std::vector<double> e(20), v(20);
    for (int i = 0; i < 20; ++i) {
      e[i] = i;
      v[i] = 0.1 * i;
    }
    const auto m = detect_mobility_edges(curve_from(e, v));
    REQUIRE(m.lower_edge);
    CHECK(*m.lower_edge == doctest::Approx(8.0));
    CHECK_FALSE(m.upper_edge);
  }
  SUBCASE("too few bins") {
    std::vector<double> e(10, 0.0), v(10, 1.0);
    CHECK_THROWS_AS(detect_mobility_edges(curve_from(e, v)), ConfigError);
  }
}

TEST_CASE("smoothing and local maxima") {
  const std::vector<double> v{0, 1, 0, 3, 0, 1, 0};
  CHECK(local_maxima(v) == std::vector<std::size_t>{1, 3, 5});
  const auto s = moving_average(v, 3);
  CHECK(s[3] == doctest::Approx(1.0));
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(local_maxima(s) == std::vector<std::size_t>{2, 4});
  CHECK_THROWS(moving_average(v, 2));
}

TEST_CASE("sweep over a small grid") {
  SweepSpec s;
  s.base.params.family = Family::RandomDimer;
  s.base.params.vb = 1.0;
  s.base.samples = 4;
  s.base.threads = 1;
  s.base.collect_states = false;
  s.base.base_seed = 5;
  s.parameter = SweepParameter::DimerDelta;
  s.grid = grid(0.5, 3.5, 0.5);
  s.sizes = {20, 40};
  s.samples_by_size = {{40, 2}};
  const auto r = sweep_parameter(s);
  REQUIRE(r.per_n.size() == 2);
  CHECK(r.per_n.at(20).size() == s.grid.size());
  CHECK(r.transitions.count(40) == 1);
  CHECK(s.samples_for(20) == 4);
  CHECK(s.samples_for(40) == 2);
  const auto again = sweep_parameter(s);
  for (std::size_t i = 0; i < s.grid.size(); ++i) CHECK(again.per_n.at(40)[i].mean == r.per_n.at(40)[i].mean);

  s.parameter = SweepParameter::Lambda;
  CHECK_THROWS_AS(sweep_parameter(s), ConfigError);
}
