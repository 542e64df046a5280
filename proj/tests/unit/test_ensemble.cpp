#include <doctest.h>

#include <cmath>
#include <random>

#include "tbent/ensemble.hpp"
#include "tbent/errors.hpp"

using namespace tbent;

namespace {

EnsembleSpec dimer_spec(int samples) {
  EnsembleSpec s;
  s.params.family = Family::RandomDimer;
  s.params.n = 40;
  s.params.va = 2.0;
  s.samples = samples;
  s.base_seed = 11;
  s.threads = 1;
  s.energy_bins = 20;
  return s;
}

}  // namespace

TEST_CASE("binning") {
  SUBCASE("single point") {
    const CurvePoint p{0.35, 1.25};
    const auto c = bin_energies({&p, 1}, 10, EnergyRange{0.0, 1.0});
    CHECK(c.counts[3] == 1);
    CHECK(c.mean_scaled_concurrence[3] == 1.25);
    CHECK(c.std_error[3] == 0.0);
    CHECK(std::isnan(c.mean_scaled_concurrence[0]));
    CHECK(c.populated_count() == 1);
  }
  SUBCASE("two equal values") {
    const CurvePoint p[] = {{0.31, 0.7}, {0.32, 0.7}};
    const auto c = bin_energies(p, 10, EnergyRange{0.0, 1.0});
    CHECK(c.counts[3] == 2);
    CHECK(c.std_error[3] == 0.0);
  }
  SUBCASE("top edge and out of range") {
    const CurvePoint p[] = {{1.0, 1.0}, {1.5, 1.0}, {-0.1, 1.0}};
    const auto c = bin_energies(p, 10, EnergyRange{0.0, 1.0});
    CHECK(c.counts[9] == 1);
    CHECK(c.out_of_range == 2);
  }
  SUBCASE("synthetic linear field") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CurvePoint> pts;
    for (int i = 0; i < 10000; ++i) {
      const double e = u(gen);
      pts.push_back({e, e});
    }
    const auto c = bin_energies(pts, 10, EnergyRange{0.0, 1.0});
    for (std::size_t b = 0; b < 10; ++b) CHECK(std::abs(c.mean_scaled_concurrence[b] - c.bin_centers[b]) <= 0.01);
  }
  SUBCASE("default range pads the data") {
    const CurvePoint p[] = {{-1.0, 0.0}, {1.0, 0.0}};
    const auto c = bin_energies(p, 8);
    CHECK(c.range.min < -1.0);
    CHECK(c.range.max > 1.0);
    CHECK(c.out_of_range == 0);
  }
}

TEST_CASE("decoupled sites: every bin is zero") {
  auto s = dimer_spec(5);
  s.params.t = 0.0;
  const auto r = run_ensemble(s);
  for (std::size_t b = 0; b < r.curve.size(); ++b) {
    if (!r.curve.populated(b)) continue;
    CHECK(r.curve.mean_scaled_concurrence[b] == 0.0);
    CHECK(r.curve.std_error[b] == 0.0);
  }
  CHECK(r.global.mean == 0.0);
}

TEST_CASE("merge order does not matter") {
  const auto s = dimer_spec(12);
  auto a = run_realizations(s, 0, 5);
  auto b = run_realizations(s, 5, 12);
  auto ab = a;
  ab.merge(b);
  auto ba = b;
  ba.merge(a);
  const auto whole = run_realizations(s, 0, 12);
  CHECK(ab.global_stats().mean == whole.global_stats().mean);
  CHECK(ba.global_stats().mean == whole.global_stats().mean);
  CHECK(ab.binned(s).mean_scaled_concurrence == ba.binned(s).mean_scaled_concurrence);
  CHECK_THROWS(ab.add(run_realization(s, 3)));
}

TEST_CASE("worker count does not change results") {
  auto s = dimer_spec(10);
  const auto one = run_ensemble(s);
  s.threads = 4;
  const auto four = run_ensemble(s);
  CHECK(one.global.mean == four.global.mean);
  CHECK(one.global.std_error == four.global.std_error);
  CHECK(one.curve.counts == four.curve.counts);
}

TEST_CASE("standard error shrinks like 1/sqrt(samples)") {
  auto s = dimer_spec(25);
  s.collect_states = false;
  const double e25 = run_ensemble(s).global.std_error;
  s.samples = 400;
  const double e400 = run_ensemble(s).global.std_error;
  CHECK(e25 / e400 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("deterministic family runs once") {
  EnsembleSpec s;
  s.params.n = 400;
  s.params.lambda = 4.0;
  s.samples = 30;
  s.threads = 1;
  s.energy_bins = 10;
  CHECK(s.effective_samples() == 1);
  const auto r = run_ensemble(s);
  CHECK(r.global.samples == 1);
  for (std::size_t b = 0; b < r.curve.size(); ++b)
    if (r.curve.populated(b)) CHECK(r.curve.mean_scaled_concurrence[b] < 0.5);
}

TEST_CASE("state-index binning") {
  auto s = dimer_spec(6);
  s.binning = BinningMode::StateIndex;
  const auto r = run_ensemble(s);
  CHECK(r.curve.size() == 40);
  for (std::size_t b = 0; b < 40; ++b) CHECK(r.curve.counts[b] == 6);
  for (std::size_t b = 1; b < 40; ++b) CHECK(r.curve.bin_centers[b] >= r.curve.bin_centers[b - 1]);
}

TEST_CASE("spec validation") {
  auto s = dimer_spec(0);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = dimer_spec(4);
  s.energy_bins = 3;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
