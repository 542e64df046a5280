#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "tbent/eigensolve.hpp"
#include "tbent/entanglement.hpp"

using namespace tbent;

TEST_CASE("pairwise concurrence") {
  const std::vector<double> w(5, 1.0 / std::sqrt(5.0));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) CHECK(pairwise_concurrence(w, i, j) == doctest::Approx(0.4));
  const std::vector<double> bell{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.0, 0.0};
  CHECK(pairwise_concurrence(bell, 0, 1) == doctest::Approx(1.0));
  CHECK(pairwise_concurrence(bell, 0, 2) == 0.0);
  CHECK(pairwise_concurrence(bell, 2, 3) == 0.0);
  const std::vector<double> delta{0.0, 1.0, 0.0};
  CHECK(pairwise_concurrence(delta, 0, 1) == 0.0);
  CHECK_THROWS(pairwise_concurrence(bell, 1, 1));
  CHECK_THROWS(pairwise_concurrence(bell, 0, 4));
}

TEST_CASE("state concurrence closed forms") {
  const std::vector<double> bell{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.0, 0.0};
  CHECK(state_concurrence(bell) == doctest::Approx(1.0 / 6.0));
  const std::vector<double> w(16, 0.25);
  CHECK(16.0 * state_concurrence(w) == 2.0);
  const std::vector<double> delta{0.0, 0.0, 1.0, 0.0};
  CHECK(state_concurrence(delta) == 0.0);
}

TEST_CASE("N = 100 free-chain ground state against the pairwise sum") {
  std::vector<double> psi(100);
  double norm = 0.0;
  for (int n = 1; n <= 100; ++n) norm += std::pow(std::sin(n * std::numbers::pi / 101), 2);
  for (int n = 1; n <= 100; ++n) psi[n - 1] = std::sin(n * std::numbers::pi / 101) / std::sqrt(norm);
  const double frozen = 0.01633420512771738;  // pairwise mean by direct summation
  CHECK(oracle::pairwise_mean(psi) == doctest::Approx(frozen).epsilon(1e-13));
  CHECK(state_concurrence(psi) == doctest::Approx(frozen).epsilon(1e-12));
}

TEST_CASE("N = 3 free chain per-state values") {
  const auto s = diagonalize(Tridiagonal{{0, 0, 0}, {-1, -1}});
  const auto report = spectrum_concurrence(s);
  REQUIRE(report.per_state.size() == 3);
  // middle state (1, 0, -1)/sqrt2
  CHECK(report.per_state[1].concurrence == doctest::Approx(1.0 / 3.0));
  CHECK(report.per_state[1].scaled == doctest::Approx(1.0));
  // outer states (1, sqrt2, 1)/2
  const std::vector<double> outer{0.5, std::sqrt(0.5), 0.5};
  CHECK(report.per_state[0].concurrence == doctest::Approx(oracle::pairwise_mean(outer)));
  CHECK(report.global == doctest::Approx((2 * oracle::pairwise_mean(outer) + 1.0 / 3.0) / 3.0));
  CHECK(report.scaled_global == doctest::Approx(3.0 * report.global));
  CHECK(report.m == 3);
}

TEST_CASE("decoupled sites give zero concurrence") {
  const auto s = diagonalize(Tridiagonal{{0.3, -1.2, 0.7, 2.0}, {0, 0, 0}});
  const auto report = spectrum_concurrence(s);
  CHECK(report.global == 0.0);
  for (const auto& st : report.per_state) CHECK(st.participation_ratio == 1.0);
}

TEST_CASE("participation ratio") {
  CHECK(participation_ratio(std::vector<double>(10, 1 / std::sqrt(10.0))) == doctest::Approx(10.0));
  CHECK(participation_ratio(std::vector<double>{0.0, 1.0, 0.0}) == 1.0);
  CHECK(participation_ratio(std::vector<double>{1 / std::sqrt(2.0), -1 / std::sqrt(2.0)}) == doctest::Approx(2.0));
}

TEST_CASE("minimum pairwise concurrence") {
  const std::vector<double> w(8, 1 / std::sqrt(8.0));
  CHECK(minimum_pairwise_concurrence(w) == doctest::Approx(2.0 / 8.0));
  const std::vector<double> psi{0.1, -0.7, 0.2, 0.68};
  double brute = 1e9;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) brute = std::min(brute, pairwise_concurrence(psi, i, j));
  CHECK(minimum_pairwise_concurrence(psi) == doctest::Approx(brute));
}
