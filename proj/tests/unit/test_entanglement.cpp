#include <doctest.h>

#include <cmath>

#include "anderson/entanglement.hpp"
#include "anderson/error.hpp"
#include "anderson/rng.hpp"
#include "oracle.hpp"

using namespace anderson;

namespace {

State random_state(GaussianStream& g, std::size_t n) {
  std::vector<Complex> a(n);
  for (auto& z : a) z = Complex(g.next(), g.next());
  return State(a, State::Normalization::Normalize);
}

}  // namespace

TEST_CASE("state normalization modes") {
  CHECK_THROWS_AS(State({Complex(1, 0), Complex(1, 0)}), Error);
  const State s({Complex(3, 0), Complex(0, 4)}, State::Normalization::Normalize);
  CHECK(s.magnitude(0) == doctest::Approx(0.6));
  CHECK(s.magnitude(1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(State({Complex(0, 0), Complex(0, 0)}, State::Normalization::Normalize), Error);
  CHECK_THROWS_AS(State({Complex(NAN, 0), Complex(1, 0)}, State::Normalization::Normalize), Error);
  CHECK_NOTHROW(State({Complex(1.0 + 1e-12, 0)}));
  const std::vector<double> re{0.6, -0.8};
  CHECK(State::from_real(re)[1].real() == -0.8);
}

TEST_CASE("pair concurrence") {
  const State s({Complex(0.6, 0), Complex(0, 0.8)});
  CHECK(concurrence_pair(s, 0, 1) == doctest::Approx(0.96));
  CHECK(concurrence_pair(s, 1, 0) == concurrence_pair(s, 0, 1));
  CHECK_THROWS_AS(concurrence_pair(s, 0, 0), Error);
  CHECK_THROWS_AS(concurrence_pair(s, 0, 2), Error);
}

TEST_CASE("closed-form average concurrence equals the pair sum") {
  GaussianStream g(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 63;
    const State s = random_state(g, n);
    const double direct = oracle::pair_sum_average(s.amplitudes());
    CHECK(std::abs(average_concurrence(s) - direct) <= 1e-12 * direct);
  }
}

TEST_CASE("average concurrence extremes") {
  for (std::size_t n : {2u, 3u, 16u, 1600u}) {
    CHECK(average_concurrence(State::w(n)) == doctest::Approx(2.0 / static_cast<double>(n)).epsilon(1e-13));
    CHECK(average_concurrence(State::delta(n, n / 2)) == 0.0);
  }
  // The W state maximizes <C>: (sum |psi|)^2 <= N by Cauchy-Schwarz.
  GaussianStream g(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 40;
    const double c = average_concurrence(random_state(g, n));
    CHECK(c >= 0.0);
    CHECK(c <= 2.0 / static_cast<double>(n) * (1.0 + 1e-12));
  }
}

TEST_CASE("average concurrence ignores local phases") {
  GaussianStream g(8);
  const State s = random_state(g, 20);
  std::vector<Complex> rotated(s.amplitudes().begin(), s.amplitudes().end());
  for (auto& z : rotated) z *= std::polar(1.0, 6.0 * g.next());
  CHECK(average_concurrence(State(rotated)) == doctest::Approx(average_concurrence(s)).epsilon(1e-13));
}

TEST_CASE("nearest-neighbour profile") {
  const State w = State::w(10);
  const auto open = nn_profile(w, Boundary::Open);
  const auto ring = nn_profile(w, Boundary::Periodic);
  CHECK(open.size() == 9);
  REQUIRE(ring.size() == 10);
  for (double c : ring) CHECK(c == doctest::Approx(0.2));
  GaussianStream g(9);
  const State s = random_state(g, 7);
  const auto p = nn_profile(s, Boundary::Periodic);
  CHECK(p[6] == doctest::Approx(concurrence_pair(s, 6, 0)));
  CHECK(p[2] == doctest::Approx(concurrence_pair(s, 2, 3)));
}

TEST_CASE("offset sites") {
  CHECK(offset_site(10, 8, 3, Boundary::Periodic) == 1);
  CHECK(offset_site(10, 1, -3, Boundary::Periodic) == 8);
  CHECK(offset_site(10, 8, 3, Boundary::Open) == 10);
  CHECK(offset_site(10, 1, -2, Boundary::Open) == 10);
  CHECK(offset_site(10, 4, -4, Boundary::Open) == 0);
}

TEST_CASE("center profile covers every other site once") {
  GaussianStream g(10);
  for (std::size_t n : {5u, 6u, 21u}) {
    const State s = random_state(g, n);
    for (Boundary bc : {Boundary::Open, Boundary::Periodic}) {
      const auto prof = center_profile(s, bc);
      CHECK(prof.size() == n - 1);
      std::size_t center = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (s.magnitude(i) > s.magnitude(center)) center = i;
      std::vector<int> hits(n, 0);
      for (const auto& oc : prof) {
        const std::size_t site = offset_site(n, center, oc.offset, bc);
        REQUIRE(site < n);
        ++hits[site];
        CHECK(oc.value == doctest::Approx(concurrence_pair(s, center, site)));
      }
      for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == (i == center ? 0 : 1));
    }
  }
}
