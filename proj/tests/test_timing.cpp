#include "doctest.h"

#include <stdexcept>

#include "gfa/timing.hpp"

using namespace gfa;
using namespace gfa::timing;

TEST_CASE("round trip times per scheme") {
  CHECK(rtt(Scheme::reactive()) == 4);
  CHECK(rtt(Scheme::krepetition(1)) == 4);
  CHECK(rtt(Scheme::krepetition(4)) == 7);
  CHECK(rtt(Scheme::proactive(8)) == 11);  // full round, l = 0
  CHECK(proactive_rtt(8, 0) == 11);
  CHECK(proactive_rtt(8, 1) == 4);
  CHECK(proactive_rtt(8, 5) == 8);
  CHECK_THROWS_AS(proactive_rtt(8, 9), std::invalid_argument);
  CHECK_THROWS_AS(proactive_rtt(0, 0), std::invalid_argument);
}

TEST_CASE("latency after m round trips") {
  CHECK(latency_after(Scheme::reactive(), 1) == 5);
  CHECK(latency_after(Scheme::reactive(), 3) == 13);
  CHECK(latency_after(Scheme::krepetition(4), 2) == 15);
  CHECK(latency_after(Scheme::proactive(8), 1, 1) == 5);
  CHECK(latency_after(Scheme::proactive(8), 1, 8) == 12);
  CHECK(latency_after(Scheme::proactive(8), 2, 1) == 16);
  CHECK(latency_after(Scheme::proactive(8), 1, 0) == 12);  // whole round failed
  CHECK(latency_after(Scheme::proactive(8), 2, 0) == 23);
  CHECK_THROWS_AS(latency_after(Scheme::reactive(), 0), std::invalid_argument);
}

TEST_CASE("max complete rounds within the budget") {
  CHECK(max_rounds(Scheme::reactive(), {9}) == 2);
  CHECK(max_rounds(Scheme::reactive(), {4}) == 0);  // P_F = 1 region
  CHECK(max_rounds(Scheme::reactive(), {5}) == 1);
  CHECK(max_rounds(Scheme::krepetition(4), {15}) == 2);
  CHECK(max_rounds(Scheme::krepetition(8), {11}) == 0);
  CHECK_THROWS_AS(max_rounds(Scheme::proactive(8), {10}), std::invalid_argument);
  CHECK_THROWS_AS(max_rounds(Scheme::reactive(), {0}), std::invalid_argument);
}

TEST_CASE("latency bracketing at the max round count") {
  for (Scheme s : {Scheme::reactive(), Scheme::krepetition(2), Scheme::krepetition(4),
                   Scheme::krepetition(8)}) {
    for (int t = 1; t <= 200; ++t) {
      const int m = max_rounds(s, {t});
      if (m >= 1) {
        CHECK(latency_after(s, m) <= t);
      }
      CHECK(latency_after(s, m + 1) > t);
    }
  }
}

TEST_CASE("proactive index split") {
  CHECK(proactive_indices(8, {13}).mu == 1);
  CHECK(proactive_indices(8, {13}).nu == 0);
  CHECK(proactive_indices(8, {9}).mu == 0);
  CHECK(proactive_indices(8, {9}).nu == 7);
  CHECK(proactive_indices(8, {4}).mu == 0);
  CHECK(proactive_indices(8, {4}).nu == 2);  // failure-certain case
  CHECK(proactive_indices(8, {1}).mu == 0);
  CHECK(proactive_indices(8, {1}).nu == 0);
  // reconstruction: mu*(Kmax+3) + nu == T - 2 for T >= 2
  for (int kmax : {1, 2, 4, 8}) {
    for (int t = 2; t <= 200; ++t) {
      const auto [mu, nu] = proactive_indices(kmax, {t});
      CHECK(mu * (kmax + 3) + nu == t - 2);
      CHECK(nu >= 0);
      CHECK(nu < kmax + 3);
    }
  }
}

TEST_CASE("krep with one repetition is reactive") {
  CHECK(rtt(Scheme::krepetition(1)) == rtt(Scheme::reactive()));
  for (int m = 1; m <= 10; ++m)
    CHECK(latency_after(Scheme::krepetition(1), m) == latency_after(Scheme::reactive(), m));
}

TEST_CASE("budget milliseconds derive from the TTI duration") {
  LatencyBudget b{8};
  CHECK(b.t_ms(0.125) == doctest::Approx(1.0));
}
