// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "doctest.h"
#include "ivmap/errors.hpp"
#include "ivmap/lateral.hpp"
#include "ivmap/zoo.hpp"

using namespace ivmap;

namespace {

PiecewiseMap rotation(double alpha) {
  return PiecewiseMap("rotation",
                      {{0.0, 1.0 - alpha, Form(Affine{1.0, alpha}), Orientation::increasing},
                       {1.0 - alpha, 1.0, Form(Affine{1.0, alpha - 1.0}), Orientation::increasing}},
                      {1.0 - alpha});
}

// closed-form period-2 points of the logistic map
std::pair<double, double> period_two(double lambda) {
  const double r = std::sqrt((lambda + 1) * (lambda - 3));
  return {(lambda + 1 - r) / (2 * lambda), (lambda + 1 + r) / (2 * lambda)};
}

}  // namespace

TEST_CASE("lateral steps of the full logistic map") {
  const PiecewiseMap f = make_logistic(4.0);
  CHECK(lateral_step(f, {0.5, Side::minus}) == LateralState{1.0, Side::minus});
  CHECK(lateral_step(f, {1.0, Side::minus}) == LateralState{0.0, Side::plus});
  CHECK(lateral_step(f, {0.0, Side::plus}) == LateralState{0.0, Side::plus});
  CHECK(lateral_step(f, {0.5, Side::plus}) == LateralState{1.0, Side::minus});
}

TEST_CASE("lateral orbit examples") {
  const PiecewiseMap f = make_logistic(4.0);
  const LateralOrbit o = lateral_orbit(f, {0.5, Side::minus}, 5);
  const std::vector<double> want{0.5, 1.0, 0.0, 0.0, 0.0, 0.0};
  REQUIRE(o.states.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(o.states[k].coord == want[k]);

  const LateralOrbit zero = lateral_orbit(f, {0.3, Side::plus}, 0);
  CHECK(zero.states.size() == 1);
  CHECK(zero.states[0] == LateralState{0.3, Side::plus});

  const LateralOrbit lz = lateral_orbit(make_lorenz({}), {0.5, Side::minus}, 1);
  CHECK(lz.states[1].coord == 0.9);
}

TEST_CASE("lateral consistency: limits agree with nearby real values") {
  const PiecewiseMap f = make_lorenz({0.45, 2.0, 3.0, 0.92, 0.07});
  const double eps = 1e-9;
  for (double x : {0.1, 0.3, 0.45, 0.6, 0.8}) {
    const LateralState l = lateral_step(f, {x, Side::minus});
    const LateralState r = lateral_step(f, {x, Side::plus});
    CHECK(std::abs(l.coord - f.eval(x - eps)) < 1e-6);
    CHECK(std::abs(r.coord - f.eval(x + eps)) < 1e-6);
  }
}

TEST_CASE("side parity: the side flips once per decreasing branch used") {
  const PiecewiseMap f = make_logistic(3.9);
  const LateralOrbit o = lateral_orbit(f, {0.37, Side::plus}, 200);
  REQUIRE(o.states.size() == 201);
  int flips = 0;
  for (std::size_t k = 0; k + 1 < o.states.size(); ++k) {
    const bool decreasing = f.branches()[o.branches[k]].orientation == Orientation::decreasing;
    CHECK((o.states[k + 1].side != o.states[k].side) == decreasing);
    flips += decreasing ? 1 : 0;
  }
  CHECK((flips % 2 == 0) == (o.states.back().side == Side::plus));
}

TEST_CASE("periodic detection examples") {
  const PiecewiseMap f4 = make_logistic(4.0);
  const PeriodicSearch z = detect_periodic_like(f4, {0.0, Side::plus}, 8);
  REQUIRE(z.record);
  CHECK(z.record->period == 1);
  CHECK(z.record->multiplier == 4.0);
  CHECK_FALSE(z.record->attracting());

  const PiecewiseMap f32 = make_logistic(3.2);
  const PeriodicSearch p = detect_periodic_like(f32, {0.51304, Side::plus}, 8, 1e-6);
  REQUIRE(p.record);
  CHECK(p.record->period == 2);
  CHECK(p.record->multiplier == doctest::Approx(-3.2 * 3.2 + 2 * 3.2 + 4).epsilon(1e-9));
  CHECK(p.record->attracting());
  CHECK(std::abs(p.record->point.coord - period_two(3.2).first) < 1e-9);

  CHECK_FALSE(detect_periodic_like(f4, {0.3, Side::plus}, 8).record);
}

TEST_CASE("multiplier classification margin") {
  CHECK(classify_multiplier(0.5) == Stability::attracting);
  CHECK(classify_multiplier(1.0) == Stability::indifferent);
  CHECK(classify_multiplier(1.0 + 5e-10) == Stability::indifferent);
  CHECK(classify_multiplier(1.1) == Stability::repelling);
}

TEST_CASE("omega estimates") {
  const OmegaCover fixed = omega_estimate(make_logistic(2.5), 0.3, 1000, 1000, 1e-3);
  REQUIRE(fixed.cells.size() == 1);
  CHECK(std::abs(fixed.cell_center(fixed.cells[0]) - 0.6) <= 5e-4 + 1e-12);
  REQUIRE(fixed.period);
  CHECK(*fixed.period == 1);

  const OmegaCover two = omega_estimate(make_logistic(3.2), 0.3, 10000, 10000, 1e-3);
  REQUIRE(two.cells.size() == 2);
  CHECK(*two.period == 2);
  const auto [p, q] = period_two(3.2);
  CHECK(std::abs(two.cell_center(two.cells[0]) - p) <= 5e-4 + 1e-12);
  CHECK(std::abs(two.cell_center(two.cells[1]) - q) <= 5e-4 + 1e-12);

  const OmegaCover full = omega_estimate(make_logistic(4.0), 0.3, 1000, 1000000, 1e-2);
  CHECK(full.cells.size() == 100);
  CHECK_FALSE(full.period);
}

TEST_CASE("omega cover is monotone under refinement") {
  // every coarse cell of a refined cover is visited by the coarse cover and conversely
  const PiecewiseMap f = make_logistic(3.7);
  const OmegaCover fine = omega_estimate(f, 0.41, 2000, 50000, 1e-3);
  const OmegaCover coarse = omega_estimate(f, 0.41, 2000, 50000, 2e-3);
  std::set<std::uint32_t> projected;
  for (std::uint32_t c : fine.cells) projected.insert(c / 2);
  CHECK(std::set<std::uint32_t>(coarse.cells.begin(), coarse.cells.end()) == projected);
  CHECK(coarse.cells.size() <= fine.cells.size());
}

TEST_CASE("exact hit on the exceptional set gives a partial cover") {
  const OmegaCover c = omega_estimate(make_logistic(4.0), 0.5, 10, 10, 1e-2);
  CHECK(c.partial);
}

TEST_CASE("rotation numbers") {
  CHECK(rotation_number(rotation(0.25), 0.75, 10000) == 0.25);
  CHECK(rotation_number(rotation(1.0 / 3.0), 1.0 - 1.0 / 3.0, 999) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("gap-map rotation is monotone in v") {
  double prev = -1.0;
  for (int k = 0; k < 10; ++k) {
    LorenzParams p;
    p.u = 0.7;
    p.v = 0.1 + 0.35 * k / 9.0;
    const GapMap g = extract_gap_map(make_lorenz(p));
    const double rho = rotation_number(g.map, p.c, 100000);
    CHECK(rho > 0.0);
    CHECK(rho < 1.0);
    CHECK(rho >= prev);
    prev = rho;
  }
}

TEST_CASE("rotation number rejects non-injective maps") {
  CHECK_THROWS_AS(rotation_number(make_logistic(4.0), 0.5, 100), Error);
}
