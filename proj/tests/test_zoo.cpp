// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "ivmap/classifier.hpp"
#include "ivmap/errors.hpp"
#include "ivmap/zoo.hpp"

using namespace ivmap;

TEST_CASE("zoo maps validate cleanly") {
  for (double lam : {1.5, 2.5, 3.2, 3.83, 4.0}) CHECK(validate(make_logistic(lam), 2000).clean());
  CHECK(validate(make_lorenz({}), 2000).clean());
  CHECK(validate(make_lorenz({0.4, 3.0, 2.5, 0.95, 0.02}), 2000).clean());
}

TEST_CASE("Lorenz anchors are exact") {
  const LorenzParams p{0.4, 3.0, 2.5, 0.87, 0.13};
  const PiecewiseMap f = make_lorenz(p);
  CHECK(f.eval(0.0) == 0.0);
  CHECK(f.eval(1.0) == 1.0);
  CHECK(f.one_sided(0.4, Side::minus).value == 0.87);
  CHECK(f.one_sided(0.4, Side::plus).value == 0.13);
  const LorenzCheck chk = check_contracting_lorenz(f);
  CHECK(chk.ok);
  CHECK(chk.c == 0.4);
}

TEST_CASE("zoo parameter gates") {
  CHECK_THROWS_AS(make_logistic(0.0), Error);
  CHECK_THROWS_AS(make_logistic(4.5), Error);
  CHECK_THROWS_AS(make_lorenz({0.5, 2.0, 2.0, 0.4, 0.1}), Error);
  CHECK_THROWS_AS(make_lorenz({0.5, 1.0, 2.0, 0.9, 0.1}), Error);
}

TEST_CASE("gap map extraction") {
  const PiecewiseMap f = make_lorenz({0.5, 2.0, 2.0, 0.7, 0.3});
  const GapMap g = extract_gap_map(f);
  CHECK(g.info.is_gap_map);
  CHECK(g.info.v0 == 0.3);
  CHECK(g.info.v1 == 0.7);
  CHECK(g.map.branches().front().lo == 0.3);
  CHECK(g.map.branches().back().hi == 0.7);
  CHECK(g.map.exceptional_set() == std::vector<double>{0.5});
  // endpoint-image arithmetic: |f(J minus c)| = (u - f(v0)) + (f(v1) - v)
  const double measure = (0.7 - f.eval(0.3)) + (f.eval(0.7) - 0.3);
  CHECK(g.info.image_measure == doctest::Approx(measure).epsilon(1e-12));
  CHECK(measure < 0.4);
}

TEST_CASE("gap map refusal") {
  CHECK_THROWS_AS(extract_gap_map(make_logistic(4.0)), Error);
  // symmetric steep map: the branch images overlap
  CHECK_THROWS_AS(extract_gap_map(make_lorenz({})), Error);
}

TEST_CASE("distance to rationals") {
  CHECK(distance_to_rationals(0.5, 5) == 0.0);
  CHECK(distance_to_rationals(0.3819660112501051, 20) > 1e-3);
}

TEST_CASE("exceptional-wandering-interval construction") {
  EwiOptions opt;
  opt.rotation_steps = 20000;
  const LorenzParams base{0.5, 2.0, 2.0, 0.7, 0.3};
  const EwiResult r = construct_ewi(base, opt);
  const PiecewiseMap& F = r.map;
  const PiecewiseMap f = make_lorenz(r.params);
  REQUIRE(F.exceptional_set().size() == 2);
  CHECK(F.exceptional_set()[0] == r.a);
  CHECK(std::abs(r.rotation - opt.rotation_target) <= opt.target_tolerance);
  for (int k = 1; k < 500; ++k) {
    const double x = r.a + (1.0 - r.a) * k / 500.0;
    if (x == r.params.c) continue;
    CHECK(F.eval(x) == f.eval(x));
  }
  CHECK(F.one_sided(r.a, Side::minus).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(F.one_sided(r.a, Side::plus).value == doctest::Approx(f.eval(r.a)).epsilon(1e-15));
  CHECK(attractor_count_bound(F.exceptional_set().size()) == 32);
}
