// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "ivmap/errors.hpp"
#include "ivmap/return_map.hpp"
#include "ivmap/zoo.hpp"

using namespace ivmap;

namespace {

double iterate(const PiecewiseMap& f, double x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x = f.eval(x);
  return x;
}

// Three increasing affine branches; the c- orbit falls onto an attracting
// 5-cycle 0.9, 0.025, 0.075, 0.225, 0.675 that misses (0.3, 0.6).
PiecewiseMap three_branch() {
  return PiecewiseMap("three_branch",
                      {{0.0, 0.3, Form(Affine{3.0, 0.0}), Orientation::increasing},
                       {0.3, 0.8, Form(Affine{0.1, 0.9 - 0.0675}), Orientation::increasing},
                       {0.8, 1.0, Form(Affine{0.25, -0.2}), Orientation::increasing}},
                      {0.3, 0.8});
}

void check_branch_invariants(const PiecewiseMap& f, Interval base, const std::vector<ReturnBranch>& branches) {
  for (const ReturnBranch& b : branches) {
    for (double s : {0.25, 0.5, 0.75}) {
      const double x = b.sub_lo + s * (b.sub_hi - b.sub_lo);
      double y = x;
      for (std::size_t j = 1; j < b.return_time; ++j) {
        y = f.eval(y);
        CHECK_FALSE(base.contains_open(y));
      }
      y = f.eval(y);
      CHECK(base.contains_open(y));
    }
  }
  for (std::size_t k = 1; k < branches.size(); ++k) CHECK(branches[k - 1].sub_hi <= branches[k].sub_lo);
}

}  // namespace

TEST_CASE("niceness examples") {
  const PiecewiseMap f = make_logistic(4.0);
  CHECK(check_nice(f, {0.25, 0.75}, 100).nice);
  const NiceReport r = check_nice(f, {0.2, 0.4}, 5);
  CHECK_FALSE(r.nice);
  REQUIRE(r.violation);
  CHECK(r.violation->endpoint == 0.2);
  CHECK(r.violation->step == 3);
  CHECK(r.violation->coord == doctest::Approx(iterate(f, 0.2, 3)).epsilon(1e-12));
  CHECK(check_nice(f, {0.0, 1.0}, 10).nice);
}

TEST_CASE("first-return invariants on the full logistic map") {
  const PiecewiseMap f = make_logistic(4.0);
  const Interval base{0.2, 0.4};
  ReturnMapOptions opt;
  opt.max_time = 8;
  const FirstReturnMap r = first_return_map(f, base, opt);
  REQUIRE_FALSE(r.branches.empty());
  check_branch_invariants(f, base, r.branches);
  for (const ReturnBranch& b : r.branches) {
    // endpoint re-evaluation: f^t at interior points near the ends approaches the image ends
    const double w = b.sub_hi - b.sub_lo;
    const double y0 = iterate(f, b.sub_lo + 1e-6 * w, b.return_time);
    const double y1 = iterate(f, b.sub_hi - 1e-6 * w, b.return_time);
    CHECK(std::min(y0, y1) >= b.image_lo - 1e-6);
    CHECK(std::max(y0, y1) <= b.image_hi + 1e-6);
    CHECK(b.onto == (std::abs(b.image_lo - base.lo) <= 1e-9 && std::abs(b.image_hi - base.hi) <= 1e-9));
  }
}

TEST_CASE("coverage is non-decreasing in max_time") {
  const PiecewiseMap f = make_logistic(3.9);
  double prev = 0.0;
  for (std::size_t t : {2, 4, 6, 8, 10}) {
    ReturnMapOptions opt;
    opt.max_time = t;
    const double m = first_return_map(f, {0.3, 0.45}, opt).coverage_measure;
    CHECK(m >= prev - 1e-15);
    prev = m;
  }
}

TEST_CASE("boundary piece around the critical point") {
  const PiecewiseMap f = make_logistic(4.0);
  const FirstReturnMap r = first_return_map(f, {0.4, 0.6});
  REQUIRE(r.boundary.size() == 2);
  for (const BoundaryPiece& b : r.boundary) {
    CHECK(b.c == 0.5);
    CHECK_FALSE(b.onto);
    const LateralState img = lateral_iterate(f, {0.5, b.side}, b.time);
    CHECK(b.critical_image == img.coord);
    CHECK((b.critical_image == b.image_lo || b.critical_image == b.image_hi));
  }
}

TEST_CASE("fixed-point branch for lambda 2.5") {
  const PiecewiseMap f = make_logistic(2.5);
  const FirstReturnMap r = first_return_map(f, {0.55, 0.65});
  bool found = false;
  for (const ReturnBranch& b : r.branches)
    if (b.return_time == 1 && b.sub_lo < 0.6 && 0.6 < b.sub_hi) found = true;
  CHECK(found);
}

TEST_CASE("branch cap raises SubdivisionOverflow") {
  ReturnMapOptions opt;
  opt.branch_cap = 10;
  try {
    first_return_map(make_logistic(4.0), {0.2, 0.4}, opt);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::subdivision_overflow);
  }
}

TEST_CASE("accelerated induced map on a three-branch map") {
  const PiecewiseMap f = three_branch();
  const Interval j{0.0, 0.6};
  InducedMapOptions opt;
  opt.depth_cap = 3;
  const InducedMap m = accelerated_induced_map(f, j, opt);
  CHECK(m.c == 0.3);
  CHECK(m.depth_built == 1);
  CHECK(m.exhausted);
  for (const ReturnBranch& b : m.branches) {
    CHECK(b.onto);
    // endpoint image oracle
    CHECK(std::abs(iterate(f, b.sub_lo + 1e-12, b.return_time) - j.lo) < 1e-9);
    CHECK(std::abs(iterate(f, b.sub_hi - 1e-12, b.return_time) - j.hi) < 1e-9);
  }
  // hand computation: G = f^4 on I_0 = (4/15, 0.3) is 6.75 x - 1.8; pulling back
  // the full branch (0, 0.2) gives (4/15, 8/27) with time 5
  bool pulled = false;
  for (const ReturnBranch& b : m.branches) {
    if (b.return_time == 5) {
      pulled = true;
      CHECK(b.sub_lo == doctest::Approx(4.0 / 15.0).epsilon(1e-10));
      CHECK(b.sub_hi == doctest::Approx(8.0 / 27.0).epsilon(1e-10));
    }
  }
  CHECK(pulled);
  REQUIRE(m.t.size() == 2);
  CHECK(m.t[0] < m.t[1]);
  CHECK(m.t[1] == doctest::Approx(8.0 / 27.0).epsilon(1e-10));
  CHECK(m.boundary.return_time == 7);
  CHECK(m.boundary.image_lo == doctest::Approx(0.023125).epsilon(1e-9));
  CHECK(m.boundary.image_hi == doctest::Approx(0.025).epsilon(1e-9));
}

TEST_CASE("induced map with depth 0 is the full part of the first return on (a,c)") {
  const PiecewiseMap f = three_branch();
  InducedMapOptions opt;
  opt.depth_cap = 0;
  const InducedMap m = accelerated_induced_map(f, {0.0, 0.6}, opt);
  ReturnMapOptions ro;
  ro.max_time = opt.max_time;
  const FirstReturnMap r = first_return_map(f, {0.0, 0.6}, ro);
  std::vector<ReturnBranch> want;
  for (const ReturnBranch& b : r.branches)
    if (b.sub_hi <= 0.3 && b.onto) want.push_back(b);
  REQUIRE(m.branches.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    CHECK(m.branches[k].sub_lo == want[k].sub_lo);
    CHECK(m.branches[k].sub_hi == want[k].sub_hi);
    CHECK(m.branches[k].return_time == want[k].return_time);
  }
}

TEST_CASE("induced map hypothesis gates") {
  const PiecewiseMap f = three_branch();
  // 0.05 is not periodic
  CHECK_THROWS_AS(accelerated_induced_map(f, {0.05, 0.6}), Error);
  // the logistic map reverses orientation at c
  CHECK_THROWS_AS(accelerated_induced_map(make_logistic(4.0), {0.0, 0.75}), Error);
}

TEST_CASE("dichotomy probe examples") {
  DichotomyOptions opt;
  opt.seed = 17;
  opt.threads = 1;
  CHECK(dichotomy_probe(make_logistic(4.0), {0.2, 0.4}, opt).verdict == DichotomyVerdict::all_cover);
  CHECK(dichotomy_probe(make_logistic(2.5), {0.1, 0.2}, opt).verdict == DichotomyVerdict::all_avoid);
  CHECK(dichotomy_probe(make_logistic(3.2), {0.45, 0.48}, opt).verdict == DichotomyVerdict::all_avoid);
}

TEST_CASE("dichotomy precondition: critical orbit entering I") {
  DichotomyOptions opt;
  opt.seed = 1;
  opt.samples = 10;
  const DichotomyResult r = dichotomy_probe(make_logistic(3.2), {0.79, 0.81}, opt);
  CHECK(r.verdict == DichotomyVerdict::precondition_failed);
  CHECK(r.precondition_violation);
}

TEST_CASE("seeded uniforms depend only on seed and index") {
  CHECK(seeded_uniform(5, 9, 0.0, 1.0) == seeded_uniform(5, 9, 0.0, 1.0));
  CHECK(seeded_uniform(5, 9, 0.0, 1.0) != seeded_uniform(5, 10, 0.0, 1.0));
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const double u = seeded_uniform(3, k, 0.2, 0.4);
    CHECK(u > 0.2);
    CHECK(u < 0.4);
  }
}
