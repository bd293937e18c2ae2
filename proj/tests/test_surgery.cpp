// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "ivmap/errors.hpp"
#include "ivmap/map_io.hpp"
#include "ivmap/surgery.hpp"
#include "ivmap/zoo.hpp"

using namespace ivmap;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::io;
}

// g == f bit for bit on a grid outside [lo, hi]
void check_local(const PiecewiseMap& f, const PiecewiseMap& g, double lo, double hi) {
  for (int k = 1; k < 2000; ++k) {
    const double x = k / 2000.0;
    if (x >= lo && x <= hi) continue;
    const auto a = f.try_eval(x), b = g.try_eval(x);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == *b);
  }
}

}  // namespace

TEST_CASE("pit surgery on the full logistic map") {
  const PiecewiseMap f = make_logistic(4.0);
  const SurgeryRecord r = pit_surgery(f, {0.3, 0.5}, 0.4);
  REQUIRE(r.scale_factors.size() == 1);
  CHECK(r.scale_factors[0] == 0.125);
  CHECK(r.sup_method == "analytic");
  CHECK(r.result.eval(0.35) == doctest::Approx(0.4 + 0.125 * (f.eval(0.35) - 0.4)).epsilon(1e-15));
  CHECK(r.result.eval(0.35) == doctest::Approx(0.46375).epsilon(1e-12));
  REQUIRE(r.maps_into_interval);
  CHECK(*r.maps_into_interval);
  check_local(f, r.result, 0.3, 0.5);
}

TEST_CASE("pit surgery error gates") {
  const PiecewiseMap f = make_logistic(4.0);
  CHECK(kind_of([&] { pit_surgery(f, {0.3, 0.5}, 0.6); }) == ErrorKind::bad_param);
  CHECK(kind_of([&] { pit_surgery(f, {0.0, 0.5}, 0.2); }) == ErrorKind::bad_param);
}

TEST_CASE("flatten a period-2 logistic map") {
  const PiecewiseMap f = make_logistic(3.2);
  const SurgeryRecord r = flatten_unimodal(f, 0.79946);
  REQUIRE(r.scale_factors.size() == 1);
  const double lam = r.scale_factors[0];
  const double fc = 0.8;
  CHECK(lam > 1.0);
  CHECK(r.modified.lo < 0.5);
  CHECK(r.modified.hi > 0.5);
  CHECK(r.modified.lo + r.modified.hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.result.one_sided(0.5, Side::minus).value == doctest::Approx(1.0).epsilon(1e-12));
  // J is bounded by the preimages of p_hat, the larger point of the 2-cycle
  const double r2 = std::sqrt(4.2 * 0.2);
  const double p_hat = (4.2 + r2) / 6.4;
  CHECK(f.eval(r.modified.lo) == doctest::Approx(p_hat).epsilon(1e-9));
  CHECK(f.eval(r.modified.hi) == doctest::Approx(p_hat).epsilon(1e-9));
  const double fp = f.eval(p_hat);
  CHECK(lam == doctest::Approx((1 - fp) / (fc - fp)).epsilon(1e-9));
  check_local(f, r.result, r.modified.lo, r.modified.hi);
}

TEST_CASE("flatten gates") {
  CHECK(kind_of([] { flatten_unimodal(make_logistic(4.0), 0.3); }) == ErrorKind::hypothesis_failed);
  CHECK(kind_of([] { flatten_unimodal(make_lorenz({}), 0.3); }) == ErrorKind::hypothesis_failed);
}

TEST_CASE("Lorenz rescale sends the lateral critical values to the ends") {
  const PiecewiseMap f = make_lorenz({0.5, 2.0, 2.0, 0.9, 0.1});
  const SurgeryRecord r = lorenz_rescale(f, 0.2, 0.8, 0.5);
  REQUIRE(r.scale_factors.size() == 2);
  const double fa = f.eval(0.2), fb = f.eval(0.8);
  CHECK(r.scale_factors[0] == doctest::Approx((1 - fa) / (0.9 - fa)).epsilon(1e-12));
  CHECK(r.scale_factors[1] == doctest::Approx(fb / (fb - 0.1)).epsilon(1e-12));
  CHECK(r.result.one_sided(0.5, Side::minus).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.result.one_sided(0.5, Side::plus).value == doctest::Approx(0.0).epsilon(1e-12));
  check_local(f, r.result, 0.2, 0.8);
  const nlohmann::json j = record_to_json(r);
  CHECK(j.dump().find("lorenz_rescale") != std::string::npos);
  CHECK(r.result.exceptional_set() == std::vector<double>{0.2, 0.5, 0.8});
}

TEST_CASE("Lorenz rescale gates") {
  const PiecewiseMap f = make_lorenz({});
  CHECK(kind_of([&] { lorenz_rescale(f, 0.2, 0.8, 0.4); }) == ErrorKind::bad_param);
  CHECK(kind_of([&] { lorenz_rescale(f, 0.6, 0.8, 0.5); }) == ErrorKind::bad_param);
  CHECK(kind_of([&] { lorenz_rescale(make_logistic(4.0), 0.2, 0.8, 0.5); }) == ErrorKind::hypothesis_failed);
}
