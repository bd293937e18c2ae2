// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ivmap/classifier.hpp"
#include "ivmap/errors.hpp"
#include "ivmap/map_io.hpp"
#include "ivmap/zoo.hpp"

using namespace ivmap;

namespace {

double brute_hausdorff(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, double res) {
  const auto directed = [&](const auto& x, const auto& y) {
    double worst = 0.0;
    for (std::uint32_t i : x) {
      double best = 1e300;
      for (std::uint32_t j : y) best = std::min(best, std::abs(double(i) - double(j)) * res);
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

OmegaCover synthetic(std::vector<std::uint32_t> cells) {
  OmegaCover c;
  c.resolution = 1e-3;
  c.cell_count = 1000;
  c.cells = std::move(cells);
  return c;
}

SamplingParams quick(std::uint64_t seed) {
  SamplingParams p;
  p.samples = 60;
  p.burn_in = 2000;
  p.tail = 20000;
  p.seed = seed;
  p.threads = 1;
  p.closure_steps = 20000;
  return p;
}

}  // namespace

TEST_CASE("cell Hausdorff matches brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint32_t> a, b;
    const int na = 1 + int(rng() % 30), nb = 1 + int(rng() % 30);
    for (int k = 0; k < na; ++k) a.push_back(std::uint32_t(rng() % 1000));
    for (int k = 0; k < nb; ++k) b.push_back(std::uint32_t(rng() % 1000));
    for (auto* v : {&a, &b}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    CHECK(hausdorff_cells(a, b, 1e-3) == doctest::Approx(brute_hausdorff(a, b, 1e-3)).epsilon(1e-12));
  }
}

TEST_CASE("synthetic clusters and basin estimates") {
  std::vector<OmegaCover> covers;
  for (int k = 0; k < 60; ++k) covers.push_back(synthetic({100, 101, std::uint32_t(102 + k % 2)}));
  for (int k = 0; k < 40; ++k) covers.push_back(synthetic({800}));
  const auto cl = cluster_attractors(covers, 5e-3);
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].basin == doctest::Approx(0.6));
  CHECK(cl[1].basin == doctest::Approx(0.4));
  CHECK(cl[0].cells == std::vector<std::uint32_t>{100, 101, 102, 103});
  CHECK(cl[0].confidence == doctest::Approx(1.96 * std::sqrt(0.24 / 100)));

  std::vector<OmegaCover> same(100, synthetic({5, 6, 7}));
  const auto one = cluster_attractors(same, 5e-3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].members.size() == 100);
}

TEST_CASE("single linkage chains through intermediate covers") {
  std::vector<OmegaCover> covers{synthetic({100}), synthetic({104}), synthetic({108}), synthetic({300})};
  const auto cl = cluster_attractors(covers, 5e-3);
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].members == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("partial covers are left unassigned") {
  std::vector<OmegaCover> covers{synthetic({1}), synthetic({1})};
  covers[1].partial = true;
  const auto cl = cluster_attractors(covers, 5e-3);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].basin == 0.5);
}

TEST_CASE("basin conservation and the count bound") {
  for (double lam : {2.8, 3.5, 3.83, 3.9}) {
    const ClassificationReport r = classification_report(make_logistic(lam), quick(5));
    double total = r.unassigned;
    for (const auto& a : r.attractors) total += a.basin;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.bound_respected);
    CHECK(r.count_bound == 8);
  }
}

TEST_CASE("classification of simple logistic regimes") {
  const ClassificationReport two = classification_report(make_logistic(3.2), quick(1));
  REQUIRE(two.attractors.size() == 1);
  CHECK(two.attractors[0].kind == AttractorKind::periodic_like);
  CHECK(*two.attractors[0].period == 2);
  CHECK(*two.attractors[0].multiplier == doctest::Approx(0.16).epsilon(1e-6));

  const ClassificationReport chaos = classification_report(make_logistic(3.9), quick(1));
  REQUIRE(chaos.attractors.size() == 1);
  CHECK(chaos.attractors[0].kind == AttractorKind::cycle_of_intervals);
}

TEST_CASE("report is independent of the thread count") {
  SamplingParams p = quick(9);
  const std::string one = dump_canonical(report_to_json(classification_report(make_logistic(3.7), p)));
  p.threads = 4;
  const std::string four = dump_canonical(report_to_json(classification_report(make_logistic(3.7), p)));
  CHECK(one == four);
}

TEST_CASE("full logistic covers fill the grid") {
  SamplingParams p = quick(2);
  p.samples = 50;
  p.resolution = 1e-2;
  p.tail = 100000;
  const std::vector<OmegaCover> covers = sample_omega(make_logistic(4.0), p);
  const auto full = std::count_if(covers.begin(), covers.end(),
                                  [](const OmegaCover& c) { return !c.partial && c.cells.size() == 100; });
  CHECK(full >= 48);
}

TEST_CASE("accumulation on the exceptional set") {
  SamplingParams p = quick(4);
  p.samples = 100;
  p.tail = 100000;
  CHECK(mane_probe(make_logistic(4.0), 1e-3, p) >= 0.95);
  CHECK(mane_probe(make_lorenz({0.5, 2.0, 2.0, 0.95, 0.05}), 1e-3, p) >= 0.95);
  try {
    mane_probe(make_logistic(2.5), 1e-3, p);
    FAIL("expected a precondition failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition_failed);
  }
}
