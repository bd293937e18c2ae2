// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_ZOO_HPP
#define IVMAP_ZOO_HPP

#include <cstddef>
#include <string>

#include "ivmap/lateral.hpp"
#include "ivmap/piecewise_map.hpp"

namespace ivmap {

/// x -> lambda x (1 - x), split at 1/2.
PiecewiseMap make_logistic(double lambda);

struct LorenzParams {
  double c = 0.5;
  double rho_l = 2.0;
  double rho_r = 2.0;
  double u = 0.9;
  double v = 0.1;
};

/// Left branch u - (u/c^rho_l)(c-x)^rho_l, right branch v + ((1-v)/(1-c)^rho_r)(x-c)^rho_r.
PiecewiseMap make_lorenz(const LorenzParams& p);

struct LorenzCheck {
  bool ok = false;
  double c = 0.0;
  std::string reason;
};

/// One exceptional point, two increasing branches, 0 and 1 fixed, Sf < 0 on the grid.
LorenzCheck check_contracting_lorenz(const PiecewiseMap& map, std::size_t grid_n = 2000);

struct GapMap {
  PiecewiseMap map;  // branches restricted to [v0, c) and (c, v1]
  GapMapInfo info;
};

GapMap extract_gap_map(const PiecewiseMap& lorenz);

struct EwiOptions {
  double rotation_target = 0.3819660112501051;  // (3 - sqrt 5) / 2
  double target_tolerance = 0.01;
  std::size_t search_budget = 60;
  double v_lo = 0.1;  // v searched in [v_lo, v_hi], other parameters fixed
  double v_hi = 0.45;
  std::size_t rotation_steps = 100000;
  double rational_gap = 1e-3;
  std::size_t max_denominator = 20;
};

struct EwiResult {
  PiecewiseMap map;
  LorenzParams params;
  double a = 0.0;
  double rotation = 0.0;
  std::size_t candidates_tried = 0;
};

/// Distance from x to the nearest p/q with q <= max_q.
double distance_to_rationals(double x, std::size_t max_q);

/// F = f on (a,1] minus {c} and f/f(a) on (0,a), where f(a) = f(v1). v is
/// bisected toward the target rotation number; the first gap map whose
/// estimate is near the target and away from low-denominator rationals wins.
EwiResult construct_ewi(const LorenzParams& base, const EwiOptions& opt);

}  // namespace ivmap

#endif  // IVMAP_ZOO_HPP
