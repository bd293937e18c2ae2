// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_RETURN_MAP_HPP
#define IVMAP_RETURN_MAP_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivmap/lateral.hpp"
#include "ivmap/piecewise_map.hpp"

namespace ivmap {

struct NiceViolation {
  double endpoint = 0.0;
  std::size_t step = 0;
  double coord = 0.0;
};

struct NiceReport {
  Interval interval;
  std::size_t horizon = 0;
  bool nice = false;
  bool truncated = false;  // an endpoint orbit stopped on a flat side
  std::optional<NiceViolation> violation;
};

/// Forward orbits of a and b (lateral, facing away from J) never land in (a,b)
/// within `horizon` steps.
NiceReport check_nice(const PiecewiseMap& map, Interval j, std::size_t horizon);

struct ReturnBranch {
  double sub_lo = 0.0;
  double sub_hi = 0.0;
  std::size_t return_time = 0;
  double image_lo = 0.0;
  double image_hi = 0.0;
  bool onto = false;
  bool increasing = true;
};

/// The piece of (a,b) whose closure holds an exceptional point c inside (a,b),
/// followed from the c side until it returns or time runs out.
struct BoundaryPiece {
  double c = 0.0;
  Side side = Side::minus;  // minus: piece lies left of c
  bool returned = false;
  std::size_t time = 0;  // return time, or the last time reached
  double sub_lo = 0.0;
  double sub_hi = 0.0;
  double image_lo = 0.0;
  double image_hi = 0.0;
  bool onto = false;
  double critical_image = 0.0;  // Re f^time(c -/+ i)
};

struct FirstReturnMap {
  Interval base;
  std::vector<ReturnBranch> branches;  // sorted by sub_lo
  std::size_t max_time = 0;
  double coverage_measure = 0.0;
  std::vector<BoundaryPiece> boundary;
  std::size_t pieces_examined = 0;
};

struct ReturnMapOptions {
  std::size_t max_time = 15;
  double tol_onto = 1e-9;
  std::size_t branch_cap = 1000000;
  double min_width = 1e-12;
};

/// Branches of f^t returning to (a,b) for the first time at t <= max_time,
/// found by forward subdivision at preimages of the exceptional set and of a, b.
FirstReturnMap first_return_map(const PiecewiseMap& map, Interval base, const ReturnMapOptions& opt = {});

struct InducedMap {
  Interval base;
  double c = 0.0;
  std::vector<ReturnBranch> branches;  // full branches only, sorted by sub_lo
  std::vector<double> t;               // t_0 < t_1 < ... (left ends of the c-adjacent pieces)
  std::size_t depth_built = 0;
  std::size_t dropped_non_full = 0;
  bool exhausted = false;
  std::string stop_reason;
  ReturnBranch boundary;  // I_n at the last depth built, image (a, Re f^R(c-i))
};

struct InducedMapOptions {
  std::size_t depth_cap = 3;
  std::size_t max_time = 40;
  std::size_t horizon = 1000;
  std::size_t max_period = 64;
  double tol_onto = 1e-9;
};

/// Induced map on (a,c) built by repeatedly composing the c-adjacent branch
/// with passes through the a-adjacent branch. Throws HypothesisFailed when a is
/// not detected periodic, the orbit of a enters (a,b), or the orbit of c-i
/// enters (c,b).
InducedMap accelerated_induced_map(const PiecewiseMap& map, Interval j, const InducedMapOptions& opt = {});

enum class DichotomyVerdict { all_avoid, all_cover, mixed, precondition_failed };

const char* to_string(DichotomyVerdict v) noexcept;

struct DichotomyOptions {
  std::size_t samples = 200;
  std::size_t burn_in = 10000;
  std::size_t tail = 100000;
  double resolution = 1e-3;
  std::uint64_t seed = 0;
  std::size_t precondition_horizon = 1000;
  double threshold = 0.95;
  unsigned threads = 0;
};

struct DichotomyResult {
  DichotomyVerdict verdict = DichotomyVerdict::mixed;
  std::optional<NiceViolation> precondition_violation;  // endpoint holds the critical value
  double avoid_fraction = 0.0;
  double cover_fraction = 0.0;
  std::size_t partial = 0;
  std::size_t samples = 0;
};

/// Lateral images of the exceptional set are followed for the precondition
/// horizon; if none enters I the seeded samples are classified.
DichotomyResult dichotomy_probe(const PiecewiseMap& map, Interval i, const DichotomyOptions& opt);

/// Uniform sample k of the stream for `seed`, independent of thread layout.
double seeded_uniform(std::uint64_t seed, std::uint64_t index, double lo, double hi);

}  // namespace ivmap

#endif  // IVMAP_RETURN_MAP_HPP
