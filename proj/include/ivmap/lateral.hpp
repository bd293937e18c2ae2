// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_LATERAL_HPP
#define IVMAP_LATERAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivmap/piecewise_map.hpp"

namespace ivmap {

/// One step of the lateral dynamics: the coordinate becomes the one-sided
/// limit of f and the side flips when f is decreasing on that side.
/// Throws DegenerateSide when f is constant on the approached side.
LateralState lateral_step(const PiecewiseMap& map, LateralState s);

struct LateralOrbit {
  std::vector<LateralState> states;
  // Branch used to leave each state; npos for the final state if it has none.
  std::vector<std::size_t> branches;
  bool truncated = false;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

LateralOrbit lateral_orbit(const PiecewiseMap& map, LateralState start, std::size_t n);

/// Real coordinate of f^n(s); cheaper than building the orbit.
LateralState lateral_iterate(const PiecewiseMap& map, LateralState s, std::size_t n);

enum class Stability { attracting, indifferent, repelling };

inline constexpr double kIndifferenceBand = 1e-9;
inline constexpr double kDefaultPeriodTolerance = 1e-9;

Stability classify_multiplier(double multiplier) noexcept;

struct PeriodicLikeRecord {
  LateralState point;
  std::size_t period = 0;
  double multiplier = 0.0;
  Stability stability = Stability::repelling;
  std::vector<LateralState> cycle;

  bool attracting() const noexcept { return stability == Stability::attracting; }
};

struct PeriodicSearch {
  std::optional<PeriodicLikeRecord> record;
  bool degenerate = false;  // a DegenerateSide interrupted the search
};

/// Smallest period l <= max_period with f^l(s) back at s (coordinate within
/// tol_p, same side). A near miss inside a small capture window is refined by
/// bisection on f^l(x)-x when the branch itinerary is locally constant.
PeriodicSearch detect_periodic_like(const PiecewiseMap& map, LateralState s, std::size_t max_period,
                                    double tol_p = kDefaultPeriodTolerance);

/// Product of one-sided |f'| along the lateral orbit of s over `period` steps.
double cycle_multiplier(const PiecewiseMap& map, LateralState s, std::size_t period);

struct OmegaCover {
  double x0 = 0.0;
  double resolution = 0.0;
  std::uint32_t cell_count = 0;
  std::vector<std::uint32_t> cells;  // sorted, unique
  bool partial = false;
  std::size_t steps = 0;
  std::optional<std::size_t> period;  // tail converged to a cycle of this period
  std::vector<double> cycle;          // last `period` iterates, in orbit order
  double min_exceptional_distance = 1.0;

  double cell_center(std::uint32_t c) const noexcept { return (static_cast<double>(c) + 0.5) * resolution; }
};

inline constexpr std::size_t kMaxConvergencePeriod = 64;
inline constexpr double kConvergenceTolerance = 1e-9;

std::uint32_t cell_count_for(double resolution);
std::uint32_t cell_of(double x, double resolution, std::uint32_t count) noexcept;

/// Grid cells visited by iterates burn_in .. burn_in+tail-1 of x0.
OmegaCover omega_estimate(const PiecewiseMap& map, double x0, std::size_t burn_in, std::size_t tail,
                          double resolution);

/// Cells visited by the lateral orbit of s (n+1 states), for several resolutions at once.
std::vector<std::vector<std::uint32_t>> lateral_closure_cells(const PiecewiseMap& map, LateralState s,
                                                              std::size_t n, std::size_t skip,
                                                              const std::vector<double>& resolutions);

struct GapMapInfo {
  double c = 0.0;
  double v0 = 0.0;  // Re f(c+i)
  double v1 = 0.0;  // Re f(c-i)
  double image_measure = 0.0;  // Leb f([v0,v1] minus c)
  bool injective = false;
  bool is_gap_map = false;
  std::string reason;
};

/// Gap-map checks around the exceptional point c (no throw).
GapMapInfo gap_map_info(const PiecewiseMap& map, double c);

/// Frequency of right-branch visits over n steps of the lateral orbit started
/// at f(c+i). Throws NotAGapMap when the spot checks fail.
double rotation_number(const PiecewiseMap& map, double c, std::size_t n);

}  // namespace ivmap

#endif  // IVMAP_LATERAL_HPP
