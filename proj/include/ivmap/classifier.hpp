// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_CLASSIFIER_HPP
#define IVMAP_CLASSIFIER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivmap/lateral.hpp"
#include "ivmap/piecewise_map.hpp"

namespace ivmap {

struct SamplingParams {
  std::size_t samples = 500;
  std::size_t burn_in = 10000;
  std::size_t tail = 100000;
  double resolution = 1e-3;
  double hausdorff_tol = 5e-3;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: IVMAP_THREADS or hardware concurrency
  std::size_t closure_steps = 100000;
  std::vector<double> trend_resolutions{1e-2, 5e-3, 2.5e-3};
};

/// One cover per seeded uniform sample of (0,1); sample k depends only on (seed, k).
std::vector<OmegaCover> sample_omega(const PiecewiseMap& map, const SamplingParams& p);

/// Hausdorff distance between two cell sets on the same grid (cell centres).
double hausdorff_cells(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, double resolution);

/// Largest distance from a point of `a` to the set `b`.
double directed_hausdorff_cells(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                double resolution);

enum class AttractorKind { periodic_like, cycle_of_intervals, cantor_like, undetermined };

const char* to_string(AttractorKind k) noexcept;

struct AttractorEstimate {
  std::size_t id = 0;
  AttractorKind kind = AttractorKind::undetermined;
  double resolution = 0.0;
  std::vector<std::uint32_t> cells;  // union of member covers
  std::vector<std::size_t> members;  // sample indices, ascending
  double basin = 0.0;
  double confidence = 0.0;  // 95% halfwidth
  std::optional<std::size_t> period;
  std::optional<double> multiplier;
  std::vector<LateralState> points;  // periodic_like support
  std::vector<Interval> intervals;   // cell cover merged into intervals
  std::vector<double> density;       // cell_count * resolution per trend resolution
  std::vector<LateralState> traced_by;
  bool spurious = false;  // converged onto a cycle that is not attracting
};

/// Single-linkage clusters of the non-partial covers, ordered by support infimum.
std::vector<AttractorEstimate> cluster_attractors(const std::vector<OmegaCover>& covers, double hausdorff_tol);

void classify_attractor(const PiecewiseMap& map, AttractorEstimate& est, const std::vector<OmegaCover>& covers,
                        const SamplingParams& p);

struct ClassificationReport {
  std::string map_name;
  std::vector<AttractorEstimate> attractors;
  double unassigned = 0.0;
  std::size_t partial = 0;
  std::size_t spurious = 0;
  std::uint64_t count_bound = 0;
  bool bound_respected = true;
  SamplingParams params;
};

/// 2^(1 + 2 #C_f), saturating.
std::uint64_t attractor_count_bound(std::size_t exceptional_points) noexcept;

ClassificationReport classification_report(const PiecewiseMap& map, const SamplingParams& p);

nlohmann::json report_to_json(const ClassificationReport& r);

/// Fraction of samples whose tail comes within tol_dist of the exceptional set.
/// Throws PreconditionFailed when an attracting or indifferent cycle is detected.
double mane_probe(const PiecewiseMap& map, double tol_dist, const SamplingParams& p);

}  // namespace ivmap

#endif  // IVMAP_CLASSIFIER_HPP
