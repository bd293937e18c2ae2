// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_SURGERY_HPP
#define IVMAP_SURGERY_HPP

#include <optional>
#include <string>
#include <vector>

#include "ivmap/piecewise_map.hpp"

namespace ivmap {

enum class SurgeryKind { pit, flatten_unimodal, lorenz_rescale };

const char* to_string(SurgeryKind k) noexcept;

struct SurgeryRecord {
  SurgeryKind kind = SurgeryKind::pit;
  std::string source;  // source map name
  nlohmann::json source_provenance;
  Interval modified;
  std::vector<double> scale_factors;  // sigma | lambda | lambda_a, lambda_b
  std::string sup_method;             // pit only: "analytic" or "grid"
  std::optional<bool> maps_into_interval;  // pit only: g(I) inside I on the grid
  PiecewiseMap result;
};

/// g = q + sigma (f - q) on I, f elsewhere, sigma = 1 / (2 sup|f'|).
SurgeryRecord pit_surgery(const PiecewiseMap& map, Interval i, double q);

/// On J = f^-1((p_hat, 1]) around the critical point, g = lambda (f - f(p)) + f(p)
/// with lambda = (1 - f(p)) / (f(c) - f(p)); p_hat is the largest point of the cycle of p.
SurgeryRecord flatten_unimodal(const PiecewiseMap& map, double p);

/// g = lambda_a (f - f(a)) + f(a) on (a,c), g = lambda_b (f - f(b)) + f(b) on (c,b).
SurgeryRecord lorenz_rescale(const PiecewiseMap& map, double a, double b, double c);

nlohmann::json record_to_json(const SurgeryRecord& r);

}  // namespace ivmap

#endif  // IVMAP_SURGERY_HPP
