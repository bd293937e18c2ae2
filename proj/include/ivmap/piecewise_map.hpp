// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_PIECEWISE_MAP_HPP
#define IVMAP_PIECEWISE_MAP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivmap/branch.hpp"
#include "ivmap/errors.hpp"

namespace ivmap {

enum class Side : int { minus = -1, plus = 1 };

inline Side flip(Side s) noexcept { return s == Side::minus ? Side::plus : Side::minus; }
inline char side_char(Side s) noexcept { return s == Side::minus ? '-' : '+'; }

/// A one-sided point p-i / p+i: the coordinate plus the side it is approached from.
struct LateralState {
  double coord = 0.0;
  Side side = Side::plus;

  friend bool operator==(const LateralState&, const LateralState&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains_open(double x) const noexcept { return lo < x && x < hi; }
};

/// One-sided limits of value and derivatives at a point, taken from a branch closure.
struct OneSided {
  double value = 0.0;
  double derivative = 0.0;
  int direction = 0;
  std::size_t branch = 0;
};

inline constexpr double kRangeSlack = 1e-12;
inline constexpr double kCriticalThreshold = 1e-12;

/// A map of [0,1] minus a finite exceptional set, given by monotone branches.
/// Immutable after construction.
class PiecewiseMap {
 public:
  PiecewiseMap(std::string name, std::vector<Branch> branches, std::vector<double> exceptional_set,
               nlohmann::json provenance = nlohmann::json::object());

  const std::string& name() const noexcept { return name_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const std::vector<double>& exceptional_set() const noexcept { return exceptional_; }
  const nlohmann::json& provenance() const noexcept { return provenance_; }

  bool is_exceptional(double x) const noexcept;

  /// Branch whose closure holds x (first in order), if any.
  std::optional<std::size_t> branch_index(double x) const noexcept;
  /// Branch reached when approaching x from `side`.
  std::optional<std::size_t> branch_index(double x, Side side) const noexcept;

  double eval(double x) const;
  double derivative(double x, int order) const;
  double schwarzian(double x, double critical_threshold = kCriticalThreshold) const;

  /// f(x), or nullopt at exceptional points and outside [0,1]. Hot-loop entry.
  std::optional<double> try_eval(double x) const noexcept {
    if (!(x >= 0.0 && x <= 1.0) || is_exceptional(x)) return std::nullopt;
    const auto b = branch_index(x);
    if (!b) return std::nullopt;
    return clamp_range(branches_[*b].form.value(x));
  }

  /// Limits at x approached from `side`, computed on the branch closure.
  OneSided one_sided(double x, Side side) const;

  static double clamp_range(double y) noexcept {
    if (y < 0.0 && y >= -kRangeSlack) return 0.0;
    if (y > 1.0 && y <= 1.0 + kRangeSlack) return 1.0;
    return y;
  }

 private:
  std::string name_;
  std::vector<Branch> branches_;
  std::vector<double> los_;
  std::vector<double> exceptional_;
  nlohmann::json provenance_;
};

struct PointFlag {
  double x = 0.0;
  double value = 0.0;
};

struct FixedPoint {
  double x = 0.0;
  double multiplier = 0.0;
};

struct ValidationReport {
  std::size_t grid_n = 0;
  std::vector<std::string> tiling;
  std::size_t range_violations = 0;
  std::vector<PointFlag> range_examples;
  std::size_t schwarzian_nonnegative = 0;
  std::vector<PointFlag> schwarzian_examples;
  std::size_t schwarzian_skipped = 0;
  std::vector<std::string> orientation;
  std::vector<FixedPoint> repelling_fixed_points;

  bool tiling_ok() const noexcept { return tiling.empty(); }
  bool range_ok() const noexcept { return range_violations == 0; }
  bool schwarzian_ok() const noexcept { return schwarzian_nonnegative == 0; }
  bool orientation_ok() const noexcept { return orientation.empty(); }
  bool clean() const noexcept { return tiling_ok() && range_ok() && schwarzian_ok() && orientation_ok(); }
};

inline constexpr std::size_t kDefaultValidationGrid = 10000;

/// Grid-based (non-rigorous) check of tiling, range, Schwarzian sign and
/// declared orientation. `grid_n` points per branch, strictly interior.
ValidationReport validate(const PiecewiseMap& map, std::size_t grid_n = kDefaultValidationGrid);

/// Interior fixed points located by sign changes of f(x)-x on a grid and bisection.
std::vector<FixedPoint> interior_fixed_points(const PiecewiseMap& map, std::size_t grid_n = 2000);

struct SupDerivative {
  double value = 0.0;
  bool analytic = true;
};

/// sup |f'| over [0,1] minus the exceptional set.
SupDerivative sup_abs_derivative(const PiecewiseMap& map);

}  // namespace ivmap

#endif  // IVMAP_PIECEWISE_MAP_HPP
