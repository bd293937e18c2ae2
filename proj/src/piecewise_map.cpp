// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/piecewise_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ivmap {
namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::out_of_domain, std::string(what) + " = " + fmt_real(x));
}

constexpr std::size_t kMaxExamples = 10;

}  // namespace

PiecewiseMap::PiecewiseMap(std::string name, std::vector<Branch> branches, std::vector<double> exceptional_set,
                           nlohmann::json provenance)
    : name_(std::move(name)),
      branches_(std::move(branches)),
      exceptional_(std::move(exceptional_set)),
      provenance_(std::move(provenance)) {
  if (branches_.empty()) throw Error(ErrorKind::bad_param, "map needs at least one branch");
  for (const Branch& b : branches_) {
    if (!(b.lo >= 0.0 && b.hi <= 1.0 && b.lo < b.hi))
      throw Error(ErrorKind::bad_param, "branch domain (" + fmt_real(b.lo) + ", " + fmt_real(b.hi) + ") invalid");
  }
  for (std::size_t i = 0; i < exceptional_.size(); ++i) {
    const double c = exceptional_[i];
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::bad_param, "exceptional point outside (0,1): " + fmt_real(c));
    if (i > 0 && !(exceptional_[i - 1] < c)) throw Error(ErrorKind::bad_param, "exceptional set not strictly sorted");
  }
  std::stable_sort(branches_.begin(), branches_.end(), [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
  los_.reserve(branches_.size());
  for (const Branch& b : branches_) los_.push_back(b.lo);
}

bool PiecewiseMap::is_exceptional(double x) const noexcept {
  if (exceptional_.size() <= 2) {
    for (double c : exceptional_)
      if (c == x) return true;
    return false;
  }
  return std::binary_search(exceptional_.begin(), exceptional_.end(), x);
}

std::optional<std::size_t> PiecewiseMap::branch_index(double x) const noexcept {
  const auto ub = std::upper_bound(los_.begin(), los_.end(), x);
  if (ub != los_.begin()) {
    const auto i = static_cast<std::size_t>(ub - los_.begin()) - 1;
    if (x <= branches_[i].hi) return i;
  }
  for (std::size_t i = 0; i < branches_.size(); ++i)
    if (branches_[i].lo <= x && x <= branches_[i].hi) return i;
  return std::nullopt;
}

std::optional<std::size_t> PiecewiseMap::branch_index(double x, Side side) const noexcept {
  if (side == Side::minus) {
    const auto lb = std::lower_bound(los_.begin(), los_.end(), x);
    if (lb != los_.begin()) {
      const auto i = static_cast<std::size_t>(lb - los_.begin()) - 1;
      if (x <= branches_[i].hi) return i;
    }
    for (std::size_t i = 0; i < branches_.size(); ++i)
      if (branches_[i].lo < x && x <= branches_[i].hi) return i;
  } else {
    const auto ub = std::upper_bound(los_.begin(), los_.end(), x);
    if (ub != los_.begin()) {
      const auto i = static_cast<std::size_t>(ub - los_.begin()) - 1;
      if (x < branches_[i].hi) return i;
    }
    for (std::size_t i = 0; i < branches_.size(); ++i)
      if (branches_[i].lo <= x && x < branches_[i].hi) return i;
  }
  return std::nullopt;
}

double PiecewiseMap::eval(double x) const {
  require_unit(x, "x");
  if (is_exceptional(x)) throw Error(ErrorKind::exceptional_point, "f undefined at " + fmt_real(x));
  const auto b = branch_index(x);
  if (!b) throw Error(ErrorKind::out_of_domain, "no branch covers " + fmt_real(x));
  return clamp_range(branches_[*b].form.value(x));
}

double PiecewiseMap::derivative(double x, int order) const {
  if (order < 1 || order > 3) throw Error(ErrorKind::bad_param, "derivative order must be 1, 2 or 3");
  require_unit(x, "x");
  if (is_exceptional(x)) throw Error(ErrorKind::exceptional_point, "f undefined at " + fmt_real(x));
  const auto b = branch_index(x);
  if (!b) throw Error(ErrorKind::out_of_domain, "no branch covers " + fmt_real(x));
  return branches_[*b].form.derivative(x, order);
}

double PiecewiseMap::schwarzian(double x, double critical_threshold) const {
  require_unit(x, "x");
  if (is_exceptional(x)) throw Error(ErrorKind::exceptional_point, "f undefined at " + fmt_real(x));
  const auto b = branch_index(x);
  if (!b) throw Error(ErrorKind::out_of_domain, "no branch covers " + fmt_real(x));
  const Jet j = branches_[*b].form.jet(x);
  if (std::abs(j[1]) < critical_threshold)
    throw Error(ErrorKind::critical_point, "|f'| below threshold at " + fmt_real(x));
  const double r = j[2] / j[1];
  return j[3] / j[1] - 1.5 * r * r;
}

OneSided PiecewiseMap::one_sided(double x, Side side) const {
  require_unit(x, "x");
  if (side == Side::minus && x == 0.0) throw Error(ErrorKind::out_of_domain, "0- is not a lateral point");
  if (side == Side::plus && x == 1.0) throw Error(ErrorKind::out_of_domain, "1+ is not a lateral point");
  const auto b = branch_index(x, side);
  if (!b) throw Error(ErrorKind::out_of_domain, "no branch reaches " + fmt_real(x) + side_char(side));
  const Form& form = branches_[*b].form;
  const Jet j = form.jet(x);
  return OneSided{clamp_range(j[0]), j[1], form.direction_sign(x, side == Side::minus), *b};
}

ValidationReport validate(const PiecewiseMap& map, std::size_t grid_n) {
  ValidationReport rep;
  rep.grid_n = grid_n;
  const auto& br = map.branches();
  const auto& ex = map.exceptional_set();

  if (br.front().lo != 0.0) rep.tiling.push_back("first branch starts at " + fmt_real(br.front().lo) + ", not 0");
  if (br.back().hi != 1.0) rep.tiling.push_back("last branch ends at " + fmt_real(br.back().hi) + ", not 1");
  std::vector<double> joints;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double h = br[i].hi;
    const double l = br[i + 1].lo;
    if (h > l) {
      rep.tiling.push_back("branches " + std::to_string(i) + " and " + std::to_string(i + 1) + " overlap on (" +
                           fmt_real(l) + ", " + fmt_real(h) + ")");
    } else if (h < l) {
      rep.tiling.push_back("gap (" + fmt_real(h) + ", " + fmt_real(l) + ") between branches " + std::to_string(i) +
                           " and " + std::to_string(i + 1));
    } else {
      joints.push_back(h);
    }
  }
  for (double j : joints)
    if (!std::binary_search(ex.begin(), ex.end(), j))
      rep.tiling.push_back("branch boundary " + fmt_real(j) + " is not in the exceptional set");
  for (double c : ex)
    if (!std::binary_search(joints.begin(), joints.end(), c))
      rep.tiling.push_back("exceptional point " + fmt_real(c) + " is not a branch boundary");

  for (std::size_t bi = 0; bi < br.size(); ++bi) {
    const Branch& b = br[bi];
    const int declared = b.orientation == Orientation::increasing ? 1 : -1;
    std::size_t mismatches = 0;
    for (std::size_t j = 1; j <= grid_n; ++j) {
      const double x = b.lo + (b.hi - b.lo) * static_cast<double>(j) / static_cast<double>(grid_n + 1);
      const Jet jet = b.form.jet(x);
      if (jet[0] < -kRangeSlack || jet[0] > 1.0 + kRangeSlack || !std::isfinite(jet[0])) {
        if (rep.range_examples.size() < kMaxExamples) rep.range_examples.push_back({x, jet[0]});
        ++rep.range_violations;
      }
      if ((jet[1] > 0.0 ? 1 : (jet[1] < 0.0 ? -1 : 0)) == -declared) ++mismatches;
      if (std::abs(jet[1]) < kCriticalThreshold) {
        ++rep.schwarzian_skipped;
        continue;
      }
      const double r = jet[2] / jet[1];
      const double s = jet[3] / jet[1] - 1.5 * r * r;
      if (!(s < 0.0)) {
        if (rep.schwarzian_examples.size() < kMaxExamples) rep.schwarzian_examples.push_back({x, s});
        ++rep.schwarzian_nonnegative;
      }
    }
    if (mismatches > 0)
      rep.orientation.push_back("branch " + std::to_string(bi) + " declared " +
                                (declared > 0 ? "increasing" : "decreasing") + " but f' has the opposite sign at " +
                                std::to_string(mismatches) + " grid points");
  }

  for (const FixedPoint& fp : interior_fixed_points(map))
    if (fp.multiplier > 1.0) rep.repelling_fixed_points.push_back(fp);
  return rep;
}

std::vector<FixedPoint> interior_fixed_points(const PiecewiseMap& map, std::size_t grid_n) {
  std::vector<FixedPoint> out;
  for (const Branch& b : map.branches()) {
    auto g = [&](double x) { return b.form.value(x) - x; };
    double xp = b.lo + (b.hi - b.lo) / static_cast<double>(grid_n + 1);
    double gp = g(xp);
    for (std::size_t j = 2; j <= grid_n + 1; ++j) {
      const double x = j == grid_n + 1 ? b.hi : b.lo + (b.hi - b.lo) * static_cast<double>(j) / static_cast<double>(grid_n + 1);
      const double gx = g(x);
      double root = -1.0;
      if (gp == 0.0) {
        root = xp;
      } else if (gp * gx < 0.0) {
        double lo = xp, hi = x, glo = gp;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double gm = g(mid);
          if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        root = 0.5 * (lo + hi);
      }
      if (root > 0.0 && root < 1.0 && root > b.lo && root < b.hi)
        out.push_back({root, std::abs(b.form.derivative(root, 1))});
      xp = x;
      gp = gx;
    }
  }
  return out;
}

SupDerivative sup_abs_derivative(const PiecewiseMap& map) {
  SupDerivative out;
  for (const Branch& b : map.branches()) {
    const auto s = b.form.sup_abs_derivative(b.lo, b.hi, out.analytic);
    if (!s) throw Error(ErrorKind::unbounded_derivative, "branch on (" + fmt_real(b.lo) + ", " + fmt_real(b.hi) + ")");
    out.value = std::max(out.value, *s);
  }
  return out;
}

}  // namespace ivmap
