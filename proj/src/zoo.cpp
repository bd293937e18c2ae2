// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/zoo.hpp"

#include <cmath>
#include <sstream>

namespace ivmap {
namespace {

using nlohmann::json;

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json lorenz_json(const LorenzParams& p) {
  return json{{"c", p.c}, {"rho_l", p.rho_l}, {"rho_r", p.rho_r}, {"u", p.u}, {"v", p.v}};
}

}  // namespace

PiecewiseMap make_logistic(double lambda) {
  if (!(lambda > 0.0 && lambda <= 4.0)) throw Error(ErrorKind::bad_param, "logistic needs 0 < lambda <= 4, got " + fmt_real(lambda));
  const Polynomial q{{0.0, lambda, -lambda}};
  std::vector<Branch> br{{0.0, 0.5, Form(q), Orientation::increasing}, {0.5, 1.0, Form(q), Orientation::decreasing}};
  return PiecewiseMap("logistic", std::move(br), {0.5}, json{{"family", "logistic"}, {"lambda", lambda}});
}

PiecewiseMap make_lorenz(const LorenzParams& p) {
  if (!(p.c > 0.0 && p.c < 1.0)) throw Error(ErrorKind::bad_param, "lorenz needs 0 < c < 1");
  if (!(p.rho_l > 1.0 && p.rho_r > 1.0)) throw Error(ErrorKind::bad_param, "lorenz needs rho_l, rho_r > 1");
  if (!(p.v > 0.0 && p.v < p.c && p.c < p.u && p.u < 1.0)) throw Error(ErrorKind::bad_param, "lorenz needs 0 < v < c < u < 1");
  const PowerLaw left{p.u, -p.u / std::pow(p.c, p.rho_l), p.rho_l, p.c, PivotSide::left};
  const PowerLaw right{p.v, (1.0 - p.v) / std::pow(1.0 - p.c, p.rho_r), p.rho_r, p.c, PivotSide::right};
  std::vector<Branch> br{{0.0, p.c, Form(left), Orientation::increasing}, {p.c, 1.0, Form(right), Orientation::increasing}};
  json prov = lorenz_json(p);
  prov["family"] = "lorenz";
  return PiecewiseMap("lorenz", std::move(br), {p.c}, std::move(prov));
}

LorenzCheck check_contracting_lorenz(const PiecewiseMap& map, std::size_t grid_n) {
  LorenzCheck out;
  const auto& ex = map.exceptional_set();
  const auto& br = map.branches();
  if (ex.size() != 1 || br.size() != 2) {
    out.reason = "needs exactly one exceptional point and two branches";
    return out;
  }
  out.c = ex[0];
  if (br[0].orientation != Orientation::increasing || br[1].orientation != Orientation::increasing) {
    out.reason = "branches must be increasing";
    return out;
  }
  const ValidationReport rep = validate(map, grid_n);
  if (!rep.tiling_ok() || !rep.range_ok() || !rep.orientation_ok()) {
    out.reason = "map fails tiling, range or orientation checks";
    return out;
  }
  if (!rep.schwarzian_ok()) {
    out.reason = "Schwarzian derivative is not negative on the grid";
    return out;
  }
  if (std::abs(map.eval(0.0)) > 1e-12 || std::abs(map.eval(1.0) - 1.0) > 1e-12) {
    out.reason = "0 and 1 must be fixed";
    return out;
  }
  if (!rep.repelling_fixed_points.empty()) {
    out.reason = "repelling interior fixed point at " + fmt_real(rep.repelling_fixed_points.front().x);
    return out;
  }
  out.ok = true;
  return out;
}

GapMap extract_gap_map(const PiecewiseMap& lorenz) {
  const LorenzCheck chk = check_contracting_lorenz(lorenz);
  if (!chk.ok) throw Error(ErrorKind::not_a_gap_map, "not a contracting Lorenz map: " + chk.reason);
  GapMapInfo info = gap_map_info(lorenz, chk.c);
  if (!info.is_gap_map) throw Error(ErrorKind::not_a_gap_map, info.reason);
  const auto& br = lorenz.branches();
  std::vector<Branch> r{{info.v0, chk.c, br[0].form, br[0].orientation}, {chk.c, info.v1, br[1].form, br[1].orientation}};
  json prov{{"derived", "gap_map"}, {"source", lorenz.provenance()}, {"interval", {info.v0, info.v1}}};
  return GapMap{PiecewiseMap(lorenz.name() + "-gap", std::move(r), {chk.c}, std::move(prov)), std::move(info)};
}

double distance_to_rationals(double x, std::size_t max_q) {
  double best = 1.0;
  for (std::size_t q = 1; q <= max_q; ++q) {
    const double qd = static_cast<double>(q);
    const double p = std::round(x * qd);
    best = std::min(best, std::abs(x - p / qd));
  }
  return best;
}

EwiResult construct_ewi(const LorenzParams& base, const EwiOptions& opt) {
  if (opt.search_budget < 1) throw Error(ErrorKind::bad_param, "search_budget must be >= 1");
  if (!(opt.v_lo > 0.0 && opt.v_lo <= opt.v_hi && opt.v_hi < base.c))
    throw Error(ErrorKind::bad_param, "v sweep must satisfy 0 < v_lo <= v_hi < c");
  // The rotation number is non-decreasing in v, so bisect toward the target.
  double lo_v = opt.v_lo, hi_v = opt.v_hi;
  for (std::size_t k = 0; k < opt.search_budget; ++k) {
    LorenzParams p = base;
    p.v = k == 0 ? lo_v : (k == 1 ? hi_v : 0.5 * (lo_v + hi_v));
    PiecewiseMap f = make_lorenz(p);
    const GapMapInfo info = gap_map_info(f, p.c);
    if (!info.is_gap_map) {
      if (k >= 1) lo_v = p.v;
      continue;
    }
    const double rho = rotation_number(f, p.c, opt.rotation_steps);
    if (k >= 2) (rho < opt.rotation_target ? lo_v : hi_v) = p.v;
    if (std::abs(rho - opt.rotation_target) > opt.target_tolerance) continue;
    if (distance_to_rationals(rho, opt.max_denominator) < opt.rational_gap) continue;

    // a in (0, v0) with f(a) = f(v1), left branch increasing.
    const Form& left = f.branches()[0].form;
    const double target = f.branches()[1].form.value(info.v1);
    double lo = 0.0, hi = info.v0;
    if (!(left.value(lo) < target && target < left.value(hi))) continue;
    while (hi - lo > 1e-12) {
      const double m = 0.5 * (lo + hi);
      (left.value(m) < target ? lo : hi) = m;
    }
    const double a = 0.5 * (lo + hi);
    const double fa = left.value(a);
    if (!(fa > 0.0)) continue;

    std::vector<Branch> br{{0.0, a, Form::scaled(left, 1.0 / fa, 0.0, 0.0), Orientation::increasing},
                           {a, p.c, left, Orientation::increasing},
                           f.branches()[1]};
    json prov = lorenz_json(p);
    prov["family"] = "ewi";
    prov["a"] = a;
    prov["rotation_estimate"] = rho;
    prov["rotation_steps"] = opt.rotation_steps;
    return EwiResult{PiecewiseMap("ewi", std::move(br), {a, p.c}, std::move(prov)), p, a, rho, k + 1};
  }
  throw Error(ErrorKind::search_exhausted,
              "no v in the search gives a gap map with rotation near " + fmt_real(opt.rotation_target) +
                  " and away from rationals with denominator <= " + std::to_string(opt.max_denominator));
}

}  // namespace ivmap
