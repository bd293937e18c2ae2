// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ivmap/lateral.hpp"
#include "ivmap/zoo.hpp"

namespace ivmap {
namespace {

using nlohmann::json;

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Rescale {
  double scale = 1.0;
  double offset = 0.0;
  double anchor = 0.0;
};

// Cuts branches at the ends of `i` and wraps the pieces inside it. `pick`
// chooses the rescale for a piece by its midpoint.
PiecewiseMap rebuild(const PiecewiseMap& src, Interval i, const std::function<Rescale(double)>& pick,
                     std::vector<double> extra_cuts, const std::string& name, json provenance) {
  std::vector<double> cuts{i.lo, i.hi};
  cuts.insert(cuts.end(), extra_cuts.begin(), extra_cuts.end());
  std::vector<Branch> out;
  for (const Branch& b : src.branches()) {
    std::vector<double> pts{b.lo};
    for (double x : cuts)
      if (x > b.lo && x < b.hi) pts.push_back(x);
    pts.push_back(b.hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double lo = pts[k], hi = pts[k + 1];
      const double mid = 0.5 * (lo + hi);
      if (mid > i.lo && mid < i.hi) {
        const Rescale r = pick(mid);
        out.push_back(Branch{lo, hi, Form::scaled(b.form, r.scale, r.offset, r.anchor), b.orientation});
      } else {
        out.push_back(Branch{lo, hi, b.form, b.orientation});
      }
    }
  }
  std::vector<double> ex = src.exceptional_set();
  for (double x : cuts)
    if (x > 0.0 && x < 1.0) ex.push_back(x);
  std::sort(ex.begin(), ex.end());
  ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
  return PiecewiseMap(name, std::move(out), std::move(ex), std::move(provenance));
}

json chain(SurgeryKind kind, const PiecewiseMap& src, Interval i, const std::vector<double>& factors) {
  return json{{"surgery", to_string(kind)},
              {"source", src.name()},
              {"source_provenance", src.provenance()},
              {"interval", {i.lo, i.hi}},
              {"factors", factors}};
}

// Root of form(x) = y on (lo, hi) for a monotone form.
double solve_monotone(const Form& form, double lo, double hi, double y) {
  const bool inc = form.value(hi) > form.value(lo);
  for (int k = 0; k < 300; ++k) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if ((form.value(m) < y) == inc) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(SurgeryKind k) noexcept {
  switch (k) {
    case SurgeryKind::pit: return "pit";
    case SurgeryKind::flatten_unimodal: return "flatten_unimodal";
    case SurgeryKind::lorenz_rescale: return "lorenz_rescale";
  }
  return "unknown";
}

SurgeryRecord pit_surgery(const PiecewiseMap& map, Interval i, double q) {
  if (!(i.lo > 0.0 && i.hi < 1.0 && i.lo < i.hi)) throw Error(ErrorKind::bad_param, "pit interval must lie inside (0,1)");
  if (!i.contains_open(q)) throw Error(ErrorKind::bad_param, "q must lie in the pit interval");
  const SupDerivative sup = sup_abs_derivative(map);
  if (!(sup.value > 0.0)) throw Error(ErrorKind::degenerate_scale, "sup |f'| is zero");
  const double sigma = 1.0 / (2.0 * sup.value);
  const std::vector<double> factors{sigma};
  PiecewiseMap g = rebuild(
      map, i, [&](double) { return Rescale{sigma, q, q}; }, {}, map.name() + "+pit",
      chain(SurgeryKind::pit, map, i, factors));

  bool inside = true;
  constexpr int kGrid = 10000;
  for (int k = 1; k <= kGrid && inside; ++k) {
    const double x = i.lo + i.length() * static_cast<double>(k) / (kGrid + 1);
    if (g.is_exceptional(x)) continue;
    const double y = g.eval(x);
    inside = y > i.lo && y < i.hi;
  }
  return SurgeryRecord{SurgeryKind::pit, map.name(), map.provenance(), i, factors,
                       sup.analytic ? "analytic" : "grid", inside, std::move(g)};
}

SurgeryRecord flatten_unimodal(const PiecewiseMap& map, double p) {
  const auto& ex = map.exceptional_set();
  const auto& br = map.branches();
  if (ex.size() != 1 || br.size() != 2 || br[0].orientation != Orientation::increasing ||
      br[1].orientation != Orientation::decreasing)
    throw Error(ErrorKind::hypothesis_failed, "flatten_unimodal needs a unimodal map (increasing, then decreasing)");
  const double c = ex[0];
  const PeriodicSearch per = detect_periodic_like(map, {p, Side::plus}, kMaxConvergencePeriod);
  if (!per.record) throw Error(ErrorKind::hypothesis_failed, fmt_real(p) + " is not a detected periodic point");
  const double pp = per.record->point.coord;
  double p_hat = 0.0;
  for (const LateralState& s : per.record->cycle) p_hat = std::max(p_hat, s.coord);

  const double fc = lateral_step(map, {c, Side::minus}).coord;
  const double fp = map.eval(pp);
  if (!(fc - fp >= 1e-12)) throw Error(ErrorKind::degenerate_scale, "f(c) - f(p) below 1e-12");
  if (!(p_hat < fc)) throw Error(ErrorKind::degenerate_scale, "f^-1((p_hat, 1]) is empty");
  const double lambda = (1.0 - fp) / (fc - fp);
  const double j_lo = br[0].form.value(br[0].lo) < p_hat ? solve_monotone(br[0].form, br[0].lo, c, p_hat) : br[0].lo;
  const double j_hi = br[1].form.value(br[1].hi) < p_hat ? solve_monotone(br[1].form, c, br[1].hi, p_hat) : br[1].hi;
  const Interval j{j_lo, j_hi};
  const std::vector<double> factors{lambda};
  PiecewiseMap g = rebuild(
      map, j, [&](double) { return Rescale{lambda, fp, fp}; }, {}, map.name() + "+flatten",
      chain(SurgeryKind::flatten_unimodal, map, j, factors));
  return SurgeryRecord{SurgeryKind::flatten_unimodal, map.name(), map.provenance(), j, factors, "", std::nullopt,
                       std::move(g)};
}

SurgeryRecord lorenz_rescale(const PiecewiseMap& map, double a, double b, double c) {
  const LorenzCheck chk = check_contracting_lorenz(map);
  if (!chk.ok) throw Error(ErrorKind::hypothesis_failed, "not a contracting Lorenz map: " + chk.reason);
  if (chk.c != c) throw Error(ErrorKind::bad_param, "c = " + fmt_real(c) + " is not the exceptional point");
  if (!(0.0 < a && a < c && c < b && b < 1.0)) throw Error(ErrorKind::bad_param, "need 0 < a < c < b < 1");
  const double fa = map.eval(a);
  const double fb = map.eval(b);
  const double fcm = map.one_sided(c, Side::minus).value;
  const double fcp = map.one_sided(c, Side::plus).value;
  const double da = fcm - fa;
  const double db = fb - fcp;
  if (!(std::abs(da) >= 1e-12) || !(std::abs(db) >= 1e-12))
    throw Error(ErrorKind::degenerate_scale, "an image of (a,c) or (c,b) has length below 1e-12");
  const double la = (1.0 - fa) / std::abs(da);
  const double lb = fb / std::abs(db);
  const Interval i{a, b};
  const std::vector<double> factors{la, lb};
  PiecewiseMap g = rebuild(
      map, i, [&](double mid) { return mid < c ? Rescale{la, fa, fa} : Rescale{lb, fb, fb}; }, {c},
      map.name() + "+lorenz_rescale", chain(SurgeryKind::lorenz_rescale, map, i, factors));
  return SurgeryRecord{SurgeryKind::lorenz_rescale, map.name(), map.provenance(), i, factors, "", std::nullopt,
                       std::move(g)};
}

json record_to_json(const SurgeryRecord& r) {
  json j{{"kind", to_string(r.kind)},
         {"source", r.source},
         {"source_provenance", r.source_provenance},
         {"interval", {r.modified.lo, r.modified.hi}},
         {"factors", r.scale_factors}};
  if (!r.sup_method.empty()) j["sup_method"] = r.sup_method;
  if (r.maps_into_interval) j["maps_into_interval"] = *r.maps_into_interval;
  j["exceptional_set"] = r.result.exceptional_set();
  return j;
}

}  // namespace ivmap
