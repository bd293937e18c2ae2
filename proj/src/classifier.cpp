// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ivmap/errors.hpp"
#include "ivmap/parallel.hpp"
#include "ivmap/return_map.hpp"

namespace ivmap {
namespace {

using nlohmann::json;

// Largest index distance from a cell of a to the nearest cell of b (both sorted).
std::uint32_t directed_cells(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::uint32_t worst = 0;
  std::size_t j = 0;
  for (std::uint32_t x : a) {
    while (j + 1 < b.size() && b[j + 1] <= x) ++j;
    std::uint32_t d = x >= b[j] ? x - b[j] : b[j] - x;
    if (j + 1 < b.size()) d = std::min(d, b[j + 1] - x);
    worst = std::max(worst, d);
  }
  return worst;
}

std::uint32_t hausdorff_index(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                              std::uint32_t limit) {
  const auto gap = [](std::uint32_t x, std::uint32_t y) { return x > y ? x - y : y - x; };
  // Hausdorff distance is at least the gap between infima and between suprema.
  const std::uint32_t quick = std::max(gap(a.front(), b.front()), gap(a.back(), b.back()));
  if (quick > limit) return quick;
  return std::max(directed_cells(a, b), directed_cells(b, a));
}

std::uint32_t tol_cells(double tol, double resolution) {
  return static_cast<std::uint32_t>(std::floor(tol / resolution + 1e-9));
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

std::vector<Interval> merge_cells(const std::vector<std::uint32_t>& cells, double resolution) {
  std::vector<Interval> out;
  for (std::size_t k = 0; k < cells.size();) {
    std::size_t e = k;
    while (e + 1 < cells.size() && cells[e + 1] == cells[e] + 1) ++e;
    out.push_back({cells[k] * resolution, std::min(1.0, (cells[e] + 1.0) * resolution)});
    k = e + 1;
  }
  return out;
}

json state_json(LateralState s) { return json{{"coord", s.coord}, {"side", std::string(1, side_char(s.side))}}; }

bool multiplier_attracts(Stability s) { return s != Stability::repelling; }

}  // namespace

const char* to_string(AttractorKind k) noexcept {
  switch (k) {
    case AttractorKind::periodic_like: return "periodic_like";
    case AttractorKind::cycle_of_intervals: return "cycle_of_intervals";
    case AttractorKind::cantor_like: return "cantor_like";
    case AttractorKind::undetermined: return "undetermined";
  }
  return "unknown";
}

std::vector<OmegaCover> sample_omega(const PiecewiseMap& map, const SamplingParams& p) {
  if (p.samples == 0) throw Error(ErrorKind::bad_param, "samples must be positive");
  std::vector<OmegaCover> out(p.samples);
  parallel_for(p.samples, p.threads, [&](std::size_t k) {
    const double x0 = seeded_uniform(p.seed, k, 0.0, 1.0);
    out[k] = omega_estimate(map, x0, p.burn_in, p.tail, p.resolution);
  });
  return out;
}

double hausdorff_cells(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, double resolution) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : 1.0;
  return std::max(directed_cells(a, b), directed_cells(b, a)) * resolution;
}

double directed_hausdorff_cells(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                double resolution) {
  if (a.empty()) return 0.0;
  if (b.empty()) return 1.0;
  return directed_cells(a, b) * resolution;
}

std::vector<AttractorEstimate> cluster_attractors(const std::vector<OmegaCover>& covers, double hausdorff_tol) {
  // identical covers collapse into one group before linkage
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> by_cells;
  double resolution = 0.0;
  for (std::size_t k = 0; k < covers.size(); ++k) {
    if (covers[k].partial || covers[k].cells.empty()) continue;
    if (resolution == 0.0) resolution = covers[k].resolution;
    if (covers[k].resolution != resolution) throw Error(ErrorKind::bad_param, "covers use different resolutions");
    by_cells[covers[k].cells].push_back(k);
  }
  std::vector<const std::vector<std::uint32_t>*> cells;
  std::vector<const std::vector<std::size_t>*> members;
  for (const auto& [c, m] : by_cells) {
    cells.push_back(&c);
    members.push_back(&m);
  }
  const std::size_t g = cells.size();
  const std::uint32_t limit = g ? tol_cells(hausdorff_tol, resolution) : 0;

  std::vector<std::size_t> parent(g);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  // map order sorts groups by their first cell, so the scan can stop early
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      if (cells[j]->front() - cells[i]->front() > limit) break;
      const std::size_t ri = find(parent, i), rj = find(parent, j);
      if (ri == rj) continue;
      if (hausdorff_index(*cells[i], *cells[j], limit) <= limit) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }

  std::map<std::size_t, AttractorEstimate> roots;
  for (std::size_t i = 0; i < g; ++i) {
    AttractorEstimate& e = roots[find(parent, i)];
    e.resolution = resolution;
    e.members.insert(e.members.end(), members[i]->begin(), members[i]->end());
    std::vector<std::uint32_t> u;
    std::set_union(e.cells.begin(), e.cells.end(), cells[i]->begin(), cells[i]->end(), std::back_inserter(u));
    e.cells = std::move(u);
  }
  std::vector<AttractorEstimate> out;
  for (auto& [r, e] : roots) {
    std::sort(e.members.begin(), e.members.end());
    const double p = static_cast<double>(e.members.size()) / static_cast<double>(covers.size());
    e.basin = p;
    e.confidence = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(covers.size()));
    e.intervals = merge_cells(e.cells, resolution);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const AttractorEstimate& a, const AttractorEstimate& b) {
    if (a.cells.front() != b.cells.front()) return a.cells.front() < b.cells.front();
    return a.members.front() < b.members.front();
  });
  for (std::size_t k = 0; k < out.size(); ++k) out[k].id = k;
  return out;
}

void classify_attractor(const PiecewiseMap& map, AttractorEstimate& est, const std::vector<OmegaCover>& covers,
                        const SamplingParams& p) {
  std::size_t with_period = 0;
  const OmegaCover* rep = nullptr;
  for (std::size_t m : est.members) {
    if (covers[m].period) {
      ++with_period;
      if (!rep) rep = &covers[m];
    }
  }

  if (rep && 2 * with_period >= est.members.size()) {
    const std::size_t period = *rep->period;
    LateralState start{rep->cycle.front(), Side::plus};
    const PeriodicSearch search = detect_periodic_like(map, start, 2 * period);
    std::vector<LateralState> pts;
    if (search.record) {
      start = search.record->point;
      for (std::size_t k = 0; k < period && k < search.record->cycle.size(); ++k) pts.push_back(search.record->cycle[k]);
    } else {
      for (double x : rep->cycle) pts.push_back({x, Side::plus});
    }
    double mult = 0.0;
    try {
      mult = cycle_multiplier(map, start, period);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_side) throw;
      mult = 0.0;  // a flat side contracts everything
    }
    std::sort(pts.begin(), pts.end(), [](LateralState a, LateralState b) { return a.coord < b.coord; });
    est.kind = AttractorKind::periodic_like;
    est.period = period;
    est.multiplier = mult;
    est.points = std::move(pts);
    est.spurious = !multiplier_attracts(classify_multiplier(mult));
  } else {
    const double x0 = covers[est.members.front()].x0;
    est.density.clear();
    for (double r : p.trend_resolutions) {
      const OmegaCover c = omega_estimate(map, x0, p.burn_in, p.tail, r);
      est.density.push_back(static_cast<double>(c.cells.size()) * r);
    }
    bool shrinking = est.density.size() >= 2;
    double lo = est.density.empty() ? 0.0 : est.density.front(), hi = lo;
    for (std::size_t k = 0; k + 1 < est.density.size(); ++k) {
      shrinking = shrinking && est.density[k] >= 1.5 * est.density[k + 1];
    }
    for (double d : est.density) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    const bool stable = est.density.size() >= 2 && lo > 0.0 && hi <= 1.1 * lo;
    bool straddles = false;
    for (double c : map.exceptional_set())
      for (const Interval& i : est.intervals) straddles = straddles || i.contains_open(c);
    if (shrinking) {
      est.kind = AttractorKind::cantor_like;
    } else if (stable && straddles) {
      est.kind = AttractorKind::cycle_of_intervals;
    } else {
      est.kind = AttractorKind::undetermined;
    }
  }

  // lateral exceptional orbits whose closure matches the support
  est.traced_by.clear();
  const std::vector<double> res{est.resolution};
  const std::uint32_t limit = tol_cells(p.hausdorff_tol, est.resolution);
  std::vector<std::pair<LateralState, std::vector<std::uint32_t>>> inside;
  for (double c : map.exceptional_set()) {
    for (Side s : {Side::minus, Side::plus}) {
      const LateralState ls{c, s};
      std::vector<std::uint32_t> cl = lateral_closure_cells(map, ls, p.closure_steps, 0, res).front();
      if (cl.empty()) continue;
      if (hausdorff_index(cl, est.cells, limit) <= limit) est.traced_by.push_back(ls);
      if (directed_cells(cl, est.cells) <= limit) inside.emplace_back(ls, std::move(cl));
    }
  }
  if (est.traced_by.empty() && inside.size() > 1) {
    std::vector<std::uint32_t> u;
    for (const auto& [ls, cl] : inside) {
      std::vector<std::uint32_t> next;
      std::set_union(u.begin(), u.end(), cl.begin(), cl.end(), std::back_inserter(next));
      u = std::move(next);
    }
    if (hausdorff_index(u, est.cells, limit) <= limit)
      for (const auto& [ls, cl] : inside) est.traced_by.push_back(ls);
  }
}

std::uint64_t attractor_count_bound(std::size_t exceptional_points) noexcept {
  const std::size_t e = 1 + 2 * exceptional_points;
  if (e >= 64) return ~std::uint64_t{0};
  return std::uint64_t{1} << e;
}

ClassificationReport classification_report(const PiecewiseMap& map, const SamplingParams& p) {
  ClassificationReport r;
  r.map_name = map.name();
  r.params = p;
  const std::vector<OmegaCover> covers = sample_omega(map, p);
  for (const OmegaCover& c : covers) r.partial += c.partial ? 1 : 0;
  std::vector<AttractorEstimate> clusters = cluster_attractors(covers, p.hausdorff_tol);
  for (AttractorEstimate& e : clusters) {
    classify_attractor(map, e, covers, p);
    if (e.spurious) {
      r.spurious += e.members.size();
    } else {
      e.id = r.attractors.size();
      r.attractors.push_back(std::move(e));
    }
  }
  r.unassigned = static_cast<double>(r.partial + r.spurious) / static_cast<double>(covers.size());
  r.count_bound = attractor_count_bound(map.exceptional_set().size());
  r.bound_respected = r.attractors.size() <= r.count_bound;
  return r;
}

json report_to_json(const ClassificationReport& r) {
  json atts = json::array();
  for (const AttractorEstimate& e : r.attractors) {
    json a{{"id", e.id}, {"kind", to_string(e.kind)}, {"basin", e.basin}, {"confidence", e.confidence}};
    json support;
    if (e.kind == AttractorKind::periodic_like) {
      support["points"] = json::array();
      for (LateralState s : e.points) support["points"].push_back(state_json(s));
      a["period"] = *e.period;
      a["multiplier"] = *e.multiplier;
    } else {
      support["intervals"] = json::array();
      for (const Interval& i : e.intervals) support["intervals"].push_back({i.lo, i.hi});
      a["density"] = e.density;
    }
    support["resolution"] = e.resolution;
    a["support"] = std::move(support);
    a["traced_by"] = json::array();
    for (LateralState s : e.traced_by) a["traced_by"].push_back(state_json(s));
    atts.push_back(std::move(a));
  }
  const SamplingParams& p = r.params;
  return json{{"map", r.map_name},
              {"attractors", std::move(atts)},
              {"unassigned", r.unassigned},
              {"bound", r.count_bound},
              {"bound_respected", r.bound_respected},
              {"params",
               {{"samples", p.samples},
                {"burn_in", p.burn_in},
                {"tail", p.tail},
                {"resolution", p.resolution},
                {"hausdorff_tol", p.hausdorff_tol},
                {"seed", p.seed},
                {"closure_steps", p.closure_steps},
                {"trend_resolutions", p.trend_resolutions}}}};
}

double mane_probe(const PiecewiseMap& map, double tol_dist, const SamplingParams& p) {
  if (!(tol_dist > 0.0)) throw Error(ErrorKind::bad_param, "tol_dist must be positive");
  const std::vector<OmegaCover> covers = sample_omega(map, p);
  std::size_t counted = 0, close = 0;
  for (const OmegaCover& c : covers) {
    if (c.period) {
      double mult = 0.0;
      try {
        mult = cycle_multiplier(map, {c.cycle.front(), Side::plus}, *c.period);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate_side) throw;
      }
      if (multiplier_attracts(classify_multiplier(mult)))
        throw Error(ErrorKind::precondition_failed,
                    "a periodic attractor of period " + std::to_string(*c.period) + " was detected");
      continue;  // converged onto a repelling cycle through rounding
    }
    ++counted;
    if (c.partial || c.min_exceptional_distance < tol_dist) ++close;
  }
  if (counted == 0) throw Error(ErrorKind::precondition_failed, "no sample is left to probe");
  return static_cast<double>(close) / static_cast<double>(counted);
}

}  // namespace ivmap
