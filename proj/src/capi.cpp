// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/ivmap.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "ivmap/classifier.hpp"
#include "ivmap/errors.hpp"
#include "ivmap/lateral.hpp"
#include "ivmap/map_io.hpp"
#include "ivmap/return_map.hpp"
#include "ivmap/surgery.hpp"
#include "ivmap/zoo.hpp"

struct ivm_map {
  ivmap::PiecewiseMap map;
};

namespace {

using nlohmann::json;
using namespace ivmap;

thread_local std::string g_last_error;

ivm_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::exceptional_point: return IVM_E_EXCEPTIONAL_POINT;
    case ErrorKind::out_of_domain: return IVM_E_OUT_OF_DOMAIN;
    case ErrorKind::critical_point: return IVM_E_CRITICAL_POINT;
    case ErrorKind::degenerate_side: return IVM_E_DEGENERATE_SIDE;
    case ErrorKind::partial_orbit: return IVM_E_PARTIAL_ORBIT;
    case ErrorKind::not_a_gap_map: return IVM_E_NOT_A_GAP_MAP;
    case ErrorKind::subdivision_overflow: return IVM_E_SUBDIVISION_OVERFLOW;
    case ErrorKind::hypothesis_failed: return IVM_E_HYPOTHESIS_FAILED;
    case ErrorKind::unbounded_derivative: return IVM_E_UNBOUNDED_DERIVATIVE;
    case ErrorKind::degenerate_scale: return IVM_E_DEGENERATE_SCALE;
    case ErrorKind::bad_param: return IVM_E_BAD_PARAM;
    case ErrorKind::search_exhausted: return IVM_E_SEARCH_EXHAUSTED;
    case ErrorKind::precondition_failed: return IVM_E_PRECONDITION_FAILED;
    case ErrorKind::parse: return IVM_E_PARSE;
    case ErrorKind::io: return IVM_E_IO;
  }
  return IVM_E_INTERNAL;
}

template <class Fn>
ivm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return IVM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = std::string("ParseError: ") + e.what();
    return IVM_E_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IVM_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IVM_E_INTERNAL;
  }
}

ivm_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return IVM_E_NULL_ARG;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

void put(char** out, const json& j) {
  if (out) *out = dup(dump_canonical(j));
}

ivm_map* wrap(PiecewiseMap m) { return new ivm_map{std::move(m)}; }

Side side_of(int side) {
  if (side == IVM_SIDE_MINUS) return Side::minus;
  if (side == IVM_SIDE_PLUS) return Side::plus;
  throw Error(ErrorKind::bad_param, "side must be -1 or +1");
}

std::string real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json state_json(LateralState s) { return json{{"coord", s.coord}, {"side", std::string(1, side_char(s.side))}}; }

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::indifferent: return "indifferent";
    case Stability::repelling: return "repelling";
  }
  return "unknown";
}

json branch_json(const ReturnBranch& b) {
  return json{{"sub_lo", b.sub_lo},       {"sub_hi", b.sub_hi},     {"return_time", b.return_time},
              {"image_lo", b.image_lo},   {"image_hi", b.image_hi}, {"onto", b.onto},
              {"increasing", b.increasing}};
}

json violation_json(const std::optional<NiceViolation>& v) {
  if (!v) return nullptr;
  return json{{"endpoint", v->endpoint}, {"step", v->step}, {"coord", v->coord}};
}

SamplingParams sampling_of(const ivm_sampling* s) {
  SamplingParams p;
  p.samples = s->samples;
  p.burn_in = s->burn_in;
  p.tail = s->tail;
  p.resolution = s->resolution;
  p.hausdorff_tol = s->hausdorff_tol;
  p.seed = s->seed;
  p.threads = s->threads;
  p.closure_steps = s->closure_steps;
  return p;
}

ivm_status finish_surgery(const SurgeryRecord& r, ivm_map** out, char** record) {
  put(record, record_to_json(r));
  *out = wrap(r.result);
  return IVM_OK;
}

}  // namespace

extern "C" {

const char* ivm_version(void) { return "0.1.0"; }

const char* ivm_status_name(ivm_status s) {
  switch (s) {
    case IVM_OK: return "Ok";
    case IVM_E_NULL_ARG: return "NullArgument";
    case IVM_E_INTERNAL: return "Internal";
    default: break;
  }
  if (s >= IVM_E_EXCEPTIONAL_POINT && s <= IVM_E_IO)
    return to_string(static_cast<ErrorKind>(static_cast<int>(s) - 1));
  return "Unknown";
}

const char* ivm_last_error(void) { return g_last_error.c_str(); }

void ivm_string_free(char* s) { std::free(s); }

ivm_status ivm_map_load(const char* path, ivm_map** out) {
  if (!path || !out) return null_arg("path/out");
  return guarded([&] { *out = wrap(load_map(path)); });
}

ivm_status ivm_map_from_json(const char* text, ivm_map** out) {
  if (!text || !out) return null_arg("text/out");
  return guarded([&] { *out = wrap(map_from_string(text)); });
}

ivm_status ivm_map_to_json(const ivm_map* m, char** out) {
  if (!m || !out) return null_arg("map/out");
  return guarded([&] { put(out, map_to_string(m->map)); });
}

ivm_status ivm_map_save(const ivm_map* m, const char* path) {
  if (!m || !path) return null_arg("map/path");
  return guarded([&] { save_map(m->map, path); });
}

void ivm_map_free(ivm_map* m) { delete m; }

ivm_status ivm_map_exceptional(const ivm_map* m, double* out, size_t cap, size_t* count) {
  if (!m || !count) return null_arg("map/count");
  return guarded([&] {
    const auto& ex = m->map.exceptional_set();
    *count = ex.size();
    for (size_t k = 0; k < ex.size() && k < cap && out; ++k) out[k] = ex[k];
  });
}

ivm_status ivm_map_eval(const ivm_map* m, double x, double* y) {
  if (!m || !y) return null_arg("map/y");
  return guarded([&] { *y = m->map.eval(x); });
}

ivm_status ivm_map_derivative(const ivm_map* m, double x, int order, double* y) {
  if (!m || !y) return null_arg("map/y");
  return guarded([&] { *y = m->map.derivative(x, order); });
}

ivm_status ivm_map_schwarzian(const ivm_map* m, double x, double* y) {
  if (!m || !y) return null_arg("map/y");
  return guarded([&] { *y = m->map.schwarzian(x); });
}

ivm_status ivm_map_validate(const ivm_map* m, size_t grid_n, int* clean, char** report_json) {
  if (!m || !clean) return null_arg("map/clean");
  return guarded([&] {
    const ValidationReport r = validate(m->map, grid_n ? grid_n : kDefaultValidationGrid);
    *clean = r.clean() ? 1 : 0;
    put(report_json, report_to_json(r));
  });
}

void ivm_ewi_options_default(ivm_ewi_options* o) {
  if (!o) return;
  const EwiOptions d;
  *o = ivm_ewi_options{d.rotation_target, d.target_tolerance, d.search_budget,  d.v_lo,
                       d.v_hi,            d.rotation_steps,   d.rational_gap,   d.max_denominator};
}

ivm_status ivm_zoo_logistic(double lambda, ivm_map** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = wrap(make_logistic(lambda)); });
}

ivm_status ivm_zoo_lorenz(double c, double rho_l, double rho_r, double u, double v, ivm_map** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = wrap(make_lorenz({c, rho_l, rho_r, u, v})); });
}

ivm_status ivm_zoo_ewi(double c, double rho_l, double rho_r, double u, const ivm_ewi_options* o, ivm_map** out,
                       char** info_json) {
  if (!out) return null_arg("out");
  return guarded([&] {
    EwiOptions opt;
    if (o) {
      opt.rotation_target = o->rotation_target;
      opt.target_tolerance = o->target_tolerance;
      opt.search_budget = o->search_budget;
      opt.v_lo = o->v_lo;
      opt.v_hi = o->v_hi;
      opt.rotation_steps = o->rotation_steps;
      opt.rational_gap = o->rational_gap;
      opt.max_denominator = o->max_denominator;
    }
    LorenzParams base{c, rho_l, rho_r, u, opt.v_lo};
    EwiResult r = construct_ewi(base, opt);
    put(info_json, json{{"v", r.params.v},
                        {"a", r.a},
                        {"rotation", r.rotation},
                        {"candidates_tried", r.candidates_tried},
                        {"count_bound", attractor_count_bound(r.map.exceptional_set().size())}});
    *out = wrap(std::move(r.map));
  });
}

ivm_status ivm_gap_map(const ivm_map* lorenz, ivm_map** out, char** info_json) {
  if (!lorenz || !out) return null_arg("map/out");
  return guarded([&] {
    GapMap g = extract_gap_map(lorenz->map);
    put(info_json, json{{"c", g.info.c},
                        {"v0", g.info.v0},
                        {"v1", g.info.v1},
                        {"image_measure", g.info.image_measure},
                        {"injective", g.info.injective},
                        {"is_gap_map", g.info.is_gap_map}});
    *out = wrap(std::move(g.map));
  });
}

ivm_status ivm_lateral_step(const ivm_map* m, double coord, int side, double* out_coord, int* out_side) {
  if (!m || !out_coord || !out_side) return null_arg("map/out");
  return guarded([&] {
    const LateralState s = lateral_step(m->map, {coord, side_of(side)});
    *out_coord = s.coord;
    *out_side = static_cast<int>(s.side);
  });
}

ivm_status ivm_orbit_csv(const ivm_map* m, double coord, int side, size_t n, char** csv) {
  if (!m || !csv) return null_arg("map/csv");
  return guarded([&] {
    std::string out = "step,coord,side,branch_index\n";
    if (side == 0) {
      double x = coord;
      for (size_t k = 0; k <= n; ++k) {
        const auto b = m->map.branch_index(x);
        const bool last = k == n;
        if (!last && (m->map.is_exceptional(x) || !b))
          throw Error(ErrorKind::partial_orbit, "real orbit reached " + real(x) + " at step " + std::to_string(k));
        out += std::to_string(k) + "," + real(x) + ",," + (b ? std::to_string(*b) : "") + "\n";
        if (!last) x = m->map.eval(x);
      }
    } else {
      const LateralOrbit o = lateral_orbit(m->map, {coord, side_of(side)}, n);
      for (size_t k = 0; k < o.states.size(); ++k) {
        out += std::to_string(k) + "," + real(o.states[k].coord) + "," + side_char(o.states[k].side) + ",";
        if (k < o.branches.size() && o.branches[k] != LateralOrbit::npos) out += std::to_string(o.branches[k]);
        out += "\n";
      }
    }
    put(csv, out);
  });
}

ivm_status ivm_periodic(const ivm_map* m, double coord, int side, size_t max_period, double tol_p, char** json_out) {
  if (!m || !json_out) return null_arg("map/json");
  return guarded([&] {
    const PeriodicSearch s = detect_periodic_like(m->map, {coord, side_of(side)}, max_period,
                                                  tol_p > 0.0 ? tol_p : kDefaultPeriodTolerance);
    json j{{"found", s.record.has_value()}, {"degenerate", s.degenerate}};
    if (s.record) {
      j["point"] = state_json(s.record->point);
      j["period"] = s.record->period;
      j["multiplier"] = s.record->multiplier;
      j["stability"] = stability_name(s.record->stability);
      j["cycle"] = json::array();
      for (LateralState c : s.record->cycle) j["cycle"].push_back(state_json(c));
    }
    put(json_out, j);
  });
}

ivm_status ivm_omega(const ivm_map* m, double x0, size_t burn_in, size_t tail, double resolution, char** json_out) {
  if (!m || !json_out) return null_arg("map/json");
  return guarded([&] {
    const OmegaCover c = omega_estimate(m->map, x0, burn_in, tail, resolution);
    json j{{"x0", c.x0},
           {"resolution", c.resolution},
           {"cell_count", c.cell_count},
           {"cells", c.cells},
           {"partial", c.partial},
           {"steps", c.steps},
           {"min_exceptional_distance", c.min_exceptional_distance}};
    j["period"] = c.period ? json(*c.period) : json(nullptr);
    j["cycle"] = c.cycle;
    put(json_out, j);
  });
}

ivm_status ivm_rotation(const ivm_map* m, double c, size_t n, double* out) {
  if (!m || !out) return null_arg("map/out");
  return guarded([&] { *out = rotation_number(m->map, c, n); });
}

ivm_status ivm_check_nice(const ivm_map* m, double a, double b, size_t horizon, char** json_out) {
  if (!m || !json_out) return null_arg("map/json");
  return guarded([&] {
    const NiceReport r = check_nice(m->map, {a, b}, horizon);
    put(json_out, json{{"interval", {a, b}},
                       {"horizon", r.horizon},
                       {"nice", r.nice},
                       {"truncated", r.truncated},
                       {"violation", violation_json(r.violation)}});
  });
}

ivm_status ivm_return_map(const ivm_map* m, double a, double b, size_t max_time, double tol_onto, char** csv,
                          char** summary_json) {
  if (!m || !csv) return null_arg("map/csv");
  return guarded([&] {
    ReturnMapOptions opt;
    opt.max_time = max_time;
    if (tol_onto > 0.0) opt.tol_onto = tol_onto;
    const FirstReturnMap r = first_return_map(m->map, {a, b}, opt);
    std::string out = "sub_lo,sub_hi,return_time,image_lo,image_hi,onto\n";
    std::size_t onto = 0;
    for (const ReturnBranch& br : r.branches) {
      out += real(br.sub_lo) + "," + real(br.sub_hi) + "," + std::to_string(br.return_time) + "," + real(br.image_lo) +
             "," + real(br.image_hi) + "," + (br.onto ? "true" : "false") + "\n";
      onto += br.onto ? 1 : 0;
    }
    json boundary = json::array();
    for (const BoundaryPiece& p : r.boundary)
      boundary.push_back(json{{"c", p.c},
                              {"side", std::string(1, side_char(p.side))},
                              {"returned", p.returned},
                              {"time", p.time},
                              {"sub_lo", p.sub_lo},
                              {"sub_hi", p.sub_hi},
                              {"image_lo", p.image_lo},
                              {"image_hi", p.image_hi},
                              {"onto", p.onto},
                              {"critical_image", p.critical_image}});
    put(summary_json, json{{"interval", {a, b}},
                           {"max_time", r.max_time},
                           {"branches", r.branches.size()},
                           {"onto_branches", onto},
                           {"coverage_measure", r.coverage_measure},
                           {"pieces_examined", r.pieces_examined},
                           {"boundary", boundary}});
    put(csv, out);
  });
}

ivm_status ivm_induced_map(const ivm_map* m, double a, double b, size_t depth_cap, size_t max_time, char** json_out) {
  if (!m || !json_out) return null_arg("map/json");
  return guarded([&] {
    InducedMapOptions opt;
    opt.depth_cap = depth_cap;
    opt.max_time = max_time;
    const InducedMap r = accelerated_induced_map(m->map, {a, b}, opt);
    json branches = json::array();
    for (const ReturnBranch& br : r.branches) branches.push_back(branch_json(br));
    put(json_out, json{{"interval", {a, b}},
                       {"c", r.c},
                       {"t", r.t},
                       {"depth_built", r.depth_built},
                       {"dropped_non_full", r.dropped_non_full},
                       {"exhausted", r.exhausted},
                       {"stop_reason", r.stop_reason},
                       {"boundary", branch_json(r.boundary)},
                       {"branches", branches}});
  });
}

void ivm_sampling_default(ivm_sampling* s) {
  if (!s) return;
  const SamplingParams d;
  *s = ivm_sampling{d.samples, d.burn_in, d.tail, d.resolution, d.hausdorff_tol, d.seed, d.threads, d.closure_steps};
}

ivm_status ivm_dichotomy(const ivm_map* m, double a, double b, const ivm_sampling* s, size_t horizon,
                         double threshold, char** json_out) {
  if (!m || !s || !json_out) return null_arg("map/sampling/json");
  return guarded([&] {
    DichotomyOptions opt;
    opt.samples = s->samples;
    opt.burn_in = s->burn_in;
    opt.tail = s->tail;
    opt.resolution = s->resolution;
    opt.seed = s->seed;
    opt.threads = s->threads;
    if (horizon) opt.precondition_horizon = horizon;
    if (threshold > 0.0) opt.threshold = threshold;
    const DichotomyResult r = dichotomy_probe(m->map, {a, b}, opt);
    put(json_out, json{{"interval", {a, b}},
                       {"verdict", to_string(r.verdict)},
                       {"precondition_violation", violation_json(r.precondition_violation)},
                       {"avoid_fraction", r.avoid_fraction},
                       {"cover_fraction", r.cover_fraction},
                       {"partial", r.partial},
                       {"samples", r.samples},
                       {"seed", opt.seed}});
  });
}

ivm_status ivm_surgery_pit(const ivm_map* m, double a, double b, double q, ivm_map** out, char** record) {
  if (!m || !out) return null_arg("map/out");
  return guarded([&] { finish_surgery(pit_surgery(m->map, {a, b}, q), out, record); });
}

ivm_status ivm_surgery_flatten(const ivm_map* m, double p, ivm_map** out, char** record) {
  if (!m || !out) return null_arg("map/out");
  return guarded([&] { finish_surgery(flatten_unimodal(m->map, p), out, record); });
}

ivm_status ivm_surgery_lorenz(const ivm_map* m, double a, double b, double c, ivm_map** out, char** record) {
  if (!m || !out) return null_arg("map/out");
  return guarded([&] { finish_surgery(lorenz_rescale(m->map, a, b, c), out, record); });
}

ivm_status ivm_classify(const ivm_map* m, const ivm_sampling* s, char** json_out) {
  if (!m || !s || !json_out) return null_arg("map/sampling/json");
  return guarded([&] { put(json_out, report_to_json(classification_report(m->map, sampling_of(s)))); });
}

ivm_status ivm_mane(const ivm_map* m, double tol_dist, const ivm_sampling* s, double* fraction) {
  if (!m || !s || !fraction) return null_arg("map/sampling/fraction");
  return guarded([&] { *fraction = mane_probe(m->map, tol_dist, sampling_of(s)); });
}

}  // extern "C"
