// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/return_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ivmap/parallel.hpp"

namespace ivmap {
namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_interval(Interval j) {
  if (!(j.lo >= 0.0 && j.hi <= 1.0 && j.lo < j.hi))
    throw Error(ErrorKind::bad_param, "interval (" + fmt_real(j.lo) + ", " + fmt_real(j.hi) + ") invalid");
}

// f^t(x) for x whose first t iterates avoid the exceptional set; lateral fallback otherwise.
double iterate_real(const PiecewiseMap& map, double x, std::size_t t) {
  double y = x;
  for (std::size_t i = 0; i < t; ++i) {
    const auto n = map.try_eval(y);
    if (!n) return lateral_iterate(map, {y, Side::plus}, t - i).coord;
    y = *n;
  }
  return y;
}

// x in (lo,hi) with f^t(x) = y, f^t monotone on (lo,hi).
double preimage(const PiecewiseMap& map, double lo, double hi, std::size_t t, double y, bool increasing) {
  double a = lo, b = hi;
  for (int k = 0; k < 300; ++k) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double v = iterate_real(map, m, t);
    if (v == y) return m;
    if ((v < y) == increasing) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  LateralState left;   // lim f^t(x) as x decreases to lo
  LateralState right;  // lim f^t(x) as x increases to hi
  int boundary = -1;
  bool boundary_at_lo = false;

  bool increasing() const noexcept { return left.coord <= right.coord; }
  double image_lo() const noexcept { return std::min(left.coord, right.coord); }
  double image_hi() const noexcept { return std::max(left.coord, right.coord); }
};

// Cuts a piece where its time-t image crosses the given values.
void split_at(const PiecewiseMap& map, const Piece& p, std::size_t t, std::vector<double> values, double min_width,
              std::vector<Piece>& out) {
  const double ilo = p.image_lo();
  const double ihi = p.image_hi();
  std::erase_if(values, [&](double y) { return !(y > ilo && y < ihi); });
  if (values.empty()) {
    out.push_back(p);
    return;
  }
  const bool inc = p.increasing();
  std::sort(values.begin(), values.end());
  if (!inc) std::reverse(values.begin(), values.end());
  Piece cur = p;
  cur.boundary = -1;
  bool first = true;
  for (double y : values) {
    const double x = t == 0 ? y : preimage(map, cur.lo, p.hi, t, y, inc);
    Piece left = cur;
    left.hi = x;
    left.right = {y, inc ? Side::minus : Side::plus};
    if (first && p.boundary >= 0 && p.boundary_at_lo) left.boundary = p.boundary;
    if (left.hi - left.lo >= min_width) out.push_back(left);
    cur.lo = x;
    cur.left = {y, inc ? Side::plus : Side::minus};
    cur.boundary = -1;
    first = false;
  }
  cur.right = p.right;
  if (p.boundary >= 0 && !p.boundary_at_lo) {
    cur.boundary = p.boundary;
    cur.boundary_at_lo = false;
  }
  if (cur.hi - cur.lo >= min_width) out.push_back(cur);
}

ReturnBranch to_branch(const Piece& p, std::size_t t, Interval base, double tol) {
  ReturnBranch r;
  r.sub_lo = p.lo;
  r.sub_hi = p.hi;
  r.return_time = t;
  r.image_lo = p.image_lo();
  r.image_hi = p.image_hi();
  r.increasing = p.increasing();
  r.onto = std::abs(r.image_lo - base.lo) <= tol && std::abs(r.image_hi - base.hi) <= tol;
  return r;
}

void fill_boundary(BoundaryPiece& b, const Piece& p, std::size_t t, bool returned, const ReturnBranch* br) {
  b.returned = returned;
  b.time = t;
  b.sub_lo = p.lo;
  b.sub_hi = p.hi;
  b.image_lo = p.image_lo();
  b.image_hi = p.image_hi();
  b.onto = br ? br->onto : false;
  b.critical_image = p.boundary_at_lo ? p.left.coord : p.right.coord;
}

}  // namespace

NiceReport check_nice(const PiecewiseMap& map, Interval j, std::size_t horizon) {
  require_interval(j);
  if (horizon < 1) throw Error(ErrorKind::bad_param, "horizon must be >= 1");
  NiceReport rep;
  rep.interval = j;
  rep.horizon = horizon;
  const LateralState starts[2] = {{j.lo, j.lo > 0.0 ? Side::minus : Side::plus},
                                  {j.hi, j.hi < 1.0 ? Side::plus : Side::minus}};
  for (const LateralState& s0 : starts) {
    LateralState s = s0;
    for (std::size_t k = 1; k <= horizon; ++k) {
      if (rep.violation && k >= rep.violation->step) break;
      try {
        s = lateral_step(map, s);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate_side) throw;
        rep.truncated = true;
        break;
      }
      if (j.contains_open(s.coord)) {
        rep.violation = NiceViolation{s0.coord, k, s.coord};
        break;
      }
    }
  }
  rep.nice = !rep.violation.has_value();
  return rep;
}

FirstReturnMap first_return_map(const PiecewiseMap& map, Interval base, const ReturnMapOptions& opt) {
  require_interval(base);
  if (opt.max_time < 1) throw Error(ErrorKind::bad_param, "max_time must be >= 1");
  FirstReturnMap out;
  out.base = base;
  out.max_time = opt.max_time;

  const auto& ex = map.exceptional_set();
  std::vector<double> inside;
  for (double c : ex)
    if (base.contains_open(c)) inside.push_back(c);
  const std::vector<double> ends{base.lo, base.hi};

  Piece root{base.lo, base.hi, {base.lo, Side::plus}, {base.hi, Side::minus}};
  std::vector<Piece> live;
  {
    // At time 0 the cut points are exact, and each cut at c starts a boundary lineage.
    std::vector<Piece> cut;
    split_at(map, root, 0, inside, opt.min_width, cut);
    for (Piece& p : cut) {
      for (double c : inside) {
        if (p.hi == c) {
          p.boundary = static_cast<int>(out.boundary.size());
          p.boundary_at_lo = false;
          out.boundary.push_back(BoundaryPiece{c, Side::minus});
        } else if (p.lo == c) {
          p.boundary = static_cast<int>(out.boundary.size());
          p.boundary_at_lo = true;
          out.boundary.push_back(BoundaryPiece{c, Side::plus});
        }
      }
      live.push_back(p);
    }
  }

  std::vector<Piece> stepped, cut, next;
  for (std::size_t t = 0; t < opt.max_time && !live.empty(); ++t) {
    next.clear();
    for (const Piece& p : live) {
      stepped.clear();
      if (t == 0) {
        stepped.push_back(p);
      } else {
        split_at(map, p, t, ex, opt.min_width, stepped);
      }
      for (Piece& q : stepped) {
        ++out.pieces_examined;
        try {
          q.left = lateral_step(map, q.left);
          q.right = lateral_step(map, q.right);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::degenerate_side) throw;
          continue;
        }
        cut.clear();
        split_at(map, q, t + 1, ends, opt.min_width, cut);
        for (const Piece& r : cut) {
          const double mid = 0.5 * (r.image_lo() + r.image_hi());
          if (base.contains_open(mid)) {
            out.branches.push_back(to_branch(r, t + 1, base, opt.tol_onto));
            if (r.boundary >= 0) fill_boundary(out.boundary[static_cast<std::size_t>(r.boundary)], r, t + 1, true, &out.branches.back());
          } else {
            next.push_back(r);
          }
        }
      }
      if (out.branches.size() + next.size() > opt.branch_cap)
        throw Error(ErrorKind::subdivision_overflow, "more than " + std::to_string(opt.branch_cap) + " pieces");
    }
    live.swap(next);
    if (t + 1 == opt.max_time)
      for (const Piece& p : live)
        if (p.boundary >= 0) fill_boundary(out.boundary[static_cast<std::size_t>(p.boundary)], p, t + 1, false, nullptr);
  }

  std::sort(out.branches.begin(), out.branches.end(),
            [](const ReturnBranch& x, const ReturnBranch& y) { return x.sub_lo < y.sub_lo; });
  double covered = 0.0;
  for (const ReturnBranch& b : out.branches) covered += b.sub_hi - b.sub_lo;
  out.coverage_measure = covered / base.length();
  return out;
}

namespace {

struct Component {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t time = 0;
  double image_lo = 0.0;
  double image_hi = 0.0;
  bool onto = false;
};

[[noreturn]] void hypothesis(const std::string& what) { throw Error(ErrorKind::hypothesis_failed, what); }

ReturnBranch as_branch(const Component& c) {
  return ReturnBranch{c.lo, c.hi, c.time, c.image_lo, c.image_hi, c.onto, true};
}

}  // namespace

InducedMap accelerated_induced_map(const PiecewiseMap& map, Interval j, const InducedMapOptions& opt) {
  require_interval(j);
  const double a = j.lo;
  const double b = j.hi;
  std::vector<double> inside;
  for (double e : map.exceptional_set())
    if (j.contains_open(e)) inside.push_back(e);
  if (inside.size() != 1) hypothesis("(a,b) must contain exactly one exceptional point");
  const double c = inside[0];
  if (map.one_sided(c, Side::minus).direction <= 0 || map.one_sided(c, Side::plus).direction <= 0)
    hypothesis("map does not preserve orientation around c");

  const LateralState a_state{a, a > 0.0 ? Side::minus : Side::plus};
  const PeriodicSearch per = detect_periodic_like(map, a_state, opt.max_period);
  if (!per.record) hypothesis("a = " + fmt_real(a) + " is not a detected periodic point");
  {
    // a is periodic, so its cycle is the whole orbit; points within the
    // detection tolerance of a or b are those endpoints
    LateralState s = a_state;
    const std::size_t steps = std::min(opt.horizon, per.record->period);
    for (std::size_t k = 1; k <= steps; ++k) {
      s = lateral_step(map, s);
      if (s.coord > a + kDefaultPeriodTolerance && s.coord < b - kDefaultPeriodTolerance)
        hypothesis("orbit of a enters (a,b) at step " + std::to_string(k));
    }
    s = {c, Side::minus};
    bool visits_left = false;
    for (std::size_t k = 1; k <= opt.horizon; ++k) {
      s = lateral_step(map, s);
      if (s.coord > c && s.coord < b) hypothesis("orbit of c-i enters (c,b) at step " + std::to_string(k));
      if (s.coord > a && s.coord < c) visits_left = true;
    }
    if (!visits_left) hypothesis("orbit of c-i never visits (a,c)");
  }

  ReturnMapOptions ro;
  ro.max_time = opt.max_time;
  ro.tol_onto = opt.tol_onto;
  const FirstReturnMap f0 = first_return_map(map, j, ro);

  InducedMap out;
  out.base = j;
  out.c = c;

  std::vector<Component> comps;  // components of U_n in (a, t_n)
  for (const ReturnBranch& r : f0.branches)
    if (r.sub_hi <= c) comps.push_back({r.sub_lo, r.sub_hi, r.return_time, r.image_lo, r.image_hi, r.onto});
  const BoundaryPiece* i0 = nullptr;
  for (const BoundaryPiece& bp : f0.boundary)
    if (bp.c == c && bp.side == Side::minus) i0 = &bp;
  if (!i0) hypothesis("no piece adjacent to c from the left");

  auto finish = [&](const Component* in) {
    for (const Component& k : comps) {
      if (k.onto) {
        out.branches.push_back(as_branch(k));
      } else {
        ++out.dropped_non_full;
      }
    }
    std::sort(out.branches.begin(), out.branches.end(),
              [](const ReturnBranch& x, const ReturnBranch& y) { return x.sub_lo < y.sub_lo; });
    if (in) out.boundary = as_branch(*in);
    return out;
  };

  if (!i0->returned) {
    out.exhausted = true;
    out.stop_reason = "the c-adjacent piece does not return within max_time";
    return finish(nullptr);
  }
  std::erase_if(comps, [&](const Component& k) { return k.hi == c; });
  Component in{i0->sub_lo, c, i0->time, i0->image_lo, i0->image_hi, false};
  LateralState z = lateral_iterate(map, {c, Side::minus}, in.time);  // F_n(c-)
  out.t.push_back(in.lo);

  const Component* ia = nullptr;
  for (const Component& k : comps)
    if (k.lo == a) ia = &k;
  if (!ia || !ia->onto) hypothesis("no full branch adjacent to a");
  const double alpha = ia->hi;
  const std::size_t r_a = ia->time;

  constexpr std::size_t kMaxPasses = 100000;
  for (std::size_t n = 0; n < opt.depth_cap; ++n) {
    // G = F_n^l on I_n; the c-side image follows the lateral orbit of c-i.
    std::size_t l = 1;
    std::size_t time = in.time;
    LateralState w = z;
    while (w.coord <= alpha && l < kMaxPasses) {
      w = lateral_iterate(map, w, r_a);
      time += r_a;
      ++l;
    }
    if (l >= kMaxPasses) {
      out.exhausted = true;
      out.stop_reason = "orbit of c-i stays in the a-adjacent branch";
      break;
    }
    std::vector<Component> all = comps;
    all.push_back(in);
    const Component* host = nullptr;
    for (const Component& k : all)
      if (k.lo < w.coord && w.coord <= k.hi) host = &k;
    if (!host) {
      out.exhausted = true;
      out.stop_reason = "orbit of c-i lands outside the enumerated return domain";
      break;
    }
    std::vector<Component> fresh;
    Component next_in;
    for (const Component& k : all) {
      if (!(k.lo < w.coord)) continue;
      const double x_lo = k.lo == a ? in.lo : preimage(map, in.lo, c, time, k.lo, true);
      if (&k == host) {
        next_in = Component{x_lo, c, time + k.time, k.image_lo, 0.0, false};
      } else {
        const double x_hi = preimage(map, in.lo, c, time, k.hi, true);
        fresh.push_back(Component{x_lo, x_hi, time + k.time, k.image_lo, k.image_hi, k.onto});
      }
    }
    z = lateral_iterate(map, w, host->time);
    next_in.image_hi = z.coord;
    if (!(next_in.lo > in.lo)) {
      out.exhausted = true;
      out.stop_reason = "t_n failed to increase";
      break;
    }
    for (const Component& k : fresh) comps.push_back(k);
    in = next_in;
    out.t.push_back(in.lo);
    ++out.depth_built;
  }
  return finish(&in);
}

const char* to_string(DichotomyVerdict v) noexcept {
  switch (v) {
    case DichotomyVerdict::all_avoid: return "AllAvoid";
    case DichotomyVerdict::all_cover: return "AllCover";
    case DichotomyVerdict::mixed: return "Mixed";
    case DichotomyVerdict::precondition_failed: return "PreconditionFailed";
  }
  return "Unknown";
}

double seeded_uniform(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  // Midpoint of one of 2^53 equal cells, so the value is never an endpoint.
  const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

DichotomyResult dichotomy_probe(const PiecewiseMap& map, Interval i, const DichotomyOptions& opt) {
  require_interval(i);
  if (opt.samples < 1) throw Error(ErrorKind::bad_param, "samples must be >= 1");
  DichotomyResult res;
  res.samples = opt.samples;

  for (double e : map.exceptional_set()) {
    for (Side side : {Side::minus, Side::plus}) {
      LateralState s;
      try {
        s = lateral_step(map, {e, side});
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::degenerate_side) throw;
        continue;
      }
      const double v = s.coord;
      for (std::size_t k = 0; k <= opt.precondition_horizon; ++k) {
        if (i.contains_open(s.coord)) {
          res.precondition_violation = NiceViolation{v, k, s.coord};
          res.verdict = DichotomyVerdict::precondition_failed;
          return res;
        }
        if (k == opt.precondition_horizon) break;
        try {
          s = lateral_step(map, s);
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::degenerate_side) throw;
          break;
        }
      }
    }
  }

  const std::uint32_t count = cell_count_for(opt.resolution);
  std::vector<std::uint32_t> target;
  for (std::uint32_t k = 0; k < count; ++k) {
    const double lo = static_cast<double>(k) * opt.resolution;
    const double hi = static_cast<double>(k + 1) * opt.resolution;
    if (lo >= i.lo && hi <= i.hi) target.push_back(k);
  }

  std::vector<std::uint8_t> avoid(opt.samples, 0), cover(opt.samples, 0), partial(opt.samples, 0);
  parallel_for(opt.samples, opt.threads, [&](std::size_t k) {
    double x = seeded_uniform(opt.seed, k, i.lo, i.hi);
    for (std::size_t s = 0; s < opt.burn_in; ++s) {
      const auto y = map.try_eval(x);
      if (!y) {
        partial[k] = 1;
        return;
      }
      x = *y;
    }
    std::vector<std::uint8_t> seen(count, 0);
    bool hit = false;
    for (std::size_t s = 0; s < opt.tail; ++s) {
      if (i.contains_open(x)) {
        hit = true;
        seen[cell_of(x, opt.resolution, count)] = 1;
      }
      const auto y = map.try_eval(x);
      if (!y) {
        partial[k] = 1;
        break;
      }
      x = *y;
    }
    avoid[k] = !hit;
    cover[k] = hit && std::all_of(target.begin(), target.end(), [&](std::uint32_t c) { return seen[c] != 0; });
  });

  std::size_t n_avoid = 0, n_cover = 0;
  for (std::size_t k = 0; k < opt.samples; ++k) {
    n_avoid += avoid[k];
    n_cover += cover[k];
    res.partial += partial[k];
  }
  const double n = static_cast<double>(opt.samples);
  res.avoid_fraction = static_cast<double>(n_avoid) / n;
  res.cover_fraction = static_cast<double>(n_cover) / n;
  if (res.avoid_fraction >= opt.threshold) {
    res.verdict = DichotomyVerdict::all_avoid;
  } else if (res.cover_fraction >= opt.threshold) {
    res.verdict = DichotomyVerdict::all_cover;
  } else {
    res.verdict = DichotomyVerdict::mixed;
  }
  return res;
}

}  // namespace ivmap
