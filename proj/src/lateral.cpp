// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/lateral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ivmap {
namespace {

std::string fmt_state(LateralState s) {
  std::ostringstream os;
  os.precision(17);
  os << s.coord << side_char(s.side);
  return os.str();
}

struct Step {
  LateralState next;
  double derivative = 0.0;
  std::size_t branch = 0;
};

Step step_with_derivative(const PiecewiseMap& map, LateralState s) {
  if (!(s.coord >= 0.0 && s.coord <= 1.0)) throw Error(ErrorKind::out_of_domain, "lateral point " + fmt_state(s));
  if ((s.side == Side::minus && s.coord == 0.0) || (s.side == Side::plus && s.coord == 1.0))
    throw Error(ErrorKind::out_of_domain, fmt_state(s) + " is not a lateral point");
  const auto b = map.branch_index(s.coord, s.side);
  if (!b) throw Error(ErrorKind::out_of_domain, "no branch reaches " + fmt_state(s));
  const Form& form = map.branches()[*b].form;
  const Jet j = form.jet(s.coord);
  int dir = (j[1] > 0.0) - (j[1] < 0.0);
  if (dir == 0) dir = form.direction_sign(s.coord, s.side == Side::minus);
  if (dir == 0) throw Error(ErrorKind::degenerate_side, "f is flat on the " + std::string(1, side_char(s.side)) +
                                                            " side of " + fmt_state(s));
  double y = PiecewiseMap::clamp_range(j[0]);
  if (!(y >= 0.0 && y <= 1.0)) throw Error(ErrorKind::out_of_domain, "lateral image of " + fmt_state(s) + " leaves [0,1]");
  Side side = dir > 0 ? s.side : flip(s.side);
  // Range clamping can leave a side that points outside [0,1].
  if (y == 0.0) side = Side::plus;
  if (y == 1.0) side = Side::minus;
  return Step{{y, side}, j[1], *b};
}

// Branch sequence of the real orbit of x over n steps, or empty on an exceptional hit.
bool real_itinerary(const PiecewiseMap& map, double x, std::size_t n, std::vector<std::size_t>& out, double& end) {
  out.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x >= 0.0 && x <= 1.0) || map.is_exceptional(x)) return false;
    const auto b = map.branch_index(x);
    if (!b) return false;
    out.push_back(*b);
    x = PiecewiseMap::clamp_range(map.branches()[*b].form.value(x));
  }
  end = x;
  return true;
}

constexpr double kCaptureWindow = 1e-3;

// Root of f^l(x) - x near x0 on a window where the branch itinerary is constant.
std::optional<double> refine_cycle(const PiecewiseMap& map, double x0, std::size_t l) {
  std::vector<std::size_t> it0, it_lo, it_hi;
  double e0 = 0.0, elo = 0.0, ehi = 0.0;
  if (!real_itinerary(map, x0, l, it0, e0)) return std::nullopt;
  const double g0 = e0 - x0;
  if (g0 == 0.0) return x0;
  for (double w = std::max(std::abs(g0), 1e-15); w <= kCaptureWindow; w *= 2.0) {
    const double lo = std::max(0.0, x0 - w);
    const double hi = std::min(1.0, x0 + w);
    if (!real_itinerary(map, lo, l, it_lo, elo) || !real_itinerary(map, hi, l, it_hi, ehi)) return std::nullopt;
    if (it_lo != it0 || it_hi != it0) return std::nullopt;
    const double glo = elo - lo;
    const double ghi = ehi - hi;
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo < 0.0) == (ghi < 0.0)) continue;
    double a = lo, b = hi, ga = glo;
    for (int k = 0; k < 200; ++k) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      double em = 0.0;
      std::vector<std::size_t> itm;
      if (!real_itinerary(map, m, l, itm, em)) return std::nullopt;
      const double gm = em - m;
      if (gm == 0.0) return m;
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    return std::abs(ga) <= std::abs(ghi) ? a : b;
  }
  return std::nullopt;
}

// Returns the smallest l <= max_period at which the orbit of s comes back to s.
std::optional<PeriodicLikeRecord> exact_return(const PiecewiseMap& map, LateralState s, std::size_t max_period,
                                               double tol_p, double* closest, std::size_t* closest_period) {
  LateralState cur = s;
  double mult = 1.0;
  std::vector<LateralState> cycle;
  for (std::size_t l = 1; l <= max_period; ++l) {
    cycle.push_back(cur);
    const Step st = step_with_derivative(map, cur);
    mult *= std::abs(st.derivative);
    cur = st.next;
    if (cur.side != s.side) continue;
    const double d = std::abs(cur.coord - s.coord);
    if (d < tol_p) return PeriodicLikeRecord{s, l, mult, classify_multiplier(mult), cycle};
    if (closest && d < *closest) {
      *closest = d;
      *closest_period = l;
    }
  }
  return std::nullopt;
}

}  // namespace

LateralState lateral_step(const PiecewiseMap& map, LateralState s) { return step_with_derivative(map, s).next; }

LateralOrbit lateral_orbit(const PiecewiseMap& map, LateralState start, std::size_t n) {
  LateralOrbit o;
  o.states.reserve(n + 1);
  o.branches.reserve(n + 1);
  o.states.push_back(start);
  LateralState cur = start;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const Step st = step_with_derivative(map, cur);
      o.branches.push_back(st.branch);
      cur = st.next;
      o.states.push_back(cur);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_side) throw;
      o.truncated = true;
      break;
    }
  }
  if (o.branches.size() < o.states.size()) {
    const auto b = map.branch_index(cur.coord, cur.side);
    const bool valid = !((cur.side == Side::minus && cur.coord == 0.0) || (cur.side == Side::plus && cur.coord == 1.0));
    o.branches.push_back(b && valid ? *b : LateralOrbit::npos);
  }
  return o;
}

LateralState lateral_iterate(const PiecewiseMap& map, LateralState s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) s = step_with_derivative(map, s).next;
  return s;
}

Stability classify_multiplier(double m) noexcept {
  if (m < 1.0 - kIndifferenceBand) return Stability::attracting;
  if (std::abs(m - 1.0) <= kIndifferenceBand) return Stability::indifferent;
  return Stability::repelling;
}

double cycle_multiplier(const PiecewiseMap& map, LateralState s, std::size_t period) {
  double m = 1.0;
  for (std::size_t i = 0; i < period; ++i) {
    const Step st = step_with_derivative(map, s);
    m *= std::abs(st.derivative);
    s = st.next;
  }
  return m;
}

PeriodicSearch detect_periodic_like(const PiecewiseMap& map, LateralState s, std::size_t max_period, double tol_p) {
  if (max_period < 1) throw Error(ErrorKind::bad_param, "max_period must be >= 1");
  if (!(tol_p > 0.0)) throw Error(ErrorKind::bad_param, "tol_p must be > 0");
  PeriodicSearch out;
  try {
    double closest = std::numeric_limits<double>::infinity();
    std::size_t closest_period = 0;
    if (auto r = exact_return(map, s, max_period, tol_p, &closest, &closest_period)) {
      out.record = std::move(r);
      return out;
    }
    if (closest >= kCaptureWindow || map.is_exceptional(s.coord)) return out;
    // Near miss: pull the seed onto the cycle, then re-run the exact test.
    for (std::size_t l = 1; l <= max_period; ++l) {
      const auto x = refine_cycle(map, s.coord, l);
      if (!x) continue;
      const LateralState t{*x, s.side};
      if (auto r = exact_return(map, t, l, tol_p, nullptr, nullptr)) {
        out.record = std::move(r);
        return out;
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_side) throw;
    out.degenerate = true;
  }
  return out;
}

std::uint32_t cell_count_for(double resolution) {
  if (!(resolution > 0.0) || resolution > 1.0) throw Error(ErrorKind::bad_param, "resolution must be in (0,1]");
  const double n = 1.0 / resolution;
  const double r = std::round(n);
  const double count = std::abs(n - r) < 1e-9 * n ? r : std::ceil(n);
  if (count > 1e8) throw Error(ErrorKind::bad_param, "resolution too fine");
  return static_cast<std::uint32_t>(count);
}

std::uint32_t cell_of(double x, double resolution, std::uint32_t count) noexcept {
  const double q = x / resolution;
  if (!(q > 0.0)) return 0;
  const auto c = static_cast<std::uint32_t>(std::min(q, static_cast<double>(count - 1)));
  return c;
}

OmegaCover omega_estimate(const PiecewiseMap& map, double x0, std::size_t burn_in, std::size_t tail,
                          double resolution) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw Error(ErrorKind::out_of_domain, "x0 outside [0,1]");
  if (tail < 1) throw Error(ErrorKind::bad_param, "tail must be >= 1");
  OmegaCover cov;
  cov.x0 = x0;
  cov.resolution = resolution;
  cov.cell_count = cell_count_for(resolution);
  const auto& ex = map.exceptional_set();

  double x = x0;
  std::size_t done = 0;
  for (; done < burn_in; ++done) {
    const auto y = map.try_eval(x);
    if (!y) break;
    x = *y;
  }
  if (done < burn_in) {
    cov.partial = true;
    cov.steps = done;
    return cov;
  }

  constexpr std::size_t kRing = 2 * kMaxConvergencePeriod;
  std::vector<double> ring(kRing, 0.0);
  std::vector<std::uint8_t> seen(cov.cell_count, 0);
  double min_d = 1.0;
  std::size_t t = 0;
  for (; t < tail; ++t) {
    seen[cell_of(x, resolution, cov.cell_count)] = 1;
    ring[t % kRing] = x;
    for (double c : ex) min_d = std::min(min_d, std::abs(x - c));
    if (t + 1 == tail) break;
    const auto y = map.try_eval(x);
    if (!y) {
      cov.partial = true;
      break;
    }
    x = *y;
  }
  const std::size_t visited = t + 1;
  cov.steps = burn_in + visited;
  cov.min_exceptional_distance = min_d;
  for (std::uint32_t c = 0; c < cov.cell_count; ++c)
    if (seen[c]) cov.cells.push_back(c);

  if (!cov.partial) {
    auto at = [&](std::size_t back) { return ring[(t + kRing - back) % kRing]; };
    for (std::size_t p = 1; p <= kMaxConvergencePeriod && 2 * p <= visited; ++p) {
      bool ok = true;
      for (std::size_t i = 0; i < p && ok; ++i) ok = std::abs(at(i) - at(i + p)) < kConvergenceTolerance;
      if (ok) {
        cov.period = p;
        for (std::size_t i = p; i-- > 0;) cov.cycle.push_back(at(i));
        break;
      }
    }
  }
  return cov;
}

std::vector<std::vector<std::uint32_t>> lateral_closure_cells(const PiecewiseMap& map, LateralState s,
                                                              std::size_t n, std::size_t skip,
                                                              const std::vector<double>& resolutions) {
  std::vector<std::uint32_t> counts;
  std::vector<std::vector<std::uint8_t>> seen;
  for (double r : resolutions) {
    counts.push_back(cell_count_for(r));
    seen.emplace_back(counts.back(), 0);
  }
  LateralState cur = s;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i >= skip)
      for (std::size_t k = 0; k < resolutions.size(); ++k) seen[k][cell_of(cur.coord, resolutions[k], counts[k])] = 1;
    if (i == n) break;
    try {
      cur = step_with_derivative(map, cur).next;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_side) throw;
      break;
    }
  }
  std::vector<std::vector<std::uint32_t>> out(resolutions.size());
  for (std::size_t k = 0; k < resolutions.size(); ++k)
    for (std::uint32_t c = 0; c < counts[k]; ++c)
      if (seen[k][c]) out[k].push_back(c);
  return out;
}

GapMapInfo gap_map_info(const PiecewiseMap& map, double c) {
  GapMapInfo g;
  g.c = c;
  if (!map.is_exceptional(c)) {
    g.reason = "c is not an exceptional point of the map";
    return g;
  }
  Step left, right;
  try {
    left = step_with_derivative(map, {c, Side::minus});
    right = step_with_derivative(map, {c, Side::plus});
  } catch (const Error& e) {
    g.reason = e.what();
    return g;
  }
  g.v1 = left.next.coord;
  g.v0 = right.next.coord;
  if (!(g.v0 < c && c < g.v1)) {
    g.reason = "critical values do not straddle c";
    return g;
  }
  for (double e : map.exceptional_set()) {
    if (e != c && e > g.v0 && e < g.v1) {
      g.reason = "another exceptional point lies in [v0, v1]";
      return g;
    }
  }
  const auto lb = map.branch_index(c, Side::minus);
  const auto rb = map.branch_index(c, Side::plus);
  constexpr int kSpots = 200;
  for (int i = 0; i <= kSpots; ++i) {
    const double t = static_cast<double>(i) / kSpots;
    const double xl = g.v0 + (c - g.v0) * t;
    const double xr = c + (g.v1 - c) * t;
    const Form& fl = map.branches()[*lb].form;
    const Form& fr = map.branches()[*rb].form;
    if ((i < kSpots && fl.derivative(xl, 1) < 0.0) || (i > 0 && fr.derivative(xr, 1) < 0.0)) {
      g.reason = "a branch is not increasing on [v0, v1]";
      return g;
    }
  }
  if (left.next.side != Side::minus || right.next.side != Side::plus) {
    g.reason = "a branch is not increasing at c";
    return g;
  }
  const double fv0 = map.branches()[*lb].form.value(g.v0);
  const double fv1 = map.branches()[*rb].form.value(g.v1);
  if (fv0 < g.v0 || fv1 > g.v1) {
    g.reason = "[v0, v1] is not mapped into itself";
    return g;
  }
  g.image_measure = (g.v1 - fv0) + (fv1 - g.v0);
  g.injective = fv1 <= fv0;
  if (!g.injective) {
    g.reason = "branch images overlap: f(v1) > f(v0)";
    return g;
  }
  if (!(g.image_measure < g.v1 - g.v0)) {
    g.reason = "image measure is not smaller than |[v0, v1]|";
    return g;
  }
  g.is_gap_map = true;
  return g;
}

double rotation_number(const PiecewiseMap& map, double c, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::bad_param, "n must be >= 1");
  const GapMapInfo g = gap_map_info(map, c);
  if (!g.injective) throw Error(ErrorKind::not_a_gap_map, g.reason);
  LateralState s = lateral_step(map, {c, Side::plus});
  std::size_t right = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (s.coord > c || (s.coord == c && s.side == Side::plus)) ++right;
    if (j + 1 < n) s = lateral_step(map, s);
  }
  return static_cast<double>(right) / static_cast<double>(n);
}

}  // namespace ivmap
