// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/branch.hpp"

#include <algorithm>
#include <cmath>

namespace ivmap {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int sgn(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// t^e with small integer exponents done by multiplication.
double power(double t, double e) noexcept {
  if (e == std::floor(e) && e >= 0.0 && e <= 8.0) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(e); ++i) r *= t;
    return r;
  }
  return std::pow(t, e);
}

// coef * t^e, with a vanishing coefficient winning over an infinite power.
double term(double coef, double t, double e) noexcept { return coef == 0.0 ? 0.0 : coef * power(t, e); }

double pivot_distance(const PowerLaw& p, double x) noexcept {
  const double t = p.side == PivotSide::right ? x - p.pivot : p.pivot - x;
  return t > 0.0 ? t : 0.0;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

double horner(const std::vector<double>& c, double x) noexcept {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

std::size_t degree(const std::vector<double>& c) noexcept {
  std::size_t d = c.size();
  while (d > 0 && c[d - 1] == 0.0) --d;
  return d == 0 ? 0 : d - 1;
}

}  // namespace

Form Form::scaled(Form inner, double scale, double offset, double anchor) {
  return Form(Scaled{std::make_shared<const Form>(std::move(inner)), scale, offset, anchor});
}

double Form::value(double x) const noexcept {
  return std::visit(
      overloaded{
          [x](const Affine& f) { return f.a * x + f.b; },
          [x](const Polynomial& f) { return horner(f.coeffs, x); },
          [x](const PowerLaw& f) { return f.base + term(f.k, pivot_distance(f, x), f.rho); },
          [x](const Scaled& f) { return f.offset + f.scale * (f.inner->value(x) - f.anchor); },
      },
      v_);
}

Jet Form::jet(double x) const noexcept {
  return std::visit(
      overloaded{
          [x](const Affine& f) { return Jet{f.a * x + f.b, f.a, 0.0, 0.0}; },
          [x](const Polynomial& f) {
            // Simultaneous Horner for p, p', p''/2, p'''/6.
            double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
            for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
              p3 = p3 * x + p2;
              p2 = p2 * x + p1;
              p1 = p1 * x + p0;
              p0 = p0 * x + *it;
            }
            return Jet{p0, p1, 2.0 * p2, 6.0 * p3};
          },
          [x](const PowerLaw& f) {
            const double t = pivot_distance(f, x);
            const double s = f.side == PivotSide::right ? 1.0 : -1.0;
            const double r = f.rho;
            return Jet{f.base + term(f.k, t, r), s * term(f.k * r, t, r - 1.0),
                       term(f.k * r * (r - 1.0), t, r - 2.0), s * term(f.k * r * (r - 1.0) * (r - 2.0), t, r - 3.0)};
          },
          [x](const Scaled& f) {
            Jet j = f.inner->jet(x);
            return Jet{f.offset + f.scale * (j[0] - f.anchor), f.scale * j[1], f.scale * j[2], f.scale * j[3]};
          },
      },
      v_);
}

int Form::direction_sign(double x, bool from_left) const noexcept {
  return std::visit(
      overloaded{
          [](const Affine& f) { return sgn(f.a); },
          [x, from_left](const Polynomial& f) {
            // f'(x -/+ h) ~ f^(k)(x) (-/+ h)^(k-1) / (k-1)! for the first non-zero f^(k).
            std::vector<double> d = differentiate(f.coeffs);
            for (int k = 1; !d.empty(); ++k) {
              const int s = sgn(horner(d, x));
              if (s != 0) return (from_left && k % 2 == 0) ? -s : s;
              d = differentiate(d);
            }
            return 0;
          },
          [](const PowerLaw& f) { return f.rho > 0.0 ? sgn(f.k) * (f.side == PivotSide::right ? 1 : -1) : 0; },
          [x, from_left](const Scaled& f) { return sgn(f.scale) * f.inner->direction_sign(x, from_left); },
      },
      v_);
}

std::optional<double> Form::sup_abs_derivative(double lo, double hi, bool& analytic) const {
  return std::visit(
      overloaded{
          [](const Affine& f) -> std::optional<double> { return std::abs(f.a); },
          [lo, hi, &analytic](const Polynomial& f) -> std::optional<double> {
            const std::vector<double> d1 = differentiate(f.coeffs);
            if (d1.empty()) return 0.0;
            double best = std::max(std::abs(horner(d1, lo)), std::abs(horner(d1, hi)));
            const std::size_t deg = degree(f.coeffs);
            if (deg <= 2) return best;
            if (deg == 3) {
              // |p'| is extremal at the endpoints or where p'' = 0.
              const std::vector<double> d2 = differentiate(d1);
              if (d2.size() >= 2 && d2[1] != 0.0) {
                const double xs = -d2[0] / d2[1];
                if (xs > lo && xs < hi) best = std::max(best, std::abs(horner(d1, xs)));
              }
              return best;
            }
            analytic = false;
            constexpr int kGrid = 20000;
            for (int i = 1; i < kGrid; ++i) {
              const double x = lo + (hi - lo) * static_cast<double>(i) / kGrid;
              best = std::max(best, std::abs(horner(d1, x)));
            }
            return best;
          },
          [lo, hi](const PowerLaw& f) -> std::optional<double> {
            const double t0 = pivot_distance(f, lo);
            const double t1 = pivot_distance(f, hi);
            const double tmin = std::min(t0, t1);
            const double tmax = std::max(t0, t1);
            if (f.k == 0.0) return 0.0;
            if (f.rho < 1.0 && tmin == 0.0) return std::nullopt;
            const double t = f.rho >= 1.0 ? tmax : tmin;
            return std::abs(f.k) * f.rho * power(t, f.rho - 1.0);
          },
          [lo, hi, &analytic](const Scaled& f) -> std::optional<double> {
            const auto inner = f.inner->sup_abs_derivative(lo, hi, analytic);
            if (!inner) return std::nullopt;
            return std::abs(f.scale) * *inner;
          },
      },
      v_);
}

}  // namespace ivmap
