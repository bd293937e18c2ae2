// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_BRANCH_HPP
#define IVMAP_BRANCH_HPP

#include <array>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace ivmap {

enum class Orientation { increasing, decreasing };

// Which side of the pivot the branch domain lies on.
enum class PivotSide { left, right };

/// x -> a*x + b
struct Affine {
  double a = 0.0;
  double b = 0.0;
};

/// Coefficients in ascending powers of x.
struct Polynomial {
  std::vector<double> coeffs;
};

/// x -> base + k*|x - pivot|^rho, defined on one side of the pivot.
struct PowerLaw {
  double base = 0.0;
  double k = 0.0;
  double rho = 1.0;
  double pivot = 0.0;
  PivotSide side = PivotSide::right;
};

class Form;

/// x -> offset + scale*(inner(x) - anchor)
struct Scaled {
  std::shared_ptr<const Form> inner;
  double scale = 1.0;
  double offset = 0.0;
  double anchor = 0.0;
};

/// Value and first three derivatives at a point.
using Jet = std::array<double, 4>;

/// Closed algebra of branch forms with exact derivatives up to order 3.
class Form {
 public:
  using Variant = std::variant<Affine, Polynomial, PowerLaw, Scaled>;

  Form(Affine f) : v_(std::move(f)) {}
  Form(Polynomial f) : v_(std::move(f)) {}
  Form(PowerLaw f) : v_(std::move(f)) {}
  Form(Scaled f) : v_(std::move(f)) {}

  static Form scaled(Form inner, double scale, double offset, double anchor);

  const Variant& get() const noexcept { return v_; }

  double value(double x) const noexcept;
  Jet jet(double x) const noexcept;
  double derivative(double x, int order) const noexcept { return jet(x)[static_cast<std::size_t>(order)]; }

  /// Sign (+1, -1, or 0 when flat) of f' on a one-sided neighbourhood of x.
  /// Exact for every form: uses the first non-vanishing Taylor term, or the
  /// closed-form sign for power laws.
  int direction_sign(double x, bool from_left) const noexcept;

  /// sup |f'| over [lo, hi]; nullopt when the sup is infinite. `analytic` is
  /// cleared if a grid fallback was needed.
  std::optional<double> sup_abs_derivative(double lo, double hi, bool& analytic) const;

 private:
  Variant v_;
};

struct Branch {
  double lo = 0.0;
  double hi = 1.0;
  Form form;
  Orientation orientation = Orientation::increasing;
};

}  // namespace ivmap

#endif  // IVMAP_BRANCH_HPP
