// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef IVMAP_ERRORS_HPP
#define IVMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ivmap {

enum class ErrorKind {
  exceptional_point,
  out_of_domain,
  critical_point,
  degenerate_side,
  partial_orbit,
  not_a_gap_map,
  subdivision_overflow,
  hypothesis_failed,
  unbounded_derivative,
  degenerate_scale,
  bad_param,
  search_exhausted,
  precondition_failed,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` carries the contract error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ivmap

#endif  // IVMAP_ERRORS_HPP
