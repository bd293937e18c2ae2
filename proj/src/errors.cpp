// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivmap/errors.hpp"

namespace ivmap {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::exceptional_point: return "ExceptionalPoint";
    case ErrorKind::out_of_domain: return "OutOfDomain";
    case ErrorKind::critical_point: return "CriticalPoint";
    case ErrorKind::degenerate_side: return "DegenerateSide";
    case ErrorKind::partial_orbit: return "PartialOrbit";
    case ErrorKind::not_a_gap_map: return "NotAGapMap";
    case ErrorKind::subdivision_overflow: return "SubdivisionOverflow";
    case ErrorKind::hypothesis_failed: return "HypothesisFailed";
    case ErrorKind::unbounded_derivative: return "UnboundedDerivative";
    case ErrorKind::degenerate_scale: return "DegenerateScale";
    case ErrorKind::bad_param: return "BadParam";
    case ErrorKind::search_exhausted: return "SearchExhausted";
    case ErrorKind::precondition_failed: return "PreconditionFailed";
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace ivmap
