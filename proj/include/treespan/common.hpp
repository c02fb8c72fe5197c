#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace treespan {

// Tolerances shared by the engines, the oracles and the test suites.
// They are part of the library contract, not test-local knobs.
inline constexpr double kProbTol = 1e-9;   // posteriors, CPT row sums, expected utilities
inline constexpr double kMpeTol = 1e-12;   // most-probable-explanation values

// Exhaustive-search guards.  The exact cutset search budget counts vertices of
// the 2-core (degree-<=1 vertices can never be in a minimal cutset); the
// oracle budget counts full assignment-space size.
inline constexpr int kDefaultCutsetBudget = 25;
inline constexpr std::int64_t kDefaultOracleBudget = std::int64_t{1} << 24;

// Base class for all errors raised by the library.  The CLI maps these to
// exit code 1 unless a more specific code applies.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed model file.  line/col are 1-based; col may be 0 when only the
// line is known.
struct ParseError : Error {
  ParseError(std::string msg, int line_, int col_ = 0)
      : Error(std::move(msg)), line(line_), col(col_) {}
  int line;
  int col;
};

// Structural misuse of the library (bad variable id, non-chordal input where
// a chordal graph is required, cutset whose residual graph still has a
// cycle, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

// Deterministic float rendering used for every user-visible number.  %.12g is
// stable across runs and platforms we target and keeps files diff-friendly.
std::string fmt_double(double v);

}  // namespace treespan
