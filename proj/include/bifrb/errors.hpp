#pragma once

#include <stdexcept>

namespace bifrb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finder was not handed a bracketing interval.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

// Neither tolerance was met within the iteration budget.
class MaxIterExceeded : public Error {
 public:
  using Error::Error;
};

// Sparsity rank outside [1, dim].
class InvalidRank : public Error {
 public:
  using Error::Error;
};

// Parameter outside its admissible range.
class InvalidBounds : public Error {
 public:
  using Error::Error;
};

// Certificate hypotheses (sigma > 2, (L_h - sigma) * sigma > 1/4) fail.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

// Inertial bound alpha_bar outside [0, 1/2).
class InvalidAlpha : public Error {
 public:
  using Error::Error;
};

// An iterate left the representable range; the stepsize is invalid.
class NonFiniteIterate : public Error {
 public:
  using Error::Error;
};

// Random matrix draw was rank deficient beyond the retry budget.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace bifrb
