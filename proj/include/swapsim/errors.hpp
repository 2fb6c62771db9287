#pragma once

#include <stdexcept>
#include <string>

namespace swapsim {

// Raised when the physical model cannot produce a meaningful answer
// (unphysical covariance, ill-conditioned projection, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The configured network has (numerically) zero heralding probability.
class NeverHeraldsError : public ModelError {
 public:
  using ModelError::ModelError;
};

// A derived probability left [0, 1] by more than the allowed slack.
class PhysicalityError : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace swapsim
