#pragma once

#include <stdexcept>

namespace rmode {

// Malformed or inconsistent input documents (measurement CSV, transmitter
// config, truth files, serialized models).  The CLI maps this to exit 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The data cannot pin down the model parameters (e.g. a transmitter was
// observed at a single SNR level only).  The CLI maps this to exit 3.
class IdentifiabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structurally valid model was asked something it cannot answer: unknown
// transmitter id, non-positive SNR, or an SNR handed over in the wrong
// convention.  The CLI maps this to exit 4.
class ModelUseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmode
