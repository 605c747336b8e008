#pragma once

#include <stdexcept>
#include <string>

namespace tfdash {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario / parameter validation failures. The message names the offending field.
class ConfigError : public SimError {
 public:
  using SimError::SimError;
};

// Malformed input files (scenario configs, capacity traces).
class ParseError : public SimError {
 public:
  using SimError::SimError;
};

// Throughput samples that cannot exist (non-positive duration or rate).
class InvalidMeasurementError : public SimError {
 public:
  using SimError::SimError;
};

// A flow was asked to make progress with zero bandwidth share.
class StalledDownloadError : public SimError {
 public:
  using SimError::SimError;
};

// The simulation cannot complete the requested work within its horizon.
class HorizonError : public SimError {
 public:
  using SimError::SimError;
};

}  // namespace tfdash
