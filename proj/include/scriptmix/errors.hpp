#pragma once

#include <stdexcept>
#include <string>

namespace scriptmix {

// Error taxonomy mirrors the CLI exit codes: config 1, data 2, training 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scriptmix
