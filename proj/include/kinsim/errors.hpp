#pragma once

#include <stdexcept>
#include <string>

namespace kinsim {

// Base of every failure the library reports. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// The population did not reach the target size within the retry budget.
class GrowthFailure : public Error {
 public:
  GrowthFailure(const std::string& what, long run_index = -1)
      : Error(what), run_index_(run_index) {}
  long run_index() const { return run_index_; }

 private:
  long run_index_;
};

class InsufficientPopulation : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptyBand : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ManifestMissing : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  SchemaMismatch(const std::string& file, const std::string& detail)
      : Error(file + ": " + detail), file_(file) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

}  // namespace kinsim
