#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace alq {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution or function was called outside its parameter domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Model or prior configuration that cannot produce a proper posterior draw.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files or datasets.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::optional<std::int64_t> line = std::nullopt)
      : Error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

  std::optional<std::int64_t> line() const { return line_; }

 private:
  std::optional<std::int64_t> line_;
};

// Unknown parameter selector in a trace export.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Floating-point failure: a factorization broke down, a draw underflowed,
// or a value overflowed.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::optional<std::int64_t> pivot = std::nullopt)
      : Error(what), pivot_(pivot) {}

  std::optional<std::int64_t> pivot() const { return pivot_; }

 private:
  std::optional<std::int64_t> pivot_;
};

// A Gibbs chain aborted. Carries where it stopped.
class ChainError : public NumericError {
 public:
  ChainError(const std::string& cause, int jitter_index, std::int64_t iteration)
      : NumericError("chain " + std::to_string(jitter_index) + " failed at iteration " +
                     std::to_string(iteration) + ": " + cause),
        jitter_index_(jitter_index),
        iteration_(iteration) {}

  int jitter_index() const { return jitter_index_; }
  std::int64_t iteration() const { return iteration_; }

 private:
  int jitter_index_;
  std::int64_t iteration_;
};

}  // namespace alq
