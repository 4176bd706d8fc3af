#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgnn {

// Iterative solver ran out of budget or failed its post-condition checks.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A NaN or Inf appeared in activations (layer >= 0) or in the loss (epoch >= 0).
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, int layer, int epoch = -1)
      : std::runtime_error(what), layer_(layer), epoch_(epoch) {}
  int layer() const noexcept { return layer_; }
  int epoch() const noexcept { return epoch_; }

 private:
  int layer_;
  int epoch_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        file_(file),
        line_(line) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace sgnn
