#pragma once

#include <stdexcept>
#include <string>

namespace kstar {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: unparseable CSV cells, ragged rows, empty files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// fit() exceeded FitConfig::max_cycles.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace kstar
