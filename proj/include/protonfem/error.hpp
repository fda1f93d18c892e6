#pragma once

#include <stdexcept>
#include <string>

namespace protonfem {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a mathematical function (E <= 0, g outside [0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent scenario / coefficient configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Linear or variational-inequality solver failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Point location failed.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Operation not supported for this mesh / configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace protonfem
