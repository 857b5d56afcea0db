#pragma once

#include <stdexcept>
#include <string>

namespace sqn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class NotSymmetricError : public Error {
public:
  using Error::Error;
};

class NotSpdError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

// Precondition on a user-supplied parameter failed.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Optimizer cannot run on the given problem (e.g. SAG on an infinite-support problem).
class IncompatibleError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace sqn
