/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fsi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// Raised when a factorization meets a zero pivot. `pivot` is the column of
// the original (unpermuted) matrix at which elimination broke down.
class SingularMatrix : public SolverError {
 public:
  SingularMatrix(const std::string& what, std::int64_t pivot)
      : SolverError(what), pivot_(pivot) {}
  std::int64_t pivot() const noexcept { return pivot_; }

 private:
  std::int64_t pivot_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsi
