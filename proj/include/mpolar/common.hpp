// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_COMMON_HPP
#define MPOLAR_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace mpolar {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Real kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the operation's declared domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Incompatible grid/field shapes.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// A convergence/accuracy guard tripped (e.g. quadrature doubling test).
class AccuracyError : public Error {
 public:
  explicit AccuracyError(const std::string& msg) : Error(msg) {}
};

// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& msg, Real t) : Error(msg), time(t) {}
  Real time;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace mpolar

#endif  // MPOLAR_COMMON_HPP
