#pragma once

#include <stdexcept>
#include <string>

namespace packcert {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByIntervalContainingZero : public Error {
 public:
  DivisionByIntervalContainingZero() : Error("division by an interval containing zero") {}
};

class EmptyDomainIntersection : public Error {
 public:
  explicit EmptyDomainIntersection(const std::string& fn)
      : Error("argument of " + fn + " lies outside its domain") {}
};

class NoSignChange : public Error {
 public:
  NoSignChange() : Error("polynomial signs at the bracket endpoints are not certified opposite") {}
};

class InfeasibleBox : public Error {
 public:
  using Error::Error;
  InfeasibleBox() : Error("edge lengths admit no triangle") {}
};

class NoRealSolution : public Error {
 public:
  NoRealSolution() : Error("no circle is tangent to the three circles of the triangle") {}
};

class IndeterminateRoot : public Error {
 public:
  IndeterminateRoot() : Error("support circle root selection cannot be certified at this width") {}
};

class InconsistentSystem : public Error {
 public:
  using Error::Error;
};

class IndeterminateFloor : public Error {
 public:
  IndeterminateFloor() : Error("floor of an enclosure straddling an integer") {}
};

class FlatCoronaUnresolved : public Error {
 public:
  using Error::Error;
};

class ThresholdConflict : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace packcert
