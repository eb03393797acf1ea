#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tentropy {

// Base of every error raised by the library. Callers that only care about
// "the input was rejected" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
 public:
  OutOfRange(std::size_t position, long long value)
      : Error("alpha[" + std::to_string(position) + "] = " + std::to_string(value) + " is out of range"),
        position(position), value(value) {}
  std::size_t position;
  long long value;
};

class NotACycle : public Error {
 public:
  using Error::Error;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class BadCoefficients : public Error {
 public:
  using Error::Error;
};

class NegativeWeight : public Error {
 public:
  NegativeWeight(std::size_t point, double value)
      : Error("weight at point " + std::to_string(point) + " is negative (" + std::to_string(value) + ")"),
        point(point), value(value) {}
  std::size_t point;
  double value;
};

class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t row, std::size_t col, double value)
      : Error("matrix entry (" + std::to_string(row) + "," + std::to_string(col) + ") is negative (" +
              std::to_string(value) + ")"),
        row(row), col(col), value(value) {}
  std::size_t row, col;
  double value;
};

// The homological identity confines a transfer operator's matrix to the graph
// of alpha: B[x][y] may only be nonzero when alpha(y) == x.
class SupportViolation : public Error {
 public:
  SupportViolation(std::size_t row, std::size_t col, double value)
      : Error("matrix entry (" + std::to_string(row) + "," + std::to_string(col) + ") = " + std::to_string(value) +
              " lies off the graph of alpha"),
        row(row), col(col), value(value) {}
  std::size_t row, col;
  double value;
};

class NonPositiveMass : public Error {
 public:
  NonPositiveMass(std::size_t point, double value)
      : Error("mass at point " + std::to_string(point) + " is not positive (" + std::to_string(value) + ")"),
        point(point), value(value) {}
  std::size_t point;
  double value;
};

class NotAPartition : public Error {
 public:
  NotAPartition(std::size_t point, double sum)
      : Error("not a partition of unity: elements sum to " + std::to_string(sum) + " at point " +
              std::to_string(point)),
        point(point), sum(sum) {}
  std::size_t point;
  double sum;
};

class NotInvariant : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace tentropy
