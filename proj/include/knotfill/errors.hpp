#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace knotfill {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownGenerator : public Error {
 public:
  explicit UnknownGenerator(const std::string& name)
      : Error("unknown generator '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DuplicateGenerator : public Error {
 public:
  explicit DuplicateGenerator(const std::string& name)
      : Error("duplicate generator '" + name + "'") {}
};

// bmt_word hypothesis uv != vu fails.
class CommutingPair : public Error {
 public:
  CommutingPair() : Error("u and v commute in the free group") {}
};

class InvalidN : public Error {
 public:
  using Error::Error;
};

class InvalidSlope : public Error {
 public:
  using Error::Error;
};

class InfiniteSlope : public Error {
 public:
  InfiniteSlope() : Error("operation requires a finite slope") {}
};

class InvalidTorusParams : public Error {
 public:
  using Error::Error;
};

class InvalidCableParams : public Error {
 public:
  using Error::Error;
};

class InvalidPeripheralSystem : public Error {
 public:
  using Error::Error;
};

class DiscriminantMismatch : public Error {
 public:
  DiscriminantMismatch(std::int64_t a, std::int64_t b)
      : Error("quadratic field mismatch: sqrt(" + std::to_string(a) + ") vs sqrt(" +
              std::to_string(b) + ")") {}
};

class InvalidDiscriminant : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class NotUnimodular : public Error {
 public:
  NotUnimodular() : Error("matrix determinant is not 1") {}
};

class InvalidRepresentation : public Error {
 public:
  using Error::Error;
};

class DegenerateZeta : public Error {
 public:
  DegenerateZeta() : Error("zeta^2 = 1: rho(g) is the identity") {}
};

class ZeroZeta : public Error {
 public:
  ZeroZeta() : Error("zeta = 0: rho(g) is the identity") {}
};

class InvalidTarget : public Error {
 public:
  using Error::Error;
};

// Search ran out of its assignment budget. Carries how far it got.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t visited, std::uint64_t found)
      : Error("budget exceeded after " + std::to_string(visited) +
              " partial assignments (" + std::to_string(found) + " homomorphisms found)"),
        visited_(visited),
        found_(found) {}
  std::uint64_t visited() const noexcept { return visited_; }
  std::uint64_t found() const noexcept { return found_; }

 private:
  std::uint64_t visited_;
  std::uint64_t found_;
};

class UnknownSlopeInRule : public Error {
 public:
  explicit UnknownSlopeInRule(const std::string& slope)
      : Error("inclusion rule references unscanned slope " + slope) {}
};

}  // namespace knotfill
