#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qmas {

// Base for all library errors. `code()` is a stable machine-readable
// identifier; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class DivisionByZero : public Error {
public:
  explicit DivisionByZero(const std::string& what = "division by zero in GF(q)")
      : Error("DivisionByZero", what) {}
};

class ModulusMismatch : public Error {
public:
  explicit ModulusMismatch(const std::string& what = "field elements have different moduli")
      : Error("ModulusMismatch", what) {}
};

class IndexOutOfRange : public Error {
public:
  explicit IndexOutOfRange(const std::string& what = "coordinate index out of range")
      : Error("IndexOutOfRange", what) {}
};

class NotNested : public Error {
public:
  explicit NotNested(const std::string& what = "row space of G2 is not contained in row space of G1")
      : Error("NotNested", what) {}
};

class NotQualified : public Error {
public:
  explicit NotQualified(const std::string& what = "coordinate set does not satisfy the qualified criterion")
      : Error("NotQualified", what) {}
};

class InconsistentShares : public Error {
public:
  explicit InconsistentShares(const std::string& what = "observed shares match no codeword")
      : Error("InconsistentShares", what) {}
};

class NotMonotone : public Error {
public:
  explicit NotMonotone(const std::string& what = "qualified family is not monotone")
      : Error("NotMonotone", what) {}
};

// Carries the witness subset (1-based participants) violating self-duality.
class NotSelfDual : public Error {
public:
  NotSelfDual(std::vector<unsigned> witness, const std::string& what)
      : Error("NotSelfDual", what), witness_(std::move(witness)) {}
  const std::vector<unsigned>& witness() const noexcept { return witness_; }

private:
  std::vector<unsigned> witness_;
};

class Infeasible : public Error {
public:
  explicit Infeasible(const std::string& what = "integer program has no feasible solution")
      : Error("Infeasible", what) {}
};

class ParameterViolation : public Error {
public:
  explicit ParameterViolation(const std::string& what = "invalid scheme parameters")
      : Error("ParameterViolation", what) {}
};

class UncoveredCoordinate : public Error {
public:
  explicit UncoveredCoordinate(const std::string& what = "a codeword coordinate belongs to no participant")
      : Error("UncoveredCoordinate", what) {}
};

class DimensionCap : public Error {
public:
  explicit DimensionCap(const std::string& what = "state dimension exceeds the amplitude cap")
      : Error("DimensionCap", what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what = "malformed input")
      : Error("ParseError", what) {}
};

} // namespace qmas
