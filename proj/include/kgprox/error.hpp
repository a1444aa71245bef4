#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kgprox {

// Exit-code taxonomy shared with the CLI:
//   0 ok, 1 I/O, 2 input/schema, 3 degenerate statistics, 4 empty experiment.
enum class ErrorCode : int {
  io = 1,
  input = 2,
  degenerate = 3,
  empty = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

private:
  ErrorCode code_;
};

#define KGPROX_DEFINE_ERROR(Name, Code)                                       \
  class Name : public Error {                                                 \
  public:                                                                     \
    explicit Name(std::string msg) : Error(Code, std::move(msg)) {}           \
  }

KGPROX_DEFINE_ERROR(IoError, ErrorCode::io);

KGPROX_DEFINE_ERROR(SchemaViolation, ErrorCode::input);
KGPROX_DEFINE_ERROR(UnknownType, ErrorCode::input);
KGPROX_DEFINE_ERROR(EmptyName, ErrorCode::input);
KGPROX_DEFINE_ERROR(UnknownNode, ErrorCode::input);
KGPROX_DEFINE_ERROR(MaskedNode, ErrorCode::input);
KGPROX_DEFINE_ERROR(IllegalSchema, ErrorCode::input);
KGPROX_DEFINE_ERROR(DimensionMismatch, ErrorCode::input);
KGPROX_DEFINE_ERROR(ZeroVector, ErrorCode::input);
KGPROX_DEFINE_ERROR(MissingEmbedding, ErrorCode::input);
KGPROX_DEFINE_ERROR(UnknownRow, ErrorCode::input);
KGPROX_DEFINE_ERROR(ZeroMarginal, ErrorCode::input);
KGPROX_DEFINE_ERROR(EmptyRows, ErrorCode::input);
KGPROX_DEFINE_ERROR(LengthMismatch, ErrorCode::input);
KGPROX_DEFINE_ERROR(ConstantInput, ErrorCode::input);
KGPROX_DEFINE_ERROR(InvalidConfig, ErrorCode::input);
KGPROX_DEFINE_ERROR(UnreachablePair, ErrorCode::input);
KGPROX_DEFINE_ERROR(UnreachableSource, ErrorCode::input);

KGPROX_DEFINE_ERROR(SingletonSet, ErrorCode::degenerate);
KGPROX_DEFINE_ERROR(InsufficientPopulation, ErrorCode::degenerate);

KGPROX_DEFINE_ERROR(EmptyExperiment, ErrorCode::empty);
KGPROX_DEFINE_ERROR(MissingPredicate, ErrorCode::empty);

#undef KGPROX_DEFINE_ERROR

// Sigma of the null distribution is zero while the observed value differs
// from the null mean. Carries the partial result so callers can still
// report observed and mu.
class DegenerateNull : public Error {
public:
  DegenerateNull(std::string msg, double observed, double mu)
      : Error(ErrorCode::degenerate, std::move(msg)),
        observed_(observed), mu_(mu) {}

  double observed() const noexcept { return observed_; }
  double mu() const noexcept { return mu_; }

private:
  double observed_;
  double mu_;
};

} // namespace kgprox
