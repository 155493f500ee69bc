#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqk {

enum class ErrorKind {
  // lifting trees and assignments
  InvalidBranch,
  VariableClash,
  AssignmentClash,
  // circuits
  UnboundLabel,
  DuplicateLabel,
  LeftoverLabel,
  WrongWireType,
  StaleLiftedVar,
  NonFreshOutput,
  UnknownGate,
  GateArityMismatch,
  PreconditionViolated,
  // surface syntax
  SyntaxError,
  // typing
  UnboundVar,
  LinearityViolation,
  LeftoverLinear,
  TypeMismatch,
  BranchArityMismatch,
  LiftedVarNotFresh,
  NonParameterUnderLift,
  FlattenClash,
  NotAnMValue,
  // simulation and harness
  UnsupportedGate,
  SimulationLimit,
  GenerationBudgetExceeded,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

struct SourceSpan {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourceSpan where, const std::string& message);

  SourceSpan where() const { return where_; }

 private:
  SourceSpan where_;
};

}  // namespace pqk
