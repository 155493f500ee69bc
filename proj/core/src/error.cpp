#include "pqk/error.hpp"

namespace pqk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidBranch: return "InvalidBranch";
    case ErrorKind::VariableClash: return "VariableClash";
    case ErrorKind::AssignmentClash: return "AssignmentClash";
    case ErrorKind::UnboundLabel: return "UnboundLabel";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::LeftoverLabel: return "LeftoverLabel";
    case ErrorKind::WrongWireType: return "WrongWireType";
    case ErrorKind::StaleLiftedVar: return "StaleLiftedVar";
    case ErrorKind::NonFreshOutput: return "NonFreshOutput";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::GateArityMismatch: return "GateArityMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundVar: return "UnboundVar";
    case ErrorKind::LinearityViolation: return "LinearityViolation";
    case ErrorKind::LeftoverLinear: return "LeftoverLinear";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::BranchArityMismatch: return "BranchArityMismatch";
    case ErrorKind::LiftedVarNotFresh: return "LiftedVarNotFresh";
    case ErrorKind::NonParameterUnderLift: return "NonParameterUnderLift";
    case ErrorKind::FlattenClash: return "FlattenClash";
    case ErrorKind::NotAnMValue: return "NotAnMValue";
    case ErrorKind::UnsupportedGate: return "UnsupportedGate";
    case ErrorKind::SimulationLimit: return "SimulationLimit";
    case ErrorKind::GenerationBudgetExceeded: return "GenerationBudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string SourceSpan::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(pqk::to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(message) {}

SyntaxError::SyntaxError(SourceSpan where, const std::string& message)
    : Error(ErrorKind::SyntaxError, where.to_string() + ": " + message), where_(where) {}

}  // namespace pqk
