#include "solitonjet/error.hpp"

namespace solitonjet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TruncationTooSmall: return "truncation-too-small";
    case ErrorKind::OrderMismatch: return "order-mismatch";
    case ErrorKind::PoleAtPoint: return "pole-at-point";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::InvalidMode: return "invalid-mode";
    case ErrorKind::SingularSpec: return "singular-spec";
    case ErrorKind::DegeneratePair: return "degenerate-pair";
    case ErrorKind::MissingManifold: return "missing-manifold";
    case ErrorKind::MissingBinding: return "missing-binding";
    case ErrorKind::EmptyScan: return "empty-scan";
    case ErrorKind::NotBacklundPair: return "not-a-backlund-pair";
    case ErrorKind::NotEigenfunction: return "not-an-eigenfunction";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Scenario: return "scenario";
  }
  return "unknown";
}

}  // namespace solitonjet
