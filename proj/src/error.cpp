#include "schroflow/error.hpp"

namespace schroflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonProjectable: return "NonProjectable";
    case ErrorKind::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorKind::ParameterImbalance: return "ParameterImbalance";
    case ErrorKind::ExcludedEndpoint: return "ExcludedEndpoint";
    case ErrorKind::MidpointDiverged: return "MidpointDiverged";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace schroflow
