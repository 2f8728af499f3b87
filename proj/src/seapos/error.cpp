#include "seapos/error.hpp"

namespace seapos {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Degenerate: return "degenerate configuration";
    case ErrorCode::Arity: return "too few correspondences";
    case ErrorCode::PointAtInfinity: return "point at infinity";
    case ErrorCode::TimeOrder: return "time order violation";
    case ErrorCode::FilterDegeneracy: return "filter degeneracy";
    case ErrorCode::Coverage: return "coverage error";
    case ErrorCode::EmptyReport: return "empty report";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Generation: return "generation error";
  }
  return "unknown error";
}

}  // namespace seapos
