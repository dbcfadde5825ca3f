#include "geomom/error.hpp"

namespace geomom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateChart: return "DegenerateChart";
    case ErrorCode::ShellFold: return "ShellFold";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::TruncationTooTight: return "TruncationTooTight";
    case ErrorCode::PoleSingularity: return "PoleSingularity";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::AccuracyLoss: return "AccuracyLoss";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace geomom
