#include "dfmp/error.hpp"

namespace dfmp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::MissingInstances: return "MissingInstances";
    case ErrorCode::DanglingPin: return "DanglingPin";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::BadOutline: return "BadOutline";
    case ErrorCode::BadMaster: return "BadMaster";
    case ErrorCode::UnknownMaster: return "UnknownMaster";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::ThresholdConflict: return "ThresholdConflict";
    case ErrorCode::DegenerateCluster: return "DegenerateCluster";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::UnplacedCluster: return "UnplacedCluster";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace dfmp
