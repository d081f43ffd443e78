#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfmp {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto exit statuses (see tools/place.cpp).
enum class ErrorCode {
  // input documents
  Io,
  Syntax,
  MissingInstances,
  DanglingPin,
  DuplicateName,
  BadOutline,
  BadMaster,
  UnknownMaster,
  UnsupportedConstruct,
  // clustering / extraction
  ThresholdConflict,
  DegenerateCluster,
  // placement
  EmptyGraph,
  BadPermutation,
  UnplacedCluster,
  EmptyCluster,
  EmptyPointSet,
  // driver
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dfmp
