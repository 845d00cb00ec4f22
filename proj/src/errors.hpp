#pragma once
#include <stdexcept>
#include <string>

namespace bil {

// Error codes shared with the C API (see include/billiard/billiard.h).
enum class ErrCode : int {
  Ok = 0,
  SpecError = 1,          // bad domain spec / not convex
  BadArgument = 2,        // precondition violation
  TangentialState = 3,
  NoConvergence = 4,
  NotOneRotation = 5,
  WrongCount = 6,
  NotCausticFamily = 7,
  CrossCheckFailed = 8,
  NegativeRadicand = 9,
  UnderResolved = 10,
  DegenerateFit = 11,
  OriginOutside = 12,
  CoordinateOutOfRange = 13,
  Internal = 14,
};

class BilError : public std::runtime_error {
 public:
  BilError(ErrCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& msg) {
  throw BilError(code, msg);
}

}  // namespace bil
