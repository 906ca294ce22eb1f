#pragma once

#include <stdexcept>
#include <string>

namespace qwrng {

enum class ErrorKind {
  Domain,          // argument outside its mathematical domain
  Normalization,   // vector or distribution not unit-normalized
  MissingRatio,    // coin layer has no ratio for an occupied position
  ScheduleShape,   // schedule key set does not match the walk
  SupportMismatch, // two distributions/count tables over different sites
  KeyMismatch,     // gradient grid and schedule disagree on key set
  Parse,
  OutOfRange,
  Precondition,
  Size,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qwrng
