#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcl {

// Every library failure derives from Error so the CLI can map it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define MCL_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  };

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  const char* kind() const noexcept override { return "SyntaxError"; }

 private:
  std::size_t offset_;
};

MCL_DEFINE_ERROR(OverflowError)
MCL_DEFINE_ERROR(DegreeError)
MCL_DEFINE_ERROR(NotOnCurve)
MCL_DEFINE_ERROR(SingularPoint)
MCL_DEFINE_ERROR(HessianDegenerate)
MCL_DEFINE_ERROR(NoRealPoints)
MCL_DEFINE_ERROR(BoxExit)
MCL_DEFINE_ERROR(SingularEncounter)
MCL_DEFINE_ERROR(NoConvergence)
MCL_DEFINE_ERROR(SingularJacobian)
MCL_DEFINE_ERROR(DegenerateInput)
MCL_DEFINE_ERROR(BadCellStructure)
MCL_DEFINE_ERROR(TooFewPoints)
MCL_DEFINE_ERROR(SingularCurve)
MCL_DEFINE_ERROR(EmptySet)
MCL_DEFINE_ERROR(ConfigError)

#undef MCL_DEFINE_ERROR

}  // namespace mcl
