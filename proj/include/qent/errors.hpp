#pragma once

#include <stdexcept>
#include <string>

namespace qent {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QENT_DEFINE_ERROR(Name)                      \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(std::string(#Name ": ") + what) {}   \
  }

QENT_DEFINE_ERROR(NotHermitian);
QENT_DEFINE_ERROR(NotPSD);
QENT_DEFINE_ERROR(NoConvergence);
QENT_DEFINE_ERROR(DimensionMismatch);
QENT_DEFINE_ERROR(NonFinite);
QENT_DEFINE_ERROR(ZeroVector);
QENT_DEFINE_ERROR(OutOfRange);
QENT_DEFINE_ERROR(DomainError);
QENT_DEFINE_ERROR(InvalidDensity);
QENT_DEFINE_ERROR(InvalidChannel);
QENT_DEFINE_ERROR(InvalidProjectors);
QENT_DEFINE_ERROR(NotPure);
QENT_DEFINE_ERROR(OptimizerFailure);
QENT_DEFINE_ERROR(NoRoot);
QENT_DEFINE_ERROR(ParseError);

#undef QENT_DEFINE_ERROR

}  // namespace qent
