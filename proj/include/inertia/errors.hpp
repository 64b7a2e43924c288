#pragma once

#include <stdexcept>
#include <string>

namespace inertia {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INERTIA_ERROR(Name)              \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

INERTIA_ERROR(DomainError);
INERTIA_ERROR(OverflowError);
INERTIA_ERROR(DivergentTailError);
INERTIA_ERROR(QuadratureError);
INERTIA_ERROR(UnsupportedRecipeError);
INERTIA_ERROR(ParamError);
INERTIA_ERROR(NonmonotoneBError);
INERTIA_ERROR(MissingCertificateError);
INERTIA_ERROR(GridError);
INERTIA_ERROR(NotPSDError);
INERTIA_ERROR(MissingProxError);
INERTIA_ERROR(MissingArgminError);
INERTIA_ERROR(ConfigError);
INERTIA_ERROR(WindowError);
INERTIA_ERROR(InsufficientDataError);
INERTIA_ERROR(MissingInputError);

#undef INERTIA_ERROR

}  // namespace inertia
