#pragma once

#include <stdexcept>
#include <string>

namespace hyperdual {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define HYPERDUAL_ERROR(Name)                                   \
    struct Name : Error {                                       \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

HYPERDUAL_ERROR(BalanceViolation);
HYPERDUAL_ERROR(NonGenericKappa);
HYPERDUAL_ERROR(NegativeDimension);
HYPERDUAL_ERROR(GeometryError);
HYPERDUAL_ERROR(FactorVanishes);
HYPERDUAL_ERROR(DegenerateParameters);
HYPERDUAL_ERROR(StepTooLarge);
HYPERDUAL_ERROR(NoConvergence);
HYPERDUAL_ERROR(GammaPole);
HYPERDUAL_ERROR(SinZero);
HYPERDUAL_ERROR(SingularPath);
HYPERDUAL_ERROR(IndexOutOfRange);
HYPERDUAL_ERROR(ConfigError);

#undef HYPERDUAL_ERROR

}  // namespace hyperdual
