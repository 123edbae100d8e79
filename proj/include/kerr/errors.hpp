// errors.hpp — exception types raised by the toolkit

#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

// Root of every error the library throws on purpose. `kind()` is a stable
// short name used in CSV flags and JSON sidecars.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define KERR_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    };

KERR_DEFINE_ERROR(InvalidArgument)
KERR_DEFINE_ERROR(DimensionMismatch)
KERR_DEFINE_ERROR(TailTooHeavy)
KERR_DEFINE_ERROR(InvalidState)
KERR_DEFINE_ERROR(StepTooLarge)
KERR_DEFINE_ERROR(ExpFailure)
KERR_DEFINE_ERROR(EigenFailure)
KERR_DEFINE_ERROR(DegenerateSteady)
KERR_DEFINE_ERROR(NotPositive)
KERR_DEFINE_ERROR(NoRealEigenvalue)
KERR_DEFINE_ERROR(EmptyOrbit)
KERR_DEFINE_ERROR(Diverged)
KERR_DEFINE_ERROR(TooFewPoints)
KERR_DEFINE_ERROR(ConfigInvalid)

#undef KERR_DEFINE_ERROR

} // namespace kerr
