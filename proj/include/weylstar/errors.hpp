#pragma once

#include <stdexcept>
#include <string>

namespace weylstar {

// Base for all computational errors raised by the library. `name()` returns
// the stable error identifier used by the CLI exit-code contract.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define WEYLSTAR_DEFINE_ERROR(NAME)                                  \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& what) : Error(#NAME, what) {} \
    }

WEYLSTAR_DEFINE_ERROR(SingularPoint);
WEYLSTAR_DEFINE_ERROR(PathTooCloseToSingularity);
WEYLSTAR_DEFINE_ERROR(DegenerateParameter);
WEYLSTAR_DEFINE_ERROR(StepSizeTooLarge);
WEYLSTAR_DEFINE_ERROR(WrongClass);
WEYLSTAR_DEFINE_ERROR(WrongRegion);
WEYLSTAR_DEFINE_ERROR(IndexOutOfRange);
WEYLSTAR_DEFINE_ERROR(OutOfStrip);
WEYLSTAR_DEFINE_ERROR(OutOfHalfPlane);
WEYLSTAR_DEFINE_ERROR(OutOfRegion);
WEYLSTAR_DEFINE_ERROR(ContourHitsPole);
WEYLSTAR_DEFINE_ERROR(ZeroComponent);
WEYLSTAR_DEFINE_ERROR(PoleError);
WEYLSTAR_DEFINE_ERROR(RangeError);
WEYLSTAR_DEFINE_ERROR(DomainError);
WEYLSTAR_DEFINE_ERROR(ValidationError);

#undef WEYLSTAR_DEFINE_ERROR

} // namespace weylstar
