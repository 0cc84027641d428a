#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

// Base for all solver/IO errors. `kind()` is the stable machine-readable
// name recorded in run manifests and mapped to exit codes by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SOLITONLAB_ERROR(NAME)                                         \
    class NAME : public Error {                                        \
    public:                                                            \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}   \
    }

SOLITONLAB_ERROR(InvalidArgument);
SOLITONLAB_ERROR(InvalidField);
SOLITONLAB_ERROR(InvalidExponent);
SOLITONLAB_ERROR(DivisionByZeroField);
SOLITONLAB_ERROR(GridMismatch);
SOLITONLAB_ERROR(BracketFailure);
SOLITONLAB_ERROR(ShootFailure);
SOLITONLAB_ERROR(TailUnderflow);
SOLITONLAB_ERROR(ParamMismatch);
SOLITONLAB_ERROR(FlowStalled);
SOLITONLAB_ERROR(MassTooSmall);
SOLITONLAB_ERROR(NoPohozaevRoot);
SOLITONLAB_ERROR(WindowViolation);
SOLITONLAB_ERROR(NoBigSolitonInRange);
SOLITONLAB_ERROR(InsufficientSamples);
SOLITONLAB_ERROR(BoxExit);
SOLITONLAB_ERROR(DegenerateInput);
SOLITONLAB_ERROR(SchemaError);
SOLITONLAB_ERROR(CorruptFile);
SOLITONLAB_ERROR(ConfigError);

#undef SOLITONLAB_ERROR

// Time integration blow-up; carries the failing time.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(double t, const std::string& msg)
        : Error("NumericalBlowup", msg + " at t=" + std::to_string(t)), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace solitonlab
