#pragma once

#include <stdexcept>
#include <string>

namespace sdde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SDDE_DEFINE_ERROR(Name)                  \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    }

SDDE_DEFINE_ERROR(DomainError);
SDDE_DEFINE_ERROR(CriticalPointError);
SDDE_DEFINE_ERROR(InvalidParameter);
SDDE_DEFINE_ERROR(NoSignChange);
SDDE_DEFINE_ERROR(ClassificationError);
SDDE_DEFINE_ERROR(NotApplicable);
SDDE_DEFINE_ERROR(NotDecidable);
SDDE_DEFINE_ERROR(DomainEscape);
SDDE_DEFINE_ERROR(InversionError);
SDDE_DEFINE_ERROR(ContourRootError);
SDDE_DEFINE_ERROR(TooShort);
SDDE_DEFINE_ERROR(InvalidHistory);
SDDE_DEFINE_ERROR(ConfigError);

#undef SDDE_DEFINE_ERROR

/// Raised when |x| exceeds the blow-up guard during integration.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, double time) : Error(what), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// Wraps an error raised inside one stage of a certification run.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what, bool invalid_input)
        : Error(stage + ": " + what), stage_(std::move(stage)), invalid_input_(invalid_input) {}
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] bool invalid_input() const noexcept { return invalid_input_; }

private:
    std::string stage_;
    bool invalid_input_;
};

} // namespace sdde
