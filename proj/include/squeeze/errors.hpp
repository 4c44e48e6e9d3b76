#pragma once

#include <stdexcept>
#include <string>

namespace squeeze {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable tag, used by the CLI error payload.
    [[nodiscard]] virtual const char *kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override {
        return "invalid_argument";
    }
};

/// Mean spin vector too short to define a direction (xi^2 undefined).
class DegenerateMeanSpin : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override {
        return "degenerate_mean_spin";
    }
};

/// Ramsey fringe slope vanishes at the requested phase.
class DivergentSensitivity : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override {
        return "divergent_sensitivity";
    }
};

/// The Omega/chi bracket could not be expanded to contain the target contrast.
class BracketFailure : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override {
        return "bracket_failure";
    }
};

class NumericalFailure : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override {
        return "numerical_failure";
    }
};

#define SQUEEZE_REQUIRE(cond, msg)                                             \
    do {                                                                       \
        if (!(cond)) {                                                         \
            throw ::squeeze::InvalidArgument(msg);                             \
        }                                                                      \
    } while (0)

} // namespace squeeze
