#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hm {

enum class Errc {
    NonSymmetric,
    IndefiniteOperator,
    DimensionMismatch,
    NonFinite,
    StepCountOverflow,
    InvalidParams,
    NegativeDiscriminant,
    SingularIndicator,
    InsufficientData,
    ConfigError,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying one of the library's error categories.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// Config/validation problems as opposed to failures of the numerics.
    bool is_config_error() const noexcept {
        return code_ == Errc::ConfigError || code_ == Errc::InvalidParams ||
               code_ == Errc::DimensionMismatch || code_ == Errc::InsufficientData ||
               code_ == Errc::StepCountOverflow;
    }

private:
    Errc code_;
};

}  // namespace hm
