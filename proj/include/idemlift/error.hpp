#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idemlift {

enum class ErrorCode {
    invalid_parameter,
    algebra_mismatch,
    not_invertible,
    no_involution,
    spectrum_contains_zero,
    degenerate_geometry,
    spectrum_not_enclosed,
    quadrature_not_converged,
    spectrum_on_contour,
    spectrum_meets_cut,
    spectrum_too_large,
    out_of_radius,
    unsupported_strategy,
    not_idempotent_input,
    section_invalid,
    half_in_spectrum,
    enclosure_failed,
    ambiguous_sign,
    not_star_compatible,
    invalid_generator,
    hypothesis_failed,
    config_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace idemlift
