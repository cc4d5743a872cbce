#pragma once

#include <stdexcept>
#include <string>

namespace fractal {

enum class errc {
  all_zero = 1,
  order_exceeds_cap,
  nonvanishing_zeroth_moment,
  out_of_bounds,
  degenerate_increment,
  alpha_out_of_range,
  not_nonnegative_definite,
  insufficient_margin,
  zero_variogram,
  m_too_small,
  singular_weight_matrix,
  boundary_alpha,
  too_few_replications,
  invalid_argument,
  parse_error,
  io_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::all_zero: return "AllZero";
    case errc::order_exceeds_cap: return "OrderExceedsCap";
    case errc::nonvanishing_zeroth_moment: return "NonVanishingZerothMoment";
    case errc::out_of_bounds: return "OutOfBounds";
    case errc::degenerate_increment: return "DegenerateIncrement";
    case errc::alpha_out_of_range: return "AlphaOutOfRange";
    case errc::not_nonnegative_definite: return "NotNonNegativeDefinite";
    case errc::insufficient_margin: return "InsufficientMargin";
    case errc::zero_variogram: return "ZeroVariogram";
    case errc::m_too_small: return "MTooSmall";
    case errc::singular_weight_matrix: return "SingularWeightMatrix";
    case errc::boundary_alpha: return "BoundaryAlpha";
    case errc::too_few_replications: return "TooFewReplications";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them to distinct exit statuses.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

  errc code() const noexcept { return code_; }
  /// The diagnostic without the code-name prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

}  // namespace fractal
