#pragma once

#include <stdexcept>
#include <string>

namespace khlab {

enum class ErrorCode {
  malformed_pd,
  inconsistent_diagram,
  bad_letter,
  bad_ring,
  ring_not_field,
  ring_mismatch,
  shape_mismatch,
  twist_not_unit,
  not_diagonalizable,
  no_square_ratio,
  char_two_unsupported,
  cube_too_large,
  zero_chain,
  mixed_degree,
  not_a_knot,
  gamma_vanishes_mod_p,
  hypothesis_violated,
  file_not_found,
  internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::malformed_pd: return "MALFORMED_PD";
    case ErrorCode::inconsistent_diagram: return "INCONSISTENT_DIAGRAM";
    case ErrorCode::bad_letter: return "BAD_LETTER";
    case ErrorCode::bad_ring: return "BAD_RING";
    case ErrorCode::ring_not_field: return "RING_NOT_FIELD";
    case ErrorCode::ring_mismatch: return "RING_MISMATCH";
    case ErrorCode::shape_mismatch: return "SHAPE_MISMATCH";
    case ErrorCode::twist_not_unit: return "TWIST_NOT_UNIT";
    case ErrorCode::not_diagonalizable: return "NOT_DIAGONALIZABLE";
    case ErrorCode::no_square_ratio: return "NO_SQUARE_RATIO";
    case ErrorCode::char_two_unsupported: return "CHAR_TWO_UNSUPPORTED";
    case ErrorCode::cube_too_large: return "CUBE_TOO_LARGE";
    case ErrorCode::zero_chain: return "ZERO_CHAIN";
    case ErrorCode::mixed_degree: return "MIXED_DEGREE";
    case ErrorCode::not_a_knot: return "NOT_A_KNOT";
    case ErrorCode::gamma_vanishes_mod_p: return "GAMMA_VANISHES_MOD_P";
    case ErrorCode::hypothesis_violated: return "HYPOTHESIS_VIOLATED";
    case ErrorCode::file_not_found: return "FILE_NOT_FOUND";
    case ErrorCode::internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

class KhError : public std::runtime_error {
 public:
  KhError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw KhError(code, what); }

}  // namespace khlab
