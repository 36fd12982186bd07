#include "hullscope/types.hpp"

namespace hullscope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_liftable: return "not_liftable";
    case ErrorCode::boundary_contact: return "boundary_contact";
    case ErrorCode::disc_in_hyperplane: return "disc_in_hyperplane";
    case ErrorCode::infinite_j: return "infinite_j";
    case ErrorCode::numerical_cancellation: return "numerical_cancellation";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) { return mode == Mode::projective ? "projective" : "affine"; }

Mode mode_from_string(std::string_view s) {
  if (s == "projective") return Mode::projective;
  if (s == "affine") return Mode::affine;
  throw Error(ErrorCode::invalid_input, "unknown mode '" + std::string(s) + "'");
}

}  // namespace hullscope
