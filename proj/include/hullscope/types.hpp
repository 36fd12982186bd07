#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hullscope {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  invalid_input,
  dimension_mismatch,
  not_liftable,
  boundary_contact,
  disc_in_hyperplane,
  infinite_j,
  numerical_cancellation,
  io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Affine points live in C^n, projective representatives in C^{n+1}.
enum class Mode { projective, affine };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view s);

}  // namespace hullscope
