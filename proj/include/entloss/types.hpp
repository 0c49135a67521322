#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace entloss {

using complexd = std::complex<double>;

// Dense complex matrix / vector workhorses. All public contracts are written
// against these aliases; the backing library is an implementation detail.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  ok = 0,
  bad_arg,
  dim_mismatch,
  not_square,
  not_hermitian,
  not_cptp,
  not_positive,
  not_normalized,
  bad_param,
  unknown_channel,
  index_out_of_range,
  not_computable,
  dim_too_large,
  domain_error,
  parse_error,
  io_error,
  config_error,
  internal_inconsistency,
};

const char* error_code_name(ErrorCode code);

// Single exception type carrying a machine-readable code; the C API maps the
// code straight to its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

// Numerical tolerances shared across modules. Values are part of the public
// behavior (validation thresholds), so they live in one place.
namespace tol {
inline constexpr double hermiticity = 1e-10;      // Hermitian validation
inline constexpr double state_trace = 1e-10;      // trace-one validation
inline constexpr double state_psd = 1e-10;        // eigenvalue >= -state_psd
inline constexpr double unit_norm = 1e-12;        // pure-state norm
inline constexpr double kraus_tp = 1e-9;          // sum A_k^dag A_k = I
inline constexpr double choi_psd = 1e-9;          // Choi positivity
inline constexpr double eig_reconstruct = 1e-9;   // eigh reconstruction
inline constexpr double purify_roundtrip = 1e-10; // Tr_R purify(rho) = rho
inline constexpr double loss_clip = 1e-9;         // negative-delta clipping
inline constexpr double spectrum_cut = 1e-12;     // rank decisions
} // namespace tol

} // namespace entloss
