#include "entloss/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "entloss/entropy.hpp"
#include "entloss/rng.hpp"
#include "stiefel.hpp"

namespace entloss {

namespace {

constexpr double kSupportCut = 1e-12;

void require_endomorphism(const DensityMatrix& rho, const KrausChannel& ch) {
  if (ch.dim_a() != ch.dim_b()) {
    fail(ErrorCode::dim_mismatch,
         "entanglement fidelity needs matching input and output spaces");
  }
  if (rho.dim() != ch.dim_a()) {
    fail(ErrorCode::dim_mismatch, "state dimension does not match the channel");
  }
}

// Stinespring block view: an isometry V of shape (dim_a*env, dim_b) holds
// Kraus operator k of the candidate recovery at rows {a*env + k : a}.
CMatrix block_of(const CMatrix& v, int k, int dim_a, int env, int dim_b) {
  CMatrix op(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a) {
    op.row(a) = v.row(a * env + k);
  }
  return op;
}

} // namespace

double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& ch) {
  require_endomorphism(rho, ch);
  double total = 0.0;
  for (const CMatrix& op : ch.ops()) {
    complexd overlap = (rho.mat() * op).trace();
    total += std::norm(overlap);
  }
  return total;
}

KrausChannel transpose_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  if (rho.dim() != ch.dim_a()) {
    fail(ErrorCode::dim_mismatch, "state dimension does not match the channel");
  }
  int dim_a = ch.dim_a();
  int dim_b = ch.dim_b();

  DensityMatrix out_state = apply(ch, rho);
  EighResult out_eig = eigh(out_state.mat());
  CMatrix inv_sqrt = CMatrix::Zero(dim_b, dim_b);
  std::vector<int> null_cols;
  for (int k = 0; k < dim_b; ++k) {
    double nu = out_eig.eigenvalues(k);
    if (nu > kSupportCut) {
      inv_sqrt += (1.0 / std::sqrt(nu)) *
                  (out_eig.eigenvectors.col(k) * out_eig.eigenvectors.col(k).adjoint());
    } else {
      null_cols.push_back(k);
    }
  }

  EighResult in_eig = eigh(rho.mat());
  CMatrix sqrt_rho = CMatrix::Zero(dim_a, dim_a);
  std::vector<int> support_cols;
  for (int k = 0; k < dim_a; ++k) {
    double lam = in_eig.eigenvalues(k);
    if (lam > kSupportCut) {
      sqrt_rho += std::sqrt(lam) *
                  (in_eig.eigenvectors.col(k) * in_eig.eigenvectors.col(k).adjoint());
      support_cols.push_back(k);
    }
  }

  std::vector<CMatrix> ops;
  for (const CMatrix& a : ch.ops()) {
    ops.push_back(sqrt_rho * a.adjoint() * inv_sqrt);
  }
  // Send the complement of the output support to the input state's support
  // so the completed map is trace preserving.
  for (int i : support_cols) {
    for (int j : null_cols) {
      ops.push_back(std::sqrt(in_eig.eigenvalues(i)) * in_eig.eigenvectors.col(i) *
                    out_eig.eigenvectors.col(j).adjoint());
    }
  }
  return KrausChannel(dim_b, dim_a, ops);
}

RecoveryResult optimize_recovery(const DensityMatrix& rho,
                                 const KrausChannel& ch,
                                 const RecoveryConfig& cfg) {
  if (rho.dim() != ch.dim_a()) {
    fail(ErrorCode::dim_mismatch, "state dimension does not match the channel");
  }
  int dim_a = ch.dim_a();
  int dim_b = ch.dim_b();
  int env = dim_a * dim_b;

  const std::vector<CMatrix>& kraus = ch.ops();
  int n_kraus = static_cast<int>(kraus.size());
  std::vector<CMatrix> left;   // A_l * rho, for the fidelity terms
  std::vector<CMatrix> right;  // rho * A_l^dag, for the gradient
  left.reserve(kraus.size());
  right.reserve(kraus.size());
  for (const CMatrix& a : kraus) {
    left.push_back(a * rho.mat());
    right.push_back(rho.mat() * a.adjoint());
  }

  KrausChannel transpose = transpose_channel(rho, ch);
  double transpose_fidelity = entanglement_fidelity(rho, compose(transpose, ch));

  std::vector<double> trace;
  if (cfg.record_trace) {
    trace.push_back(transpose_fidelity);
  }

  auto fidelity_of = [&](const CMatrix& v, CMatrix* grad) {
    CMatrix coeff(env, n_kraus);
    for (int k = 0; k < env; ++k) {
      CMatrix rk = block_of(v, k, dim_a, env, dim_b);
      for (int l = 0; l < n_kraus; ++l) {
        coeff(k, l) = (rk * left[l]).trace();
      }
    }
    double value = coeff.squaredNorm();
    if (grad != nullptr) {
      grad->setZero();
      for (int k = 0; k < env; ++k) {
        CMatrix gk = CMatrix::Zero(dim_a, dim_b);
        for (int l = 0; l < n_kraus; ++l) {
          gk += coeff(k, l) * right[l];
        }
        for (int a = 0; a < dim_a; ++a) {
          grad->row(a * env + k) = 2.0 * gk.row(a);
        }
      }
    }
    return value;
  };

  stiefel::Objective objective = [&](const CMatrix& v, CMatrix* grad) {
    double value = fidelity_of(v, grad);
    if (grad != nullptr) {
      *grad = -*grad;
    }
    if (cfg.record_trace) {
      trace.push_back(value);
    }
    return -value;
  };

  stiefel::Options opt;
  opt.max_iter = std::max(1, cfg.max_iter);
  opt.tol = cfg.tol;

  CMatrix v0 = CMatrix::Zero(dim_a * env, dim_b);
  const std::vector<CMatrix>& tops = transpose.ops();
  for (int k = 0; k < static_cast<int>(tops.size()); ++k) {
    for (int a = 0; a < dim_a; ++a) {
      v0.row(a * env + k) = tops[static_cast<std::size_t>(k)].row(a);
    }
  }

  Rng rng(Rng::mix(cfg.seed, 0x7ec0));
  int restarts = std::max(1, cfg.restarts);

  double best_value = -1.0;
  CMatrix best_point;
  int iterations = 0;
  for (int r = 0; r < restarts; ++r) {
    CMatrix start = (r == 0) ? v0 : rng.haar_isometry(dim_a * env, dim_b);
    stiefel::Outcome run = stiefel::minimize(objective, std::move(start), opt);
    iterations += run.iterations;
    if (-run.value > best_value) {
      best_value = -run.value;
      best_point = run.point;
    }
  }

  if (best_value <= transpose_fidelity + 1e-9) {
    return RecoveryResult{std::move(transpose), transpose_fidelity, "transpose",
                          iterations, std::move(trace)};
  }

  std::vector<CMatrix> rec_ops;
  for (int k = 0; k < env; ++k) {
    CMatrix op = block_of(best_point, k, dim_a, env, dim_b);
    if (op.squaredNorm() > 1e-14) {
      rec_ops.push_back(op);
    }
  }
  KrausChannel recovered(dim_b, dim_a, rec_ops);
  double fidelity = entanglement_fidelity(rho, compose(recovered, ch));
  if (std::abs(fidelity - best_value) > 1e-8) {
    fail(ErrorCode::internal_inconsistency,
         "recovery fidelity changed after channel reconstruction");
  }
  return RecoveryResult{std::move(recovered), fidelity, "optimized", iterations,
                        std::move(trace)};
}

double g_eval(double x, int dim_a) {
  if (dim_a < 2) {
    fail(ErrorCode::bad_param, "rate function needs input dimension >= 2");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (x < 0.0 || x > 0.5) {
    fail(ErrorCode::domain_error,
         "rate function argument must lie in [0, 1/2]");
  }
  return 4.0 * x * std::log2(static_cast<double>(dim_a) / x);
}

double g_inverse(double y, int dim_a) {
  if (dim_a < 2) {
    fail(ErrorCode::bad_param, "rate function needs input dimension >= 2");
  }
  double top = g_eval(0.5, dim_a);
  if (y < 0.0 || y > top + 1e-12) {
    fail(ErrorCode::domain_error, "rate function inverse argument out of range");
  }
  if (y == 0.0) {
    return 0.0;
  }
  if (y >= top) {
    return 0.5;
  }
  double lo = 0.0;
  double hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g_eval(mid, dim_a) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Fig2Point> fig2_curve(const std::vector<double>& ef_grid) {
  const double s_max = std::log2(3.0);
  const double k_f = 289.0;  // (2 * 3 * 3 - 1)^2
  std::vector<Fig2Point> out;
  out.reserve(ef_grid.size());
  for (double ef : ef_grid) {
    if (ef < -1e-12 || ef > s_max + 1e-12) {
      fail(ErrorCode::domain_error,
           "formation value must lie in [0, log2(3)]");
    }
    double clamped = std::clamp(ef, 0.0, s_max);
    double delta = s_max - clamped;
    double arg = std::sqrt(2.0 * k_f * delta);
    double bound = 0.0;
    if (arg <= 0.5) {
      bound = std::max(0.0, s_max - g_eval(arg, 3));
    }
    out.push_back({clamped, bound});
  }
  return out;
}

} // namespace entloss
