#include "entloss/eof.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

#include "entloss/entropy.hpp"
#include "entloss/rng.hpp"
#include "stiefel.hpp"

namespace entloss {

namespace {

constexpr double kMemberFloor = 1e-15;   // skip ensemble members lighter than this
constexpr double kSupportFloor = 1e-15;  // relative spectral cutoff inside a member
constexpr int kMaxTotalDim = 9;

// Unnormalized reduced state on A of one ensemble member, from the column
// vector laid out as psi[a * dim_b + b].
CMatrix member_reduced(const CVector& psi, int dim_a, int dim_b) {
  Eigen::Map<const Eigen::Matrix<complexd, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      amp(psi.data(), dim_a, dim_b);
  CMatrix m = amp;
  return m * m.adjoint();
}

struct MemberEigs {
  RVector values;
  CMatrix vectors;
  double weight = 0.0;
};

MemberEigs member_spectrum(const CVector& psi, int dim_a, int dim_b) {
  CMatrix red = member_reduced(psi, dim_a, dim_b);
  red = 0.5 * (red + red.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(red);
  MemberEigs out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.weight = out.values.sum();
  return out;
}

} // namespace

double pure_entanglement(const PureBipartiteState& psi) {
  RVector schmidt = psi.schmidt_coefficients();
  RVector probs = schmidt.array().square();
  return entropy_of_spectrum(probs);
}

namespace eof_detail {

double average_entanglement(const CMatrix& u, const CMatrix& basis,
                            int dim_a, int dim_b) {
  CMatrix ensemble = basis * u.transpose();  // column i = unnormalized member i
  double total = 0.0;
  for (int i = 0; i < ensemble.cols(); ++i) {
    MemberEigs eig = member_spectrum(ensemble.col(i), dim_a, dim_b);
    if (eig.weight < kMemberFloor) {
      continue;
    }
    double h = 0.0;
    for (int k = 0; k < eig.values.size(); ++k) {
      double mu = eig.values(k);
      if (mu > 0.0) {
        h -= mu * std::log2(mu);
      }
    }
    total += h + eig.weight * std::log2(eig.weight);
  }
  return total;
}

CMatrix average_entanglement_gradient(const CMatrix& u, const CMatrix& basis,
                                      int dim_a, int dim_b) {
  CMatrix ensemble = basis * u.transpose();
  CMatrix grad = CMatrix::Zero(u.rows(), u.cols());
  for (int i = 0; i < ensemble.cols(); ++i) {
    MemberEigs eig = member_spectrum(ensemble.col(i), dim_a, dim_b);
    if (eig.weight < kMemberFloor) {
      continue;
    }
    // Weighting operator -log2(reduced / weight) restricted to the support.
    CMatrix weigher = CMatrix::Zero(dim_a, dim_a);
    for (int k = 0; k < eig.values.size(); ++k) {
      double mu = eig.values(k);
      if (mu < eig.weight * kSupportFloor) {
        continue;
      }
      weigher += -std::log2(mu / eig.weight) *
                 (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
    }
    Eigen::Map<const Eigen::Matrix<complexd, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        amp(ensemble.col(i).data(), dim_a, dim_b);
    CMatrix weighted = weigher * amp;  // acts on the A factor only
    CVector w(dim_a * dim_b);
    for (int a = 0; a < dim_a; ++a) {
      for (int b = 0; b < dim_b; ++b) {
        w(a * dim_b + b) = weighted(a, b);
      }
    }
    grad.row(i) = 2.0 * (basis.adjoint() * w).transpose();
  }
  return grad;
}

} // namespace eof_detail

EofResult eof(const DensityMatrix& tau, const EofConfig& cfg) {
  if (tau.dims().size() != 2) {
    fail(ErrorCode::dim_mismatch,
         "entanglement of formation needs a bipartite dimension split");
  }
  int dim_a = tau.dim_at(0);
  int dim_b = tau.dim_at(1);
  int total_dim = dim_a * dim_b;
  if (total_dim > kMaxTotalDim) {
    fail(ErrorCode::dim_too_large,
         "ensemble search supports total dimension up to " +
             std::to_string(kMaxTotalDim));
  }

  EighResult eig = eigh(tau.mat());
  std::vector<int> kept;
  for (int t = eig.eigenvalues.size() - 1; t >= 0; --t) {
    if (eig.eigenvalues(t) > tol::spectrum_cut) {
      kept.push_back(t);
    }
  }
  int rank = static_cast<int>(kept.size());
  if (rank == 0) {
    fail(ErrorCode::internal_inconsistency, "state spectrum is empty");
  }

  CMatrix basis(total_dim, rank);
  for (int c = 0; c < rank; ++c) {
    basis.col(c) =
        std::sqrt(eig.eigenvalues(kept[c])) * eig.eigenvectors.col(kept[c]);
  }

  EofResult out;
  if (rank == 1) {
    CVector phi = eig.eigenvectors.col(kept[0]);
    out.value = pure_entanglement(PureBipartiteState(phi, dim_a, dim_b));
    out.decomposition.weights = {1.0};
    out.decomposition.states = {phi};
    out.restarts_used = 0;
    out.converged = true;
    return out;
  }

  int members = cfg.ensemble_size;
  if (members == 0) {
    members = std::min(rank * rank, total_dim * total_dim);
  }
  members = std::min(members, total_dim * total_dim);
  if (members < rank) {
    fail(ErrorCode::bad_param, "ensemble size is below the state rank");
  }

  stiefel::Options opt;
  opt.max_iter = std::max(1, cfg.max_iter);
  opt.tol = cfg.tol;

  stiefel::Objective objective = [&](const CMatrix& u, CMatrix* grad) {
    if (grad != nullptr) {
      *grad = eof_detail::average_entanglement_gradient(u, basis, dim_a, dim_b);
    }
    return eof_detail::average_entanglement(u, basis, dim_a, dim_b);
  };

  Rng rng(Rng::mix(cfg.seed, 0xe0f11));
  int restarts = std::max(1, cfg.restarts);

  double best_value = 0.0;
  CMatrix best_point;
  int best_members = 0;
  bool best_converged = false;
  bool have_best = false;

  for (int r = 0; r < restarts; ++r) {
    CMatrix u0;
    if (r == 0) {
      u0 = CMatrix::Identity(members, rank);
    } else {
      u0 = rng.haar_isometry(members, rank);
    }
    stiefel::Outcome run = stiefel::minimize(objective, std::move(u0), opt);

    CMatrix ensemble = basis * run.point.transpose();
    int live = 0;
    for (int i = 0; i < ensemble.cols(); ++i) {
      if (ensemble.col(i).squaredNorm() > 1e-12) {
        ++live;
      }
    }
    bool better = !have_best || run.value < best_value - 1e-12 ||
                  (run.value < best_value + 1e-10 && live < best_members);
    if (better) {
      best_value = run.value;
      best_point = run.point;
      best_members = live;
      best_converged = run.converged;
      have_best = true;
    }
  }

  CMatrix ensemble = basis * best_point.transpose();
  double total_weight = 0.0;
  for (int i = 0; i < ensemble.cols(); ++i) {
    double w = ensemble.col(i).squaredNorm();
    if (w > 1e-12) {
      out.decomposition.weights.push_back(w);
      out.decomposition.states.push_back(ensemble.col(i) / std::sqrt(w));
      total_weight += w;
    }
  }
  if (out.decomposition.weights.empty() || total_weight <= 0.0) {
    fail(ErrorCode::internal_inconsistency, "ensemble search lost all weight");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < out.decomposition.weights.size(); ++i) {
    out.decomposition.weights[i] /= total_weight;
    value += out.decomposition.weights[i] *
             pure_entanglement(PureBipartiteState(out.decomposition.states[i],
                                                  dim_a, dim_b));
  }
  out.value = value;
  out.restarts_used = restarts;
  out.converged = best_converged;
  return out;
}

double wootters_eof(const DensityMatrix& tau) {
  if (tau.dims().size() != 2 || tau.dim_at(0) != 2 || tau.dim_at(1) != 2) {
    fail(ErrorCode::dim_mismatch,
         "concurrence formula applies to two-qubit states only");
  }
  const CMatrix& rho = tau.mat();

  CMatrix yy(4, 4);
  yy.setZero();
  // sigma_y (x) sigma_y
  yy(0, 3) = complexd(-1.0, 0.0);
  yy(1, 2) = complexd(1.0, 0.0);
  yy(2, 1) = complexd(1.0, 0.0);
  yy(3, 0) = complexd(-1.0, 0.0);

  CMatrix spun = yy * rho.conjugate() * yy;

  EighResult eig = eigh(rho);
  CMatrix root = CMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    double lam = std::max(0.0, eig.eigenvalues(k));
    root += std::sqrt(lam) * (eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint());
  }

  CMatrix prod = root * spun * root;
  prod = 0.5 * (prod + prod.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(prod);
  RVector mu = solver.eigenvalues();  // ascending

  double lams[4];
  for (int k = 0; k < 4; ++k) {
    lams[k] = std::sqrt(std::max(0.0, mu(3 - k)));  // descending
  }
  double concurrence = std::max(0.0, lams[0] - lams[1] - lams[2] - lams[3]);
  double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - concurrence * concurrence)));
  return binary_entropy(x);
}

} // namespace entloss
