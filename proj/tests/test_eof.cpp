#include <doctest.h>

#include <cmath>
#include <functional>

#include "entloss/channels.hpp"
#include "entloss/entropy.hpp"
#include "entloss/eof.hpp"
#include "entloss/qcore.hpp"
#include "entloss/rng.hpp"

using namespace entloss;

namespace {

bool throws_code(ErrorCode expected, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code() == expected;
  }
  return false;
}

DensityMatrix isotropic(int d, double eps) {
  PureBipartiteState phi = maximally_entangled(d);
  CMatrix m = (1.0 - eps) * (phi.vec() * phi.vec().adjoint()) +
              (eps / (d * d)) * CMatrix::Identity(d * d, d * d);
  return DensityMatrix(m, {d, d});
}

// p |phi+><phi+| + (1-p) |psi-><psi->, Bell diagonal with concurrence 2p-1.
DensityMatrix bell_diagonal(double p) {
  CVector phi_plus(4);
  phi_plus << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  CVector psi_minus(4);
  psi_minus << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  CMatrix m = p * (phi_plus * phi_plus.adjoint()) +
              (1.0 - p) * (psi_minus * psi_minus.adjoint());
  return DensityMatrix(m, {2, 2});
}

} // namespace

TEST_CASE("pure state entanglement") {
  CHECK(std::abs(pure_entanglement(maximally_entangled(2)) - 1.0) < 1e-12);
  CHECK(std::abs(pure_entanglement(maximally_entangled(3)) - std::log2(3.0)) <
        1e-12);
  PureBipartiteState product(kron(basis_vector(2, 0), basis_vector(2, 1)), 2,
                             2);
  CHECK(pure_entanglement(product) < 1e-12);
}

TEST_CASE("wootters closed form on bell-diagonal states") {
  // Largest eigenvalue 0.75 gives concurrence 0.5. The input is rank
  // deficient, so the square roots of the spin-flip eigenvalues carry
  // sqrt(machine epsilon)-scale noise; 1e-8 is the realistic accuracy.
  DensityMatrix tau = bell_diagonal(0.75);
  CHECK(std::abs(wootters_eof(tau) - 0.35457890266527003) < 1e-8);
  // Concurrence 0 at the separability threshold.
  CHECK(wootters_eof(bell_diagonal(0.5)) < 1e-12);
  // Pure Bell state.
  CHECK(std::abs(wootters_eof(maximally_entangled(2).density()) - 1.0) <
        1e-12);
  // Isotropic eps = 0.2: concurrence 1 - 3 eps / 2 = 0.7.
  CHECK(std::abs(wootters_eof(isotropic(2, 0.2)) - 0.5918574071706773) <
        1e-12);
  CHECK(throws_code(ErrorCode::dim_mismatch,
                    [] { wootters_eof(maximally_mixed(4)); }));
}

TEST_CASE("variational estimate matches the closed form") {
  EofConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 3;
  CHECK(std::abs(eof(bell_diagonal(0.75), cfg).value - 0.35457890266527003) <
        1e-6);
  CHECK(std::abs(eof(isotropic(2, 0.2), cfg).value - 0.5918574071706773) <
        1e-6);
  CHECK(eof(bell_diagonal(0.5), cfg).value < 1e-6);
  // Classically correlated separable state.
  CVector e00 = kron(basis_vector(2, 0), basis_vector(2, 0));
  CVector e11 = kron(basis_vector(2, 1), basis_vector(2, 1));
  DensityMatrix cc(0.5 * (e00 * e00.adjoint() + e11 * e11.adjoint()), {2, 2});
  CHECK(eof(cc, cfg).value < 1e-7);
  // Rank-1 shortcut.
  EofResult pure = eof(maximally_entangled(3).density(), cfg);
  CHECK(std::abs(pure.value - std::log2(3.0)) < 1e-12);
  CHECK(pure.decomposition.weights.size() == 1);
}

TEST_CASE("variational estimate never exceeds the marginal entropies") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    DensityMatrix tau = random_state({2, 3}, 3, 1000 + seed);
    EofConfig cfg;
    cfg.restarts = 6;
    cfg.seed = seed;
    double value = eof(tau, cfg).value;
    double s_a = von_neumann_entropy(partial_trace(tau, {0}));
    double s_b = von_neumann_entropy(partial_trace(tau, {1}));
    CHECK(value <= std::min(s_a, s_b) + 1e-9);
    CHECK(value >= -1e-12);
  }
}

TEST_CASE("decomposition is self-consistent") {
  DensityMatrix tau = random_state({2, 2}, 3, 77);
  EofConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 5;
  EofResult res = eof(tau, cfg);
  double wsum = 0.0;
  double avg = 0.0;
  CMatrix rebuilt = CMatrix::Zero(4, 4);
  REQUIRE(res.decomposition.weights.size() ==
          res.decomposition.states.size());
  for (std::size_t i = 0; i < res.decomposition.weights.size(); ++i) {
    double w = res.decomposition.weights[i];
    const CVector& v = res.decomposition.states[i];
    CHECK(w > 0.0);
    CHECK(std::abs(v.norm() - 1.0) < 1e-9);
    wsum += w;
    avg += w * pure_entanglement(PureBipartiteState(v, 2, 2));
    rebuilt += w * (v * v.adjoint());
  }
  CHECK(std::abs(wsum - 1.0) < 1e-9);
  CHECK(std::abs(avg - res.value) < 1e-9);
  CHECK((rebuilt - tau.mat()).norm() < 1e-7);
}

TEST_CASE("variational value upper-bounds the two-qubit closed form") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    DensityMatrix tau = random_state({2, 2}, 2 + seed % 3, 2000 + seed);
    EofConfig cfg;
    cfg.restarts = 8;
    cfg.seed = seed;
    double est = eof(tau, cfg).value;
    double exact = wootters_eof(tau);
    CHECK(est >= exact - 1e-7);  // one-sided estimator
    CHECK(est <= exact + 1e-4);  // and it should get close
  }
}

TEST_CASE("convexity spot check") {
  DensityMatrix t1 = bell_diagonal(0.9);
  DensityMatrix t2 = isotropic(2, 0.5);
  double lambda = 0.3;
  DensityMatrix mix(lambda * t1.mat() + (1.0 - lambda) * t2.mat(), {2, 2});
  EofConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 11;
  CHECK(eof(mix, cfg).value <= lambda * eof(t1, cfg).value +
                                   (1.0 - lambda) * eof(t2, cfg).value +
                                   1e-5);
}

TEST_CASE("objective gradient agrees with finite differences") {
  DensityMatrix tau = random_state({2, 2}, 3, 123);
  EighResult eig = eigh(tau.mat());
  // Columns sqrt(lambda_j) e_j for the live spectrum, descending.
  int rank = 0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > 1e-12) {
      ++rank;
    }
  }
  CMatrix basis(4, rank);
  for (int j = 0; j < rank; ++j) {
    int src = static_cast<int>(eig.eigenvalues.size()) - 1 - j;
    basis.col(j) =
        std::sqrt(eig.eigenvalues[src]) * eig.eigenvectors.col(src);
  }
  Rng rng(9);
  int members = rank + 2;
  CMatrix u = rng.haar_isometry(members, rank);
  double f0 = eof_detail::average_entanglement(u, basis, 2, 2);
  CHECK(f0 > 0.0);
  CMatrix grad = eof_detail::average_entanglement_gradient(u, basis, 2, 2);

  Rng dir_rng(13);
  double h = 1e-6;
  for (int trial = 0; trial < 3; ++trial) {
    CMatrix v = dir_rng.gaussian_matrix(members, rank);
    v /= v.norm();
    double fp = eof_detail::average_entanglement(u + h * v, basis, 2, 2);
    double fm = eof_detail::average_entanglement(u - h * v, basis, 2, 2);
    double numeric = (fp - fm) / (2.0 * h);
    double analytic = (grad.adjoint() * v).trace().real();
    CHECK(std::abs(numeric - analytic) <
          1e-4 * std::max(1.0, std::abs(numeric)));
  }
}

TEST_CASE("eof input validation") {
  CHECK(throws_code(ErrorCode::dim_mismatch,
                    [] { eof(maximally_mixed(4)); }));
  CHECK(throws_code(ErrorCode::dim_too_large,
                    [] { eof(random_state({4, 3}, 2, 9)); }));
  DensityMatrix tau = random_state({2, 2}, 2, 10);
  EofConfig bad;
  bad.ensemble_size = 1;  // below the rank
  CHECK(throws_code(ErrorCode::bad_param, [&] { eof(tau, bad); }));
}
