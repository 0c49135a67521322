#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "entloss/channels.hpp"
#include "entloss/qcore.hpp"
#include "entloss/rng.hpp"
#include "entloss/types.hpp"

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

} // namespace

TEST_CASE("density matrix validation") {
  CMatrix ok(2, 2);
  ok << 0.7, 0.0, 0.0, 0.3;
  CHECK_NOTHROW(DensityMatrix(ok, {2}));

  CMatrix not_herm(2, 2);
  not_herm << 0.5, 0.3, -0.3, 0.5;
  CHECK(throws_code(ErrorCode::not_hermitian,
                    [&] { DensityMatrix(not_herm, {2}); }));

  CMatrix bad_trace = 2.0 * ok;
  CHECK(throws_code(ErrorCode::not_normalized,
                    [&] { DensityMatrix(bad_trace, {2}); }));

  CMatrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  CHECK(throws_code(ErrorCode::not_positive, [&] { DensityMatrix(neg, {2}); }));

  CHECK(throws_code(ErrorCode::dim_mismatch,
                    [&] { DensityMatrix(ok, {3}); }));
}

TEST_CASE("density matrix reshaping") {
  DensityMatrix rho = maximally_mixed(4);
  DensityMatrix pair = rho.reshaped({2, 2});
  CHECK(pair.dims().size() == 2);
  CHECK(pair.dim_at(0) == 2);
  CHECK(pair.dim_at(1) == 2);
  CHECK(throws_code(ErrorCode::dim_mismatch, [&] { rho.reshaped({3, 2}); }));
}

TEST_CASE("eigh returns ascending eigenvalues and reconstructs") {
  Rng rng(7);
  CMatrix g = rng.gaussian_matrix(4, 4);
  CMatrix h = g + g.adjoint();
  EighResult res = eigh(h);
  for (int i = 1; i < res.eigenvalues.size(); ++i) {
    CHECK(res.eigenvalues[i] >= res.eigenvalues[i - 1]);
  }
  CMatrix rebuilt = res.eigenvectors *
                    res.eigenvalues.asDiagonal().toDenseMatrix().cast<complexd>() *
                    res.eigenvectors.adjoint();
  CHECK((rebuilt - h).norm() < 1e-9);

  CMatrix skew = g - g.adjoint() + CMatrix::Identity(4, 4);
  CHECK(throws_code(ErrorCode::not_hermitian, [&] { eigh(skew); }));
}

TEST_CASE("kron dimensions and a spot value") {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  CMatrix b = CMatrix::Identity(3, 3);
  CMatrix k = kron(a, b);
  CHECK(k.rows() == 6);
  CHECK(k.cols() == 6);
  CHECK(k(0, 0) == complexd(1.0, 0.0));
  CHECK(k(0, 3) == complexd(2.0, 0.0));
  CHECK(k(5, 5) == complexd(4.0, 0.0));
  CHECK(k(0, 1) == complexd(0.0, 0.0));
}

// Manual 2x3 contraction cross-check for both subsystems.
TEST_CASE("partial trace on a 2x3 system") {
  Rng rng(11);
  CMatrix g = rng.gaussian_matrix(6, 6);
  CMatrix m = g * g.adjoint();
  m /= m.trace();

  CMatrix a = partial_trace(m, {2, 3}, {0});
  CMatrix b = partial_trace(m, {2, 3}, {1});
  CHECK(a.rows() == 2);
  CHECK(b.rows() == 3);

  CMatrix a_manual = CMatrix::Zero(2, 2);
  CMatrix b_manual = CMatrix::Zero(3, 3);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 3; ++k) {
        a_manual(i, j) += m(i * 3 + k, j * 3 + k);
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 2; ++k) {
        b_manual(i, j) += m(k * 3 + i, k * 3 + j);
      }
    }
  }
  CHECK((a - a_manual).norm() < 1e-12);
  CHECK((b - b_manual).norm() < 1e-12);
  CHECK(std::abs(a.trace() - complexd(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(b.trace() - complexd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("purification reduces back to the state") {
  DensityMatrix rho = random_state({3}, 2, 99);
  PureBipartiteState psi = purify(rho);
  CHECK(psi.dim_a() == 3);
  CHECK(psi.dim_b() == 3);
  // The original state lives on the second factor.
  CHECK((psi.reduced_b().mat() - rho.mat()).norm() < tol::purify_roundtrip);
  // Both reduced states share a spectrum.
  EighResult ra = eigh(psi.reduced_a().mat());
  EighResult rb = eigh(psi.reduced_b().mat());
  CHECK((ra.eigenvalues - rb.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("maximally entangled state has flat Schmidt spectrum") {
  PureBipartiteState phi = maximally_entangled(3);
  RVector s = phi.schmidt_coefficients();
  CHECK(s.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(s[i] - 1.0 / std::sqrt(3.0)) < 1e-12);
  }
  CHECK((phi.reduced_a().mat() - maximally_mixed(3).mat()).norm() < 1e-12);
}

TEST_CASE("trace norm of a pure-state difference") {
  CVector zero = basis_vector(2, 0);
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CMatrix diff = zero * zero.adjoint() - plus * plus.adjoint();
  CHECK(std::abs(trace_norm(diff) - std::sqrt(2.0)) < 1e-12);
  CHECK(throws_code(ErrorCode::not_square,
                    [&] { trace_norm(CMatrix::Zero(2, 3)); }));
}

TEST_CASE("rng is deterministic and seed-sensitive") {
  Rng a(42);
  Rng b(42);
  Rng c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 64; ++i) {
    double x = a.uniform();
    all_equal = all_equal && (x == b.uniform());
    any_differ = any_differ || (x != c.uniform());
  }
  CHECK(all_equal);
  CHECK(any_differ);
  CHECK(Rng::mix(1, 2) != Rng::mix(2, 1));
  CHECK(Rng::mix(1, 2) == Rng::mix(1, 2));
}

TEST_CASE("haar isometry is an isometry and deterministic") {
  Rng rng(5);
  CMatrix v = rng.haar_isometry(6, 3);
  CHECK(v.rows() == 6);
  CHECK(v.cols() == 3);
  CHECK((v.adjoint() * v - CMatrix::Identity(3, 3)).norm() < 1e-12);

  Rng rng2(5);
  CMatrix w = rng2.haar_isometry(6, 3);
  CHECK((v - w).norm() == 0.0);
}

TEST_CASE("basis vector bounds") {
  CVector e = basis_vector(3, 2);
  CHECK(e[2] == complexd(1.0, 0.0));
  CHECK(e.norm() == 1.0);
  CHECK(throws_code(ErrorCode::index_out_of_range,
                    [&] { basis_vector(3, 3); }));
}
