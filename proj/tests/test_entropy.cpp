#include <doctest.h>

#include <cmath>
#include <functional>

#include "entloss/channels.hpp"
#include "entloss/entropy.hpp"
#include "entloss/qcore.hpp"

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

// (1 - eps) |phi><phi| + eps I/d^2 on d (x) d.
DensityMatrix isotropic(int d, double eps) {
  PureBipartiteState phi = maximally_entangled(d);
  CMatrix m = (1.0 - eps) * (phi.vec() * phi.vec().adjoint()) +
              (eps / (d * d)) * CMatrix::Identity(d * d, d * d);
  return DensityMatrix(m, {d, d});
}

} // namespace

TEST_CASE("entropy spot values") {
  CHECK(std::abs(binary_entropy(0.3) - 0.8812908992306927) < 1e-14);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.5) - 1.0) < 1e-14);

  RVector spec(3);
  spec << 0.5, 0.3, 0.2;
  CHECK(std::abs(entropy_of_spectrum(spec) - 1.4854752972273344) < 1e-13);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  CHECK(std::abs(von_neumann_entropy(DensityMatrix(diag, {2})) -
                 0.8812908992306927) < 1e-13);

  CHECK(std::abs(von_neumann_entropy(maximally_mixed(3)) - std::log2(3.0)) <
        1e-13);
  CHECK(von_neumann_entropy(maximally_entangled(2).density()) < 1e-12);
}

TEST_CASE("coherent and mutual information on the isotropic family") {
  DensityMatrix tau = isotropic(2, 0.2);
  CHECK(std::abs(coherent_information(tau, Direction::a_to_b) -
                 0.15241532017542614) < 1e-12);
  CHECK(std::abs(coherent_information(tau, Direction::b_to_a) -
                 0.15241532017542614) < 1e-12);
  CHECK(std::abs(mutual_information(tau) - 1.1524153201754261) < 1e-12);

  // Pure maximally entangled: I_c = log2 d, I = 2 log2 d.
  DensityMatrix phi = maximally_entangled(3).density();
  CHECK(std::abs(coherent_information(phi, Direction::a_to_b) -
                 std::log2(3.0)) < 1e-12);
  CHECK(std::abs(mutual_information(phi) - 2.0 * std::log2(3.0)) < 1e-12);

  // Product state: both vanish.
  DensityMatrix prod(
      kron(maximally_mixed(2).mat(), maximally_mixed(2).mat()), {2, 2});
  CHECK(std::abs(coherent_information(prod, Direction::a_to_b) + 1.0) < 1e-12);
  CHECK(std::abs(mutual_information(prod)) < 1e-12);
}

TEST_CASE("direction matters on asymmetric states") {
  // |0><0| (x) I/2: S_A = 0, S_B = 1, S_AB = 1.
  CVector zero = basis_vector(2, 0);
  DensityMatrix tau(kron(zero * zero.adjoint(), maximally_mixed(2).mat()),
                    {2, 2});
  // A -> B: S_B - S_AB = 0; B -> A: S_A - S_AB = -1.
  CHECK(std::abs(coherent_information(tau, Direction::a_to_b)) < 1e-12);
  CHECK(std::abs(coherent_information(tau, Direction::b_to_a) + 1.0) < 1e-12);
}

TEST_CASE("channel losses match closed forms") {
  DensityMatrix mm = maximally_mixed(2);
  CHECK(std::abs(delta_c(mm, depolarizing_channel(1.0, 2)) - 2.0) < 1e-9);
  CHECK(std::abs(delta_c(mm, dephasing_channel(0.5)) - 1.0) < 1e-9);
  CHECK(std::abs(delta_c(mm, identity_channel(2))) < 1e-9);
  CHECK(std::abs(channel_coherent_information(mm, identity_channel(2)) - 1.0) <
        1e-12);
}

TEST_CASE("state-level losses") {
  // Pure bipartite states have zero formation loss on the smaller side.
  DensityMatrix phi = maximally_entangled(2).density();
  CHECK(std::abs(delta_x_state(phi, LossKind::make(LossTag::formation, 2, 2),
                               Direction::a_to_b)) < 1e-6);
  CHECK(std::abs(delta_c_state(phi, Direction::a_to_b)) < 1e-9);
  CHECK(throws_code(ErrorCode::not_computable, [&] {
    delta_x_state(phi, LossKind::make(LossTag::squashed, 2, 2),
                  Direction::a_to_b);
  }));
}

TEST_CASE("loss kind constants") {
  CHECK(LossKind::make(LossTag::coherent, 3, 3).k_constant == 1.0);
  CHECK(LossKind::make(LossTag::squashed, 3, 3).k_constant == 2.0);
  CHECK(LossKind::make(LossTag::formation, 2, 2).k_constant == 49.0);
  CHECK(LossKind::make(LossTag::formation, 2, 3).k_constant == 121.0);
  CHECK(LossKind::make(LossTag::formation, 3, 3).k_constant == 289.0);
}

TEST_CASE("measure computability flags") {
  CHECK(measure_is_computable(MeasureId::formation));
  CHECK(measure_is_computable(MeasureId::coherent));
  CHECK(measure_is_computable(MeasureId::mutual_half));
  CHECK_FALSE(measure_is_computable(MeasureId::squashed));
  CHECK_FALSE(measure_is_computable(MeasureId::distillable));
  CHECK_FALSE(measure_is_computable(MeasureId::key));
}
