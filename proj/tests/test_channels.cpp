#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "entloss/channels.hpp"
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

double max_apply_difference(const KrausChannel& a, const KrausChannel& b,
                            std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    DensityMatrix rho = random_state({a.dim_a()}, a.dim_a(), Rng::mix(seed, i));
    worst = std::max(worst, (apply(a, rho).mat() - apply(b, rho).mat()).norm());
  }
  return worst;
}

} // namespace

TEST_CASE("kraus channels must be trace preserving") {
  std::vector<CMatrix> half = {0.5 * CMatrix::Identity(2, 2)};
  CHECK(throws_code(ErrorCode::not_cptp, [&] { KrausChannel(2, 2, half); }));
  std::vector<CMatrix> good = {CMatrix::Identity(2, 2)};
  CHECK_NOTHROW(KrausChannel(2, 2, good));
}

TEST_CASE("depolarizing acts as the convex mixture with the flat state") {
  for (double p : {0.0, 0.3, 1.0}) {
    KrausChannel ch = depolarizing_channel(p, 2);
    DensityMatrix rho = random_state({2}, 2, 17);
    CMatrix expected =
        (1.0 - p) * rho.mat() + p * 0.5 * CMatrix::Identity(2, 2);
    CHECK((apply(ch, rho).mat() - expected).norm() < 1e-12);
  }
  // The flat state is a fixed point for every strength.
  KrausChannel ch = depolarizing_channel(0.7, 3);
  CHECK((apply(ch, maximally_mixed(3)).mat() - maximally_mixed(3).mat())
            .norm() < 1e-12);
}

TEST_CASE("dephasing scales off-diagonals by 1 - 2p") {
  CMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  DensityMatrix rho(plus, {2});
  CMatrix quarter = apply(dephasing_channel(0.25), rho).mat();
  CHECK(std::abs(quarter(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(quarter(0, 1).real() - 0.25) < 1e-12);
  // p = 1/2 dephases completely.
  CMatrix half = apply(dephasing_channel(0.5), rho).mat();
  CHECK(std::abs(half(0, 1)) < 1e-12);
}

TEST_CASE("amplitude damping sends the excited state down") {
  KrausChannel ch = amplitude_damping_channel(1.0);
  CVector one = basis_vector(2, 1);
  DensityMatrix excited(one * one.adjoint(), {2});
  CMatrix out = apply(ch, excited).mat();
  CHECK(std::abs(out(0, 0).real() - 1.0) < 1e-12);
}

TEST_CASE("erasure and replace channels have the right shape") {
  KrausChannel er = erasure_channel(0.3, 2);
  CHECK(er.dim_a() == 2);
  CHECK(er.dim_b() == 3);
  DensityMatrix out = apply(er, maximally_mixed(2));
  CHECK(std::abs(out.mat()(2, 2).real() - 0.3) < 1e-12);

  DensityMatrix target = random_state({2}, 2, 23);
  KrausChannel rep = replace_channel(target, 2);
  DensityMatrix in = random_state({2}, 1, 29);
  CHECK((apply(rep, in).mat() - target.mat()).norm() < 1e-9);
}

TEST_CASE("composition matches sequential application") {
  KrausChannel first = amplitude_damping_channel(0.4);
  KrausChannel second = dephasing_channel(0.3);
  KrausChannel chained = compose(second, first);
  DensityMatrix rho = random_state({2}, 2, 31);
  CHECK((apply(chained, rho).mat() - apply(second, apply(first, rho)).mat())
            .norm() < 1e-12);
}

TEST_CASE("depolarizing composes by strength") {
  double p1 = 0.3;
  double p2 = 0.5;
  KrausChannel chained =
      compose(depolarizing_channel(p2, 2), depolarizing_channel(p1, 2));
  KrausChannel direct = depolarizing_channel(1.0 - (1.0 - p1) * (1.0 - p2), 2);
  CHECK(max_apply_difference(chained, direct, 37) < 1e-9);
}

TEST_CASE("choi round trip preserves the action") {
  KrausChannel ch = random_channel(2, 3, 4, 41);
  KrausChannel back = choi_to_kraus(kraus_to_choi(ch));
  CHECK(back.dim_a() == 2);
  CHECK(back.dim_b() == 3);
  CHECK(max_apply_difference(ch, back, 43) < 1e-9);
}

TEST_CASE("overcomplete kraus sets are refactored") {
  // Eight operators for a qubit channel: duplicated depolarizing set.
  KrausChannel dep = depolarizing_channel(0.6, 2);
  std::vector<CMatrix> ops;
  for (const CMatrix& k : dep.ops()) {
    ops.push_back(k / std::sqrt(2.0));
    ops.push_back(k / std::sqrt(2.0));
  }
  KrausChannel ch(2, 2, ops);
  CHECK(static_cast<int>(ch.ops().size()) <= 4);
  CHECK(max_apply_difference(ch, depolarizing_channel(0.6, 2), 47) < 1e-9);
}

TEST_CASE("apply to subsystem leaves the reference marginal alone") {
  KrausChannel ch = amplitude_damping_channel(0.8);
  DensityMatrix rho = random_state({2}, 2, 53);
  PureBipartiteState psi = purify(rho);
  DensityMatrix joint = apply_to_subsystem(ch, psi);
  CHECK(joint.dims().size() == 2);
  CHECK(joint.dim_at(0) == 2);
  CHECK(joint.dim_at(1) == 2);
  // Tracing out the channel output recovers the reference marginal.
  CHECK((partial_trace(joint, {0}).mat() - psi.reduced_a().mat()).norm() <
        1e-10);
  // Tracing out the reference gives the channel output.
  CHECK((partial_trace(joint, {1}).mat() - apply(ch, rho).mat()).norm() <
        1e-10);
}

TEST_CASE("apply to subsystem matches the direct unitary action") {
  CMatrix u(2, 2);
  u << complexd(0.0, 0.0), complexd(1.0, 0.0), complexd(0.0, 1.0),
      complexd(0.0, 0.0);
  KrausChannel ch = unitary_channel(u);
  PureBipartiteState phi = maximally_entangled(2);
  CMatrix big = kron(CMatrix::Identity(2, 2), u);
  CVector mapped = big * phi.vec();
  DensityMatrix expected(mapped * mapped.adjoint(), {2, 2});
  CHECK((apply_to_subsystem(ch, phi).mat() - expected.mat()).norm() < 1e-12);
}

TEST_CASE("random channels and states are valid and seed-deterministic") {
  KrausChannel a = random_channel(3, 2, 4, 61);
  KrausChannel b = random_channel(3, 2, 4, 61);
  KrausChannel c = random_channel(3, 2, 4, 62);
  CHECK(max_apply_difference(a, b, 67) == 0.0);
  CHECK(max_apply_difference(a, c, 67) > 1e-3);

  DensityMatrix s = random_state({2, 2}, 2, 71);
  DensityMatrix t = random_state({2, 2}, 2, 71);
  CHECK((s.mat() - t.mat()).norm() == 0.0);
  EighResult eig = eigh(s.mat());
  int live = 0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > 1e-12) {
      ++live;
    }
  }
  CHECK(live <= 2);

  CHECK(throws_code(ErrorCode::bad_param, [] { random_channel(3, 2, 1, 5); }));
}

TEST_CASE("channel zoo dispatch") {
  CHECK(channel_zoo("identity", R"({"d": 2})").dim_a() == 2);
  CHECK(channel_zoo("depolarizing", R"({"p": 0.5, "d": 3})").dim_b() == 3);
  CHECK(channel_zoo("erasure", R"({"p": 0.1, "d": 2})").dim_b() == 3);
  CHECK(throws_code(ErrorCode::unknown_channel,
                    [] { channel_zoo("nonsense", "{}"); }));
  CHECK(throws_code(ErrorCode::bad_param,
                    [] { channel_zoo("depolarizing", R"({"d": 2})"); }));
  CHECK(throws_code(ErrorCode::bad_param,
                    [] { channel_zoo("dephasing", R"({"p": 2.0})"); }));
}

TEST_CASE("channel json round trip") {
  KrausChannel ch = random_channel(2, 2, 3, 73);
  KrausChannel back = channel_from_json(channel_to_json(ch));
  CHECK(back.dim_a() == ch.dim_a());
  CHECK(max_apply_difference(ch, back, 79) < 1e-12);
  CHECK(throws_code(ErrorCode::parse_error,
                    [] { channel_from_json("not json"); }));
}

TEST_CASE("state json round trip") {
  DensityMatrix tau = random_state({2, 3}, 3, 83);
  DensityMatrix back = state_from_json(state_to_json(tau));
  CHECK(back.dims() == tau.dims());
  CHECK((back.mat() - tau.mat()).norm() < 1e-12);
}
