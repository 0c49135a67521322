#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entloss/bounds.hpp"
#include "entloss/channels.hpp"
#include "entloss/entropy.hpp"
#include "entloss/eof.hpp"
#include "entloss/qcore.hpp"
#include "entloss/recovery.hpp"
#include "entloss/types.hpp"

namespace entloss {

struct DiamondConfig {
  int restarts = 64;
  int max_iter = 300;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

// Lower estimate of the stabilized (diamond) distance between two channels,
// from alternating ascent over pure inputs on reference (x) input.
struct DiamondEstimate {
  double lower = 0.0;
  CVector achieving_input;  // pure state on R (x) A, dim R = dim A
  int restarts_used = 0;
  bool converged = false;
};

DiamondEstimate diamond_distance(const KrausChannel& a, const KrausChannel& b,
                                 const DiamondConfig& cfg = {});

struct QcbConfig {
  int outer_rounds = 12;
  int outer_restarts = 2;
  int descent_iters = 60;
  double tol = 1e-9;
  DiamondConfig inner{12, 150, 1e-9, 0};    // best response during the search
  DiamondConfig final_eval{64, 300, 1e-9, 0};  // best response for the result
  std::uint64_t seed = 0;
};

// Proxy upper estimate of the recovery-optimized stabilized distance
// min_R d(R o N, id): alternating best-response / recovery-descent rounds,
// reported as the full best response against the best recovery found.
struct QcbEstimate {
  double value = 0.0;
  KrausChannel recovery;
  int rounds_used = 0;
};

QcbEstimate q_cb(const KrausChannel& ch, const QcbConfig& cfg = {});

struct BigDeltaConfig {
  int restarts = 16;
  int max_evals = 300;
  std::uint64_t seed = 0;
  EofConfig search_eof{6, 500, 1e-7, 0, 0};  // inner budget while searching
  EofConfig final_eof{};                     // budget for the winner
};

// Lower estimate of the worst-case (input-maximized) entanglement loss of a
// channel, by stochastic ascent over purifications of the input state.
struct BigDeltaEstimate {
  double lower = 0.0;
  CVector witness;  // purification on R (x) A achieving the estimate
};

BigDeltaEstimate big_delta(const KrausChannel& ch, LossTag kind,
                           const BigDeltaConfig& cfg = {});

struct BigPhiConfig {
  int restarts = 8;
  int max_evals = 80;
  std::uint64_t seed = 0;
  RecoveryConfig search{4, 200, 1e-8, 0, false};  // inner recovery budget
  RecoveryConfig refine{};                        // budget for the winner
};

// Estimate of the input-minimized recovered entanglement fidelity
// inf_rho max_R F_e(rho, R o N), by stochastic descent over purifications.
struct BigPhiEstimate {
  double lower = 0.0;
  CVector witness;
  KrausChannel recovery;
};

BigPhiEstimate big_phi(const KrausChannel& ch, const BigPhiConfig& cfg = {});

struct Theorem3Config {
  DiamondConfig diamond{};
  int restarts = 32;
  int max_evals = 300;
  double tolerance = 1e-7;
  std::uint64_t seed = 0;
};

// Continuity checks between worst-case entanglement fidelity and the
// stabilized distance from the identity, for channels with equal input and
// output dimension. Both sides are themselves one-sided estimates, so
// violations are recorded as conditional rather than fail.
struct Theorem3Result {
  double worst_fidelity = 1.0;
  CVector witness;
  DiamondEstimate distance;
  BoundCheckRecord part_a;  // 1 - inf F_e <= 4 sqrt(d(N, id))
  BoundCheckRecord part_b;  // d(N, id) <= 4 sqrt(1 - inf F_e)
};

Theorem3Result verify_theorem3(const KrausChannel& ch,
                               const Theorem3Config& cfg = {},
                               const std::string& instance = "");

struct FinalBoundsConfig {
  QcbConfig qcb{};
  BigDeltaConfig delta{};
  double tolerance = 1e-7;
};

// The two ends of the bound chain linking worst-case loss and the
// recovery-optimized distance. part_a is skipped when the rate-function
// argument 4*sqrt(q_cb) leaves (0, 1/2]; a definite part_a violation is a
// hard failure.
struct FinalBoundsResult {
  double qcb_value = 0.0;
  double delta_value = 0.0;
  BoundCheckRecord part_a;  // Delta_x <= g(4 sqrt(q_cb))
  BoundCheckRecord part_b;  // q_cb <= 4 (2 K_x Delta_x)^(1/4)
};

FinalBoundsResult verify_final_bounds(const KrausChannel& ch, LossTag kind,
                                      const FinalBoundsConfig& cfg = {},
                                      const std::string& instance = "");

// Assemble the two bound-chain records from precomputed estimates, so a
// caller that already holds q_cb / big_delta values does not recompute them.
std::pair<BoundCheckRecord, BoundCheckRecord> final_bound_records(
    int dim_a, int dim_b, LossTag kind, double qcb_value, double delta_value,
    double tolerance, const std::string& instance);

// Summary of every per-channel quantity the toolkit can certify, used by the
// report command. `bounds` holds the continuity and bound-chain records
// evaluated on this channel (and state, when one is supplied).
struct ChannelReport {
  std::string channel_descriptor;
  double q_cb_upper = 0.0;
  double delta_c_lower = 0.0;
  double delta_f_lower = 0.0;
  double phi_lower = 0.0;
  std::vector<BoundCheckRecord> bounds;
};

} // namespace entloss
