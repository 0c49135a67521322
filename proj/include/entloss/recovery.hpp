#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entloss/channels.hpp"
#include "entloss/qcore.hpp"
#include "entloss/types.hpp"

namespace entloss {

struct RecoveryConfig {
  int restarts = 16;
  int max_iter = 400;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  // When set, every candidate fidelity evaluated during the search is
  // appended to RecoveryResult::tried_fidelities.
  bool record_trace = false;
};

struct RecoveryResult {
  KrausChannel channel;          // recovery map, output side -> input side
  double fidelity = 0.0;         // entanglement fidelity achieved
  std::string method;            // "transpose" or "optimized"
  int iterations = 0;
  std::vector<double> tried_fidelities;
};

// Entanglement fidelity of a channel on its own input space with respect
// to rho: F_e = sum_k |Tr(rho A_k)|^2.
double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& ch);

// The transpose (pretty-good) recovery map for (rho, ch), completed to a
// trace-preserving channel on the complement of the output support.
KrausChannel transpose_channel(const DensityMatrix& rho, const KrausChannel& ch);

// Search over recovery channels maximizing the entanglement fidelity of
// recovery-after-channel on rho. Seeded at the transpose channel, so the
// result is never worse than it (up to solver tolerance).
RecoveryResult optimize_recovery(const DensityMatrix& rho,
                                 const KrausChannel& ch,
                                 const RecoveryConfig& cfg = {});

// The entropy-rate function 4*x*log2(dim_a/x) on (0, 1/2], with g(0) = 0.
// Arguments outside [0, 1/2] are domain errors.
double g_eval(double x, int dim_a);

// Inverse of g_eval on [0, g(1/2)], by bisection.
double g_inverse(double y, int dim_a);

struct Fig2Point {
  double ef = 0.0;     // entanglement of formation of the target state
  double bound = 0.0;  // certified value floor
};

// Evaluate the distillation floor max{0, S_A - g(sqrt(2*K_f*(S_A - E_f)))}
// for a maximally entangled qutrit target (S_A = log2 3, K_f = 289) at the
// given E_f grid points.
std::vector<Fig2Point> fig2_curve(const std::vector<double>& ef_grid);

} // namespace entloss
