#pragma once

#include "entloss/channels.hpp"
#include "entloss/qcore.hpp"

namespace entloss {

enum class Direction { a_to_b, b_to_a };

// Which loss quantity a bound refers to, together with the dimension factor
// that enters the reconstruction inequalities.
enum class LossTag { coherent, formation, squashed };

struct LossKind {
  LossTag tag;
  double k_constant;

  static LossKind make(LossTag tag, int dim_a, int dim_b);
};

// Entanglement / information measures referenced by the bound chain. Only
// the last three are computable by this toolkit.
enum class MeasureId {
  distillable,
  key,
  squashed,
  relative_entropy,
  cost,
  formation,
  coherent,
  mutual_half,
};

bool measure_is_computable(MeasureId id);
const char* measure_name(MeasureId id);

// -x log2(x) - (1-x) log2(1-x), with 0 log 0 = 0.
double binary_entropy(double x);

// Entropy of a spectrum in bits; negative values are clipped to zero before
// the logarithm.
double entropy_of_spectrum(const RVector& eigenvalues);

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const CMatrix& rho);

// Coherent information of a bipartite state: S(tau_out) - S(tau_AB), where
// tau_out is the target-side marginal of the chosen direction.
double coherent_information(const DensityMatrix& tau,
                            Direction dir = Direction::a_to_b);

// I_c(rho, N) = S(sigma_B) - S(sigma_RB) with sigma_RB = (id (x) N) applied
// to a purification of rho.
double channel_coherent_information(const DensityMatrix& rho,
                                    const KrausChannel& ch);

// Coherent-information loss S(rho) - I_c(rho, N). Values in [-loss_clip, 0)
// are clipped to 0; anything more negative raises internal_inconsistency.
double delta_c(const DensityMatrix& rho, const KrausChannel& ch);

// State-level coherent-information loss S(tau_src) - I_c(tau).
double delta_c_state(const DensityMatrix& tau, Direction dir = Direction::a_to_b);

double mutual_information(const DensityMatrix& tau);

// State-level loss for the given kind: coherent uses delta_c_state,
// formation uses S(tau_src) - E_f(tau) (variational), squashed is refused
// with not_computable.
double delta_x_state(const DensityMatrix& tau, const LossKind& kind,
                     Direction dir = Direction::a_to_b);

} // namespace entloss
