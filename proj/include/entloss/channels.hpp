#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entloss/qcore.hpp"

namespace entloss {

// Completely positive trace-preserving map in Kraus form. Construction
// validates sum_k A_k^dag A_k = I within the trace-preservation tolerance and
// re-factorizes through the Choi matrix whenever more than dim_a*dim_b
// operators are supplied, so the operator count stays at the Choi rank bound.
class KrausChannel {
 public:
  KrausChannel(int dim_a, int dim_b, std::vector<CMatrix> ops);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<CMatrix>& ops() const { return ops_; }

 private:
  int dim_a_;
  int dim_b_;
  std::vector<CMatrix> ops_;
};

// Choi operator (id (x) N)(Omega) with the unnormalized maximally entangled
// Omega = sum_ij |ii><jj|; trace equals dim_a, Tr_B gives I_A.
class ChoiMatrix {
 public:
  ChoiMatrix(int dim_a, int dim_b, CMatrix mat);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const CMatrix& mat() const { return mat_; }

 private:
  int dim_a_;
  int dim_b_;
  CMatrix mat_;
};

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

// (id_R (x) N) acting on the second factor of a pure state on R (x) A.
DensityMatrix apply_to_subsystem(const KrausChannel& ch,
                                 const PureBipartiteState& psi);

// Sequential composition: result(rho) = outer(inner(rho)).
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

ChoiMatrix kraus_to_choi(const KrausChannel& ch);
KrausChannel choi_to_kraus(const ChoiMatrix& choi);

// Named channel families.
KrausChannel identity_channel(int dim);
KrausChannel unitary_channel(const CMatrix& u);
KrausChannel depolarizing_channel(double p, int dim);
KrausChannel dephasing_channel(double p, int dim = 2);
KrausChannel amplitude_damping_channel(double gamma);
// Embedding erasure: keeps the input with probability 1-p inside a space one
// dimension larger, else replaces it with the orthogonal flag state.
KrausChannel erasure_channel(double p, int dim);
KrausChannel replace_channel(const DensityMatrix& sigma, int dim_a);

// String-dispatched factory used by the CLI / C API; see the README for the
// accepted names and parameters. Unknown names raise unknown_channel and bad
// parameter values raise bad_param.
KrausChannel channel_zoo(const std::string& name,
                         const std::string& params_json);

// Haar-Stinespring random channel: a Haar isometry A -> B (x) E with
// dim(E) = rank, environment traced out.
KrausChannel random_channel(int dim_a, int dim_b, int rank,
                            std::uint64_t seed);

// Induced-measure random state: partial trace over a rank-dimensional
// ancilla of a Haar-random pure state.
DensityMatrix random_state(const std::vector<int>& dims, int rank,
                           std::uint64_t seed);

// JSON round-trip. Schema: {"dimA": int, "dimB": int, "kraus": [op...]},
// with each operator a row-major array of [re, im] pairs.
std::string channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const std::string& text);
std::string choi_to_json(const ChoiMatrix& choi);
ChoiMatrix choi_from_json(const std::string& text);
std::string state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const std::string& text);

} // namespace entloss
