#pragma once

#include <cstdint>
#include <vector>

#include "entloss/qcore.hpp"
#include "entloss/types.hpp"

namespace entloss {

struct EofConfig {
  int restarts = 32;
  int max_iter = 2000;
  double tol = 1e-8;
  // Number of pure states in the trial ensemble. 0 picks rank^2, capped at
  // the squared total dimension.
  int ensemble_size = 0;
  std::uint64_t seed = 0;
};

struct EnsembleDecomposition {
  std::vector<double> weights;       // convex weights, sum 1
  std::vector<CVector> states;       // unit vectors on the bipartite space
};

struct EofResult {
  double value = 0.0;                // best average entanglement found
  EnsembleDecomposition decomposition;
  int restarts_used = 0;
  bool converged = false;
};

// Entropy of entanglement of a bipartite pure state: the von Neumann
// entropy of either reduced state (base 2).
double pure_entanglement(const PureBipartiteState& psi);

// Variational upper estimate of the entanglement of formation of a
// bipartite state: minimum average pure-state entanglement over ensemble
// decompositions, searched by multi-start Riemannian descent over the
// isometries that parameterize all size-m decompositions. Total dimension
// is capped at 9.
EofResult eof(const DensityMatrix& tau, const EofConfig& cfg = {});

// Closed-form two-qubit entanglement of formation via the concurrence.
double wootters_eof(const DensityMatrix& tau);

namespace eof_detail {

// Objective and ambient gradient used by eof(), exposed for testing.
// basis holds columns sqrt(lambda_j) * e_j of the eigendecomposition; a
// trial decomposition is psi_i = sum_j u(i,j) basis_j.
double average_entanglement(const CMatrix& u, const CMatrix& basis,
                            int dim_a, int dim_b);
CMatrix average_entanglement_gradient(const CMatrix& u, const CMatrix& basis,
                                      int dim_a, int dim_b);

} // namespace eof_detail

} // namespace entloss
