#pragma once

#include <functional>

#include "entloss/types.hpp"

namespace entloss::stiefel {

// Minimization over matrices with orthonormal columns (complex Stiefel
// manifold). The objective receives the current point and, when grad is
// non-null, must fill it with the ambient (Euclidean) gradient for the
// real inner product Re Tr[X^dag Y].
using Objective = std::function<double(const CMatrix& u, CMatrix* grad)>;

struct Options {
  int max_iter = 500;
  double tol = 1e-9;     // objective improvement per sweep
  int sweep = 10;        // iterations per convergence window
  double init_step = 1.0;
};

struct Outcome {
  double value = 0.0;
  CMatrix point;
  int iterations = 0;
  bool converged = false;
};

// Project an ambient direction onto the tangent space at u.
CMatrix tangent_project(const CMatrix& u, const CMatrix& ambient);

// Thin-QR retraction with the phase gauge fixed so the map is deterministic.
CMatrix retract(const CMatrix& u, const CMatrix& step);

// Monotone descent: projected gradient with a Barzilai-Borwein step guess
// and Armijo backtracking.
Outcome minimize(const Objective& objective, CMatrix u0, const Options& opt);

} // namespace entloss::stiefel
