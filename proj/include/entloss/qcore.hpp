#pragma once

#include <vector>

#include "entloss/types.hpp"

namespace entloss {

// Validated density operator together with its tensor-factor dimensions.
// Construction symmetrizes small Hermitian drift and rejects matrices that
// are not Hermitian / trace-one / positive within the documented tolerances.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix mat, std::vector<int> dims);

  const CMatrix& mat() const { return mat_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  int dim_at(std::size_t idx) const;

  // Same operator viewed with a different factorization of the same total
  // dimension (e.g. reinterpret a 4x4 as 2 (x) 2).
  DensityMatrix reshaped(std::vector<int> dims) const;

 private:
  CMatrix mat_;
  std::vector<int> dims_;
};

// Unit vector on A (x) B with the split recorded. Index convention:
// component (a, b) lives at a * dim_b + b.
class PureBipartiteState {
 public:
  PureBipartiteState(CVector vec, int dim_a, int dim_b);

  const CVector& vec() const { return vec_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }

  // View of the amplitudes as a dim_a x dim_b matrix M(a,b) = vec[a*dB+b].
  CMatrix amplitude_matrix() const;
  DensityMatrix density() const;
  DensityMatrix reduced_a() const;
  DensityMatrix reduced_b() const;
  // Schmidt coefficients, descending, squared values sum to 1.
  RVector schmidt_coefficients() const;

 private:
  CVector vec_;
  int dim_a_;
  int dim_b_;
};

struct EighResult {
  RVector eigenvalues; // ascending
  CMatrix eigenvectors; // column i pairs with eigenvalues[i]
};

// Hermitian eigendecomposition. Rejects inputs whose anti-Hermitian part
// exceeds the hermiticity tolerance; the accepted input is symmetrized as
// (M + M^dag)/2 before solving, and the reconstruction V L V^dag is checked
// against the symmetrized input.
EighResult eigh(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tolerance = tol::hermiticity);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Partial trace over the complement of `keep`. `dims` are the tensor-factor
// dimensions of `m` (product must match its size); `keep` lists subsystem
// indices to retain, in their original order.
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

// Canonical purification: rho = sum_i l_i |e_i><e_i| maps to
// sum_i sqrt(l_i) |i>_R (x) |e_i>_A with dim(R) = dim(rho); the reference
// system is the first tensor factor of the result.
PureBipartiteState purify(const DensityMatrix& rho);

// Sum of singular values. Square matrices only.
double trace_norm(const CMatrix& m);

// Convenience constructors.
DensityMatrix maximally_mixed(int dim);
PureBipartiteState maximally_entangled(int dim);
CVector basis_vector(int dim, int index);

} // namespace entloss
