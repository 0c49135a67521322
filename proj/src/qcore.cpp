#include "entloss/qcore.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "entloss/rng.hpp"

namespace entloss {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::bad_arg: return "bad_arg";
    case ErrorCode::dim_mismatch: return "dim_mismatch";
    case ErrorCode::not_square: return "not_square";
    case ErrorCode::not_hermitian: return "not_hermitian";
    case ErrorCode::not_cptp: return "not_cptp";
    case ErrorCode::not_positive: return "not_positive";
    case ErrorCode::not_normalized: return "not_normalized";
    case ErrorCode::bad_param: return "bad_param";
    case ErrorCode::unknown_channel: return "unknown_channel";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::not_computable: return "not_computable";
    case ErrorCode::dim_too_large: return "dim_too_large";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::internal_inconsistency: return "internal_inconsistency";
  }
  return "unknown";
}

namespace {

int product_of(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    if (d < 1) fail(ErrorCode::bad_param, "tensor factor dimension must be >= 1");
    p *= d;
  }
  return p;
}

} // namespace

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

DensityMatrix::DensityMatrix(CMatrix mat, std::vector<int> dims)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
  if (mat_.rows() != mat_.cols())
    fail(ErrorCode::not_square, "density matrix must be square");
  if (product_of(dims_) != mat_.rows())
    fail(ErrorCode::dim_mismatch,
         "product of tensor dimensions does not match matrix size");
  if (!is_hermitian(mat_, tol::hermiticity))
    fail(ErrorCode::not_hermitian, "density matrix is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol::state_trace)
    fail(ErrorCode::not_normalized, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat_,
                                                Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::state_psd)
    fail(ErrorCode::not_positive, "density matrix has a negative eigenvalue");
}

int DensityMatrix::dim_at(std::size_t idx) const {
  if (idx >= dims_.size())
    fail(ErrorCode::index_out_of_range, "subsystem index out of range");
  return dims_[idx];
}

DensityMatrix DensityMatrix::reshaped(std::vector<int> dims) const {
  return DensityMatrix(mat_, std::move(dims));
}

PureBipartiteState::PureBipartiteState(CVector vec, int dim_a, int dim_b)
    : vec_(std::move(vec)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a_ < 1 || dim_b_ < 1)
    fail(ErrorCode::bad_param, "subsystem dimensions must be >= 1");
  if (vec_.size() != static_cast<Eigen::Index>(dim_a_) * dim_b_)
    fail(ErrorCode::dim_mismatch, "vector length does not match dim_a*dim_b");
  const double norm = vec_.norm();
  if (std::abs(norm - 1.0) > tol::unit_norm)
    fail(ErrorCode::not_normalized, "pure state vector is not unit norm");
}

CMatrix PureBipartiteState::amplitude_matrix() const {
  CMatrix m(dim_a_, dim_b_);
  for (int a = 0; a < dim_a_; ++a)
    for (int b = 0; b < dim_b_; ++b) m(a, b) = vec_(a * dim_b_ + b);
  return m;
}

DensityMatrix PureBipartiteState::density() const {
  return DensityMatrix(vec_ * vec_.adjoint(), {dim_a_, dim_b_});
}

DensityMatrix PureBipartiteState::reduced_a() const {
  const CMatrix m = amplitude_matrix();
  return DensityMatrix(m * m.adjoint(), {dim_a_});
}

DensityMatrix PureBipartiteState::reduced_b() const {
  const CMatrix m = amplitude_matrix();
  return DensityMatrix((m.adjoint() * m).transpose(), {dim_b_});
}

RVector PureBipartiteState::schmidt_coefficients() const {
  Eigen::JacobiSVD<CMatrix> svd(amplitude_matrix());
  return svd.singularValues();
}

EighResult eigh(const CMatrix& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::not_square, "eigh requires a square matrix");
  if (!is_hermitian(m, tol::hermiticity))
    fail(ErrorCode::not_hermitian, "eigh requires a Hermitian matrix");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::internal_inconsistency, "eigendecomposition failed");
  EighResult result{solver.eigenvalues(), solver.eigenvectors()};
  const CMatrix rebuilt = result.eigenvectors *
                          result.eigenvalues.asDiagonal() *
                          result.eigenvectors.adjoint();
  if ((rebuilt - sym).cwiseAbs().maxCoeff() > tol::eig_reconstruct)
    fail(ErrorCode::internal_inconsistency,
         "eigendecomposition reconstruction error exceeds tolerance");
  return result;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& keep) {
  if (m.rows() != m.cols())
    fail(ErrorCode::not_square, "partial trace requires a square matrix");
  const int total = product_of(dims);
  if (total != m.rows())
    fail(ErrorCode::dim_mismatch, "dims do not factor the matrix size");
  const int n = static_cast<int>(dims.size());
  std::vector<int> keep_sorted(keep);
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) !=
      keep_sorted.end())
    fail(ErrorCode::index_out_of_range, "duplicate subsystem index in keep");
  for (int k : keep_sorted)
    if (k < 0 || k >= n)
      fail(ErrorCode::index_out_of_range, "keep index out of range");

  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i))
      traced.push_back(i);

  // Row-major strides of each subsystem inside the flat index.
  std::vector<long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  long keep_dim = 1;
  for (int k : keep_sorted) keep_dim *= dims[k];
  long traced_dim = 1;
  for (int t : traced) traced_dim *= dims[t];

  // Flat offsets contributed by every kept / traced multi-index.
  const auto offsets = [&](const std::vector<int>& subsystems, long count) {
    std::vector<long> out(count, 0);
    for (long flat = 0; flat < count; ++flat) {
      long rem = flat;
      for (int i = static_cast<int>(subsystems.size()) - 1; i >= 0; --i) {
        const int sub = subsystems[i];
        out[flat] += (rem % dims[sub]) * stride[sub];
        rem /= dims[sub];
      }
    }
    return out;
  };
  const std::vector<long> keep_off = offsets(keep_sorted, keep_dim);
  const std::vector<long> traced_off = offsets(traced, traced_dim);

  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
  for (long r = 0; r < keep_dim; ++r)
    for (long c = 0; c < keep_dim; ++c) {
      complexd acc(0.0, 0.0);
      for (long t = 0; t < traced_dim; ++t)
        acc += m(keep_off[r] + traced_off[t], keep_off[c] + traced_off[t]);
      out(r, c) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  CMatrix reduced = partial_trace(rho.mat(), rho.dims(), keep);
  std::vector<int> keep_sorted(keep);
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> dims;
  for (int k : keep_sorted) dims.push_back(rho.dim_at(k));
  return DensityMatrix(std::move(reduced), std::move(dims));
}

PureBipartiteState purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  const EighResult es = eigh(rho.mat());
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double lambda = std::max(0.0, es.eigenvalues(i));
    if (lambda == 0.0) continue;
    const double root = std::sqrt(lambda);
    for (int a = 0; a < d; ++a)
      psi(static_cast<Eigen::Index>(i) * d + a) += root * es.eigenvectors(a, i);
  }
  psi.normalize();
  return PureBipartiteState(std::move(psi), d, d);
}

double trace_norm(const CMatrix& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::not_square, "trace norm requires a square matrix");
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

DensityMatrix maximally_mixed(int dim) {
  if (dim < 1) fail(ErrorCode::bad_param, "dimension must be >= 1");
  return DensityMatrix(CMatrix::Identity(dim, dim) / double(dim), {dim});
}

PureBipartiteState maximally_entangled(int dim) {
  if (dim < 1) fail(ErrorCode::bad_param, "dimension must be >= 1");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim) * dim);
  const double amp = 1.0 / std::sqrt(double(dim));
  for (int i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i) * dim + i) = amp;
  return PureBipartiteState(std::move(v), dim, dim);
}

CVector basis_vector(int dim, int index) {
  if (index < 0 || index >= dim)
    fail(ErrorCode::index_out_of_range, "basis index out of range");
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

CMatrix Rng::haar_isometry(int rows, int cols) {
  if (cols > rows)
    fail(ErrorCode::bad_param, "isometry needs rows >= cols");
  const CMatrix g = gaussian_matrix(rows, cols);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // Fix the phase gauge so the distribution is exactly Haar.
  for (int j = 0; j < cols; ++j) {
    const complexd d = r(j, j);
    const double mag = std::abs(d);
    const complexd phase = mag > 0 ? d / mag : complexd(1.0, 0.0);
    q.col(j) *= std::conj(phase);
  }
  return q;
}

} // namespace entloss
