#include "entloss/channels.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "entloss/rng.hpp"

namespace entloss {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_dims(int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1)
    fail(ErrorCode::bad_param, "channel dimensions must be >= 1");
}

// Choi matrix straight from raw operators, without channel validation.
CMatrix raw_choi(const std::vector<CMatrix>& ops, int dim_a, int dim_b) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  CMatrix choi = CMatrix::Zero(n, n);
  CVector v(n);
  for (const CMatrix& op : ops) {
    for (int i = 0; i < dim_a; ++i)
      for (int k = 0; k < dim_b; ++k)
        v(static_cast<Eigen::Index>(i) * dim_b + k) = op(k, i);
    choi.noalias() += v * v.adjoint();
  }
  return choi;
}

std::vector<CMatrix> choi_factor(const CMatrix& choi, int dim_a, int dim_b) {
  const EighResult es = eigh(choi);
  std::vector<CMatrix> ops;
  for (int t = 0; t < es.eigenvalues.size(); ++t) {
    const double mu = es.eigenvalues(t);
    if (mu < -tol::choi_psd)
      fail(ErrorCode::not_cptp, "Choi matrix has a negative eigenvalue");
    if (mu <= tol::spectrum_cut) continue;
    const double root = std::sqrt(mu);
    CMatrix op(dim_b, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int k = 0; k < dim_b; ++k)
        op(k, i) = root * es.eigenvectors(static_cast<Eigen::Index>(i) * dim_b + k, t);
    ops.push_back(std::move(op));
  }
  if (ops.empty()) fail(ErrorCode::not_cptp, "Choi matrix is numerically zero");
  return ops;
}

json mat_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix mat_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    fail(ErrorCode::parse_error, std::string(what) + ": expected a matrix");
  const std::size_t nrows = rows.size();
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0)
    fail(ErrorCode::parse_error, std::string(what) + ": empty matrix row");
  CMatrix m(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols)
      fail(ErrorCode::parse_error, std::string(what) + ": ragged matrix");
    for (std::size_t j = 0; j < ncols; ++j) {
      const json& e = rows[i][j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        fail(ErrorCode::parse_error,
             std::string(what) + ": entries must be [re, im] pairs");
      m(i, j) = complexd(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCode::parse_error, std::string(what) + ": malformed JSON");
  return j;
}

CMatrix weyl_shift(int dim) {
  CMatrix x = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) x((j + 1) % dim, j) = 1.0;
  return x;
}

CMatrix weyl_clock(int dim) {
  CMatrix z = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j)
    z(j, j) = std::polar(1.0, 2.0 * kPi * j / dim);
  return z;
}

} // namespace

KrausChannel::KrausChannel(int dim_a, int dim_b, std::vector<CMatrix> ops)
    : dim_a_(dim_a), dim_b_(dim_b), ops_(std::move(ops)) {
  check_dims(dim_a_, dim_b_);
  if (ops_.empty())
    fail(ErrorCode::bad_param, "channel needs at least one Kraus operator");
  for (const CMatrix& op : ops_)
    if (op.rows() != dim_b_ || op.cols() != dim_a_)
      fail(ErrorCode::dim_mismatch, "Kraus operator has wrong shape");
  if (ops_.size() > static_cast<std::size_t>(dim_a_) * dim_b_)
    ops_ = choi_factor(raw_choi(ops_, dim_a_, dim_b_), dim_a_, dim_b_);
  CMatrix sum = CMatrix::Zero(dim_a_, dim_a_);
  for (const CMatrix& op : ops_) sum.noalias() += op.adjoint() * op;
  const double err =
      (sum - CMatrix::Identity(dim_a_, dim_a_)).cwiseAbs().maxCoeff();
  if (err > tol::kraus_tp)
    fail(ErrorCode::not_cptp, "Kraus operators are not trace preserving");
}

ChoiMatrix::ChoiMatrix(int dim_a, int dim_b, CMatrix mat)
    : dim_a_(dim_a), dim_b_(dim_b), mat_(std::move(mat)) {
  check_dims(dim_a_, dim_b_);
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a_) * dim_b_;
  if (mat_.rows() != n || mat_.cols() != n)
    fail(ErrorCode::dim_mismatch, "Choi matrix has wrong size");
  if (!is_hermitian(mat_, tol::hermiticity))
    fail(ErrorCode::not_hermitian, "Choi matrix is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::choi_psd)
    fail(ErrorCode::not_cptp, "Choi matrix is not positive semidefinite");
  const CMatrix marginal = partial_trace(mat_, {dim_a_, dim_b_}, {0});
  const double err =
      (marginal - CMatrix::Identity(dim_a_, dim_a_)).cwiseAbs().maxCoeff();
  if (err > tol::kraus_tp)
    fail(ErrorCode::not_cptp, "Choi marginal on the input is not the identity");
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_a())
    fail(ErrorCode::dim_mismatch, "state dimension does not match channel input");
  CMatrix out = CMatrix::Zero(ch.dim_b(), ch.dim_b());
  for (const CMatrix& op : ch.ops())
    out.noalias() += op * rho.mat() * op.adjoint();
  return DensityMatrix(std::move(out), {ch.dim_b()});
}

DensityMatrix apply_to_subsystem(const KrausChannel& ch,
                                 const PureBipartiteState& psi) {
  if (psi.dim_b() != ch.dim_a())
    fail(ErrorCode::dim_mismatch,
         "channel input does not match the second subsystem");
  const int dr = psi.dim_a();
  const int db = ch.dim_b();
  const CMatrix m = psi.amplitude_matrix(); // dr x dA
  const Eigen::Index n = static_cast<Eigen::Index>(dr) * db;
  CMatrix out = CMatrix::Zero(n, n);
  CVector v(n);
  for (const CMatrix& op : ch.ops()) {
    const CMatrix mk = m * op.transpose(); // dr x db
    for (int r = 0; r < dr; ++r)
      for (int b = 0; b < db; ++b)
        v(static_cast<Eigen::Index>(r) * db + b) = mk(r, b);
    out.noalias() += v * v.adjoint();
  }
  return DensityMatrix(std::move(out), {dr, db});
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (inner.dim_b() != outer.dim_a())
    fail(ErrorCode::dim_mismatch, "composition dimensions do not match");
  std::vector<CMatrix> ops;
  ops.reserve(outer.ops().size() * inner.ops().size());
  for (const CMatrix& g : outer.ops())
    for (const CMatrix& f : inner.ops()) ops.push_back(g * f);
  return KrausChannel(inner.dim_a(), outer.dim_b(), std::move(ops));
}

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
  return ChoiMatrix(ch.dim_a(), ch.dim_b(),
                    raw_choi(ch.ops(), ch.dim_a(), ch.dim_b()));
}

KrausChannel choi_to_kraus(const ChoiMatrix& choi) {
  return KrausChannel(choi.dim_a(), choi.dim_b(),
                      choi_factor(choi.mat(), choi.dim_a(), choi.dim_b()));
}

KrausChannel identity_channel(int dim) {
  check_dims(dim, dim);
  return KrausChannel(dim, dim, {CMatrix::Identity(dim, dim)});
}

KrausChannel unitary_channel(const CMatrix& u) {
  if (u.rows() != u.cols())
    fail(ErrorCode::bad_param, "unitary channel needs a square matrix");
  const int d = static_cast<int>(u.rows());
  const double err =
      (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > tol::kraus_tp)
    fail(ErrorCode::bad_param, "matrix is not unitary");
  return KrausChannel(d, d, {u});
}

KrausChannel depolarizing_channel(double p, int dim) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::bad_param, "depolarizing probability must be in [0,1]");
  if (dim < 2) fail(ErrorCode::bad_param, "depolarizing needs dim >= 2");
  const double d2 = double(dim) * dim;
  std::vector<CMatrix> ops;
  const double w0 = 1.0 - p + p / d2;
  if (w0 > 0.0)
    ops.push_back(std::sqrt(w0) * CMatrix::Identity(dim, dim));
  if (p > 0.0) {
    const CMatrix x = weyl_shift(dim);
    const CMatrix z = weyl_clock(dim);
    const double w = std::sqrt(p) / dim;
    CMatrix xa = CMatrix::Identity(dim, dim);
    for (int a = 0; a < dim; ++a) {
      CMatrix w_ab = xa;
      for (int b = 0; b < dim; ++b) {
        if (a != 0 || b != 0) ops.push_back(w * w_ab);
        w_ab = w_ab * z;
      }
      xa = x * xa;
    }
  }
  return KrausChannel(dim, dim, std::move(ops));
}

KrausChannel dephasing_channel(double p, int dim) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::bad_param, "dephasing probability must be in [0,1]");
  if (dim < 2) fail(ErrorCode::bad_param, "dephasing needs dim >= 2");
  std::vector<CMatrix> ops;
  if (p < 1.0)
    ops.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(dim, dim));
  if (p > 0.0) {
    const CMatrix z = weyl_clock(dim);
    const double w = std::sqrt(p / (dim - 1));
    CMatrix zk = z;
    for (int k = 1; k < dim; ++k) {
      ops.push_back(w * zk);
      zk = zk * z;
    }
  }
  return KrausChannel(dim, dim, std::move(ops));
}

KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    fail(ErrorCode::bad_param, "damping rate must be in [0,1]");
  CMatrix a0 = CMatrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  CMatrix a1 = CMatrix::Zero(2, 2);
  a1(0, 1) = std::sqrt(gamma);
  std::vector<CMatrix> ops{a0};
  if (gamma > 0.0) ops.push_back(a1);
  return KrausChannel(2, 2, std::move(ops));
}

KrausChannel erasure_channel(double p, int dim) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::bad_param, "erasure probability must be in [0,1]");
  check_dims(dim, dim + 1);
  std::vector<CMatrix> ops;
  if (p < 1.0) {
    CMatrix embed = CMatrix::Zero(dim + 1, dim);
    for (int i = 0; i < dim; ++i) embed(i, i) = std::sqrt(1.0 - p);
    ops.push_back(std::move(embed));
  }
  if (p > 0.0) {
    for (int i = 0; i < dim; ++i) {
      CMatrix flag = CMatrix::Zero(dim + 1, dim);
      flag(dim, i) = std::sqrt(p);
      ops.push_back(std::move(flag));
    }
  }
  return KrausChannel(dim, dim + 1, std::move(ops));
}

KrausChannel replace_channel(const DensityMatrix& sigma, int dim_a) {
  check_dims(dim_a, sigma.dim());
  const EighResult es = eigh(sigma.mat());
  std::vector<CMatrix> ops;
  for (int t = 0; t < es.eigenvalues.size(); ++t) {
    const double mu = std::max(0.0, es.eigenvalues(t));
    if (mu <= tol::spectrum_cut) continue;
    const double root = std::sqrt(mu);
    for (int i = 0; i < dim_a; ++i) {
      CMatrix op = CMatrix::Zero(sigma.dim(), dim_a);
      op.col(i) = root * es.eigenvectors.col(t);
      ops.push_back(std::move(op));
    }
  }
  return KrausChannel(dim_a, sigma.dim(), std::move(ops));
}

KrausChannel random_channel(int dim_a, int dim_b, int rank,
                            std::uint64_t seed) {
  check_dims(dim_a, dim_b);
  if (rank < 1 || rank > dim_a * dim_b)
    fail(ErrorCode::bad_param, "channel rank must be in [1, dimA*dimB]");
  if (dim_b * rank < dim_a)
    fail(ErrorCode::bad_param,
         "rank too small for an isometry into B (x) E");
  Rng rng = Rng::derived(seed, 0xc4a17u);
  const CMatrix v = rng.haar_isometry(dim_b * rank, dim_a);
  std::vector<CMatrix> ops(rank, CMatrix(dim_b, dim_a));
  for (int k = 0; k < rank; ++k)
    for (int b = 0; b < dim_b; ++b)
      for (int a = 0; a < dim_a; ++a)
        ops[k](b, a) = v(static_cast<Eigen::Index>(b) * rank + k, a);
  return KrausChannel(dim_a, dim_b, std::move(ops));
}

DensityMatrix random_state(const std::vector<int>& dims, int rank,
                           std::uint64_t seed) {
  int total = 1;
  for (int d : dims) {
    if (d < 1) fail(ErrorCode::bad_param, "state dimensions must be >= 1");
    total *= d;
  }
  if (rank < 1) fail(ErrorCode::bad_param, "state rank must be >= 1");
  Rng rng = Rng::derived(seed, 0x57a7eu);
  const CVector psi = rng.haar_vector(total * rank);
  CMatrix m(total, rank);
  for (int i = 0; i < total; ++i)
    for (int k = 0; k < rank; ++k)
      m(i, k) = psi(static_cast<Eigen::Index>(i) * rank + k);
  return DensityMatrix(m * m.adjoint(), dims);
}

KrausChannel channel_zoo(const std::string& name,
                         const std::string& params_json) {
  const json p = parse_json(params_json.empty() ? "{}" : params_json,
                            "channel parameters");
  if (!p.is_object())
    fail(ErrorCode::parse_error, "channel parameters must be a JSON object");
  const auto get_num = [&](const char* key, double fallback,
                           bool required = false) {
    if (!p.contains(key)) {
      if (required)
        fail(ErrorCode::bad_param,
             std::string("missing required parameter '") + key + "'");
      return fallback;
    }
    if (!p[key].is_number())
      fail(ErrorCode::bad_param, std::string("parameter '") + key +
                                     "' must be a number");
    return p[key].get<double>();
  };
  const auto get_int = [&](const char* key, int fallback,
                           bool required = false) {
    const double v = get_num(key, fallback, required);
    if (v != std::floor(v))
      fail(ErrorCode::bad_param,
           std::string("parameter '") + key + "' must be an integer");
    return static_cast<int>(v);
  };

  if (name == "identity") return identity_channel(get_int("d", 2));
  if (name == "depolarizing")
    return depolarizing_channel(get_num("p", 0.0, true), get_int("d", 2));
  if (name == "dephasing")
    return dephasing_channel(get_num("p", 0.0, true), get_int("d", 2));
  if (name == "amplitude_damping")
    return amplitude_damping_channel(get_num("gamma", 0.0, true));
  if (name == "erasure")
    return erasure_channel(get_num("p", 0.0, true), get_int("d", 2));
  if (name == "replace") {
    const int d = get_int("d", 2);
    const int db = get_int("db", d);
    return replace_channel(maximally_mixed(db), d);
  }
  if (name == "random") {
    const int da = get_int("dimA", get_int("d", 2));
    const int db = get_int("dimB", da);
    const int rank = get_int("rank", da * db);
    const int seed = get_int("seed", 0);
    return random_channel(da, db, rank, static_cast<std::uint64_t>(seed));
  }
  if (name == "unitary") {
    const int d = get_int("d", 2);
    std::string kind = "z";
    if (p.contains("u")) {
      if (!p["u"].is_string())
        fail(ErrorCode::bad_param, "parameter 'u' must be a string");
      kind = p["u"].get<std::string>();
    }
    if (kind == "z") return unitary_channel(weyl_clock(d));
    if (kind == "x") return unitary_channel(weyl_shift(d));
    if (kind == "phase") {
      const double theta = get_num("theta", 0.0, true);
      CMatrix u = CMatrix::Identity(d, d);
      u(d - 1, d - 1) = std::polar(1.0, theta);
      return unitary_channel(u);
    }
    if (kind == "haar") {
      const int seed = get_int("seed", 0);
      Rng rng = Rng::derived(static_cast<std::uint64_t>(seed), 0x0a17u);
      return unitary_channel(rng.haar_unitary(d));
    }
    fail(ErrorCode::bad_param, "unknown unitary kind '" + kind + "'");
  }
  fail(ErrorCode::unknown_channel, "unknown channel name '" + name + "'");
}

std::string channel_to_json(const KrausChannel& ch) {
  json j;
  j["dimA"] = ch.dim_a();
  j["dimB"] = ch.dim_b();
  json ops = json::array();
  for (const CMatrix& op : ch.ops()) ops.push_back(mat_to_json(op));
  j["kraus"] = std::move(ops);
  return j.dump();
}

KrausChannel channel_from_json(const std::string& text) {
  const json j = parse_json(text, "channel");
  if (!j.is_object() || !j.contains("dimA") || !j.contains("dimB") ||
      !j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
    fail(ErrorCode::parse_error,
         "channel JSON needs dimA, dimB and a non-empty kraus array");
  if (!j["dimA"].is_number_integer() || !j["dimB"].is_number_integer())
    fail(ErrorCode::parse_error, "channel dimensions must be integers");
  const int dim_a = j["dimA"].get<int>();
  const int dim_b = j["dimB"].get<int>();
  std::vector<CMatrix> ops;
  for (const json& op : j["kraus"])
    ops.push_back(mat_from_json(op, "kraus operator"));
  return KrausChannel(dim_a, dim_b, std::move(ops));
}

std::string choi_to_json(const ChoiMatrix& choi) {
  json j;
  j["dimA"] = choi.dim_a();
  j["dimB"] = choi.dim_b();
  j["mat"] = mat_to_json(choi.mat());
  return j.dump();
}

ChoiMatrix choi_from_json(const std::string& text) {
  const json j = parse_json(text, "choi");
  if (!j.is_object() || !j.contains("dimA") || !j.contains("dimB") ||
      !j.contains("mat"))
    fail(ErrorCode::parse_error, "choi JSON needs dimA, dimB and mat");
  return ChoiMatrix(j["dimA"].get<int>(), j["dimB"].get<int>(),
                    mat_from_json(j["mat"], "choi matrix"));
}

std::string state_to_json(const DensityMatrix& rho) {
  json j;
  j["dims"] = rho.dims();
  j["mat"] = mat_to_json(rho.mat());
  return j.dump();
}

DensityMatrix state_from_json(const std::string& text) {
  const json j = parse_json(text, "state");
  if (!j.is_object() || !j.contains("dims") || !j.contains("mat") ||
      !j["dims"].is_array())
    fail(ErrorCode::parse_error, "state JSON needs dims and mat");
  std::vector<int> dims;
  for (const json& d : j["dims"]) {
    if (!d.is_number_integer())
      fail(ErrorCode::parse_error, "state dims must be integers");
    dims.push_back(d.get<int>());
  }
  return DensityMatrix(mat_from_json(j["mat"], "state matrix"), dims);
}

} // namespace entloss
