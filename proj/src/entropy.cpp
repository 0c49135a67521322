#include "entloss/entropy.hpp"

#include <cmath>

#include "entloss/eof.hpp"

namespace entloss {

namespace {

void check_bipartite(const DensityMatrix& tau) {
  if (tau.dims().size() != 2)
    fail(ErrorCode::dim_mismatch, "expected a bipartite state (two factors)");
}

// Shared clipping rule for loss quantities that are nonnegative in exact
// arithmetic: small numerical negatives collapse to 0, larger ones indicate
// a real defect and abort.
double clip_loss(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -tol::loss_clip) return 0.0;
  fail(ErrorCode::internal_inconsistency,
       std::string(what) + " is negative beyond tolerance");
}

} // namespace

LossKind LossKind::make(LossTag tag, int dim_a, int dim_b) {
  switch (tag) {
    case LossTag::coherent:
      return LossKind{tag, 1.0};
    case LossTag::squashed:
      return LossKind{tag, 2.0};
    case LossTag::formation: {
      const double m = 2.0 * dim_a * dim_b - 1.0;
      return LossKind{tag, m * m};
    }
  }
  fail(ErrorCode::bad_param, "unknown loss kind");
}

bool measure_is_computable(MeasureId id) {
  switch (id) {
    case MeasureId::formation:
    case MeasureId::coherent:
    case MeasureId::mutual_half:
      return true;
    default:
      return false;
  }
}

const char* measure_name(MeasureId id) {
  switch (id) {
    case MeasureId::distillable: return "distillable";
    case MeasureId::key: return "key";
    case MeasureId::squashed: return "squashed";
    case MeasureId::relative_entropy: return "relative_entropy";
    case MeasureId::cost: return "cost";
    case MeasureId::formation: return "formation";
    case MeasureId::coherent: return "coherent";
    case MeasureId::mutual_half: return "mutual_half";
  }
  return "unknown";
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0)
    fail(ErrorCode::domain_error, "binary entropy argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double entropy_of_spectrum(const RVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return s;
}

double von_neumann_entropy(const CMatrix& rho) {
  return entropy_of_spectrum(eigh(rho).eigenvalues);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.mat());
}

double coherent_information(const DensityMatrix& tau, Direction dir) {
  check_bipartite(tau);
  const int out_side = dir == Direction::a_to_b ? 1 : 0;
  const double s_out =
      von_neumann_entropy(partial_trace(tau.mat(), tau.dims(), {out_side}));
  const double s_joint = von_neumann_entropy(tau.mat());
  const double ic = s_out - s_joint;
  const double cap =
      std::log2(double(std::min(tau.dim_at(0), tau.dim_at(1))));
  if (std::abs(ic) > cap + tol::loss_clip)
    fail(ErrorCode::internal_inconsistency,
         "coherent information exceeds its dimension bound");
  return ic;
}

double channel_coherent_information(const DensityMatrix& rho,
                                    const KrausChannel& ch) {
  if (rho.dim() != ch.dim_a())
    fail(ErrorCode::dim_mismatch, "state dimension does not match channel input");
  const DensityMatrix joint =
      apply_to_subsystem(ch, purify(rho.dims().size() == 1
                                        ? rho
                                        : rho.reshaped({rho.dim()})));
  return coherent_information(joint, Direction::a_to_b);
}

double delta_c(const DensityMatrix& rho, const KrausChannel& ch) {
  const double s_in = von_neumann_entropy(rho);
  return clip_loss(s_in - channel_coherent_information(rho, ch),
                   "coherent-information loss");
}

double delta_c_state(const DensityMatrix& tau, Direction dir) {
  check_bipartite(tau);
  const int src_side = dir == Direction::a_to_b ? 0 : 1;
  const double s_src =
      von_neumann_entropy(partial_trace(tau.mat(), tau.dims(), {src_side}));
  // No clipping guard here beyond the shared rule: the state-level quantity
  // is nonnegative by data processing exactly like the channel-level one.
  return clip_loss(s_src - coherent_information(tau, dir),
                   "state-level coherent-information loss");
}

double mutual_information(const DensityMatrix& tau) {
  check_bipartite(tau);
  const double s_a =
      von_neumann_entropy(partial_trace(tau.mat(), tau.dims(), {0}));
  const double s_b =
      von_neumann_entropy(partial_trace(tau.mat(), tau.dims(), {1}));
  return s_a + s_b - von_neumann_entropy(tau.mat());
}

double delta_x_state(const DensityMatrix& tau, const LossKind& kind,
                     Direction dir) {
  check_bipartite(tau);
  switch (kind.tag) {
    case LossTag::coherent:
      return delta_c_state(tau, dir);
    case LossTag::formation: {
      const int src_side = dir == Direction::a_to_b ? 0 : 1;
      const double s_src = von_neumann_entropy(
          partial_trace(tau.mat(), tau.dims(), {src_side}));
      const double ef = eof(tau).value;
      return clip_loss(s_src - ef, "formation loss");
    }
    case LossTag::squashed:
      fail(ErrorCode::not_computable,
           "squashed-entanglement loss has no computable estimator here");
  }
  fail(ErrorCode::bad_param, "unknown loss kind");
}

} // namespace entloss
