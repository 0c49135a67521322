#include "entloss/cbnorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>

#include "entloss/rng.hpp"
#include "stiefel.hpp"

namespace entloss {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

CMatrix amp_of(const CVector& psi, int dim_r, int dim_a) {
  CMatrix m(dim_r, dim_a);
  for (int r = 0; r < dim_r; ++r) {
    for (int a = 0; a < dim_a; ++a) {
      m(r, a) = psi(r * dim_a + a);
    }
  }
  return m;
}

// (id (x) N)(|psi><psi|) for the amplitude matrix of a pure state on
// R (x) A, without density-matrix validation overhead.
CMatrix raw_output_on_reference(const std::vector<CMatrix>& kraus,
                                const CMatrix& amp, int dim_b) {
  int dim_r = static_cast<int>(amp.rows());
  CMatrix out = CMatrix::Zero(dim_r * dim_b, dim_r * dim_b);
  for (const CMatrix& a : kraus) {
    CMatrix m = amp * a.transpose();  // dR x dB
    CVector v(dim_r * dim_b);
    for (int r = 0; r < dim_r; ++r) {
      for (int b = 0; b < dim_b; ++b) {
        v(r * dim_b + b) = m(r, b);
      }
    }
    out.noalias() += v * v.adjoint();
  }
  return out;
}

RVector raw_spectrum(const CMatrix& herm) {
  CMatrix sym = 0.5 * (herm + herm.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double raw_entropy(const CMatrix& herm) {
  return entropy_of_spectrum(raw_spectrum(herm));
}

double clip_nonneg(double v, const char* what) {
  if (v >= 0.0) {
    return v;
  }
  if (v >= -tol::loss_clip) {
    return 0.0;
  }
  fail(ErrorCode::internal_inconsistency,
       std::string(what) + " came out negative: " + fmt_double(v));
}

CMatrix block_of(const CMatrix& v, int k, int dim_a, int env, int dim_b) {
  CMatrix op(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a) {
    op.row(a) = v.row(a * env + k);
  }
  return op;
}

struct ClimbOutcome {
  double value = 0.0;
  CVector point;
};

// Shrinking-step stochastic search over unit vectors. Canonical starts are
// used first, then Haar-random ones, up to `restarts` total.
ClimbOutcome hill_climb(const std::function<double(const CVector&)>& score,
                        bool maximize, const std::vector<CVector>& canonical,
                        int restarts, int max_evals, int dim, Rng& rng) {
  const double worst = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  ClimbOutcome best{worst, CVector()};
  int total_starts = std::max(restarts, static_cast<int>(canonical.size()));
  for (int r = 0; r < total_starts; ++r) {
    CVector x = r < static_cast<int>(canonical.size())
                    ? canonical[static_cast<std::size_t>(r)].normalized()
                    : rng.haar_vector(dim);
    double fx = score(x);
    int evals = 1;
    double sigma = 0.5;
    int rejects = 0;
    while (evals < max_evals && sigma > 1e-7) {
      CVector g(dim);
      for (int i = 0; i < dim; ++i) {
        g(i) = rng.gaussian_complex();
      }
      CVector y = (x + sigma * g).normalized();
      double fy = score(y);
      ++evals;
      if (maximize ? fy > fx : fy < fx) {
        x = std::move(y);
        fx = fy;
        rejects = 0;
      } else if (++rejects >= 8) {
        sigma *= 0.6;
        rejects = 0;
      }
    }
    if (maximize ? fx > best.value : fx < best.value) {
      best.value = fx;
      best.point = x;
    }
  }
  return best;
}

struct DiamondEval {
  double value = 0.0;
  CMatrix witness;  // optimal dual operator, norm at most 1
};

DiamondEval diamond_eval(const std::vector<CMatrix>& ka,
                         const std::vector<CMatrix>& kb, const CMatrix& amp,
                         int dim_b) {
  CMatrix m = raw_output_on_reference(ka, amp, dim_b) -
              raw_output_on_reference(kb, amp, dim_b);
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  DiamondEval out;
  const RVector& mu = solver.eigenvalues();
  const CMatrix& vecs = solver.eigenvectors();
  out.witness = CMatrix::Zero(m.rows(), m.cols());
  for (int k = 0; k < mu.size(); ++k) {
    out.value += std::abs(mu(k));
    double sign = mu(k) >= 0.0 ? 1.0 : -1.0;
    out.witness.noalias() += sign * (vecs.col(k) * vecs.col(k).adjoint());
  }
  return out;
}

// Adjoint-difference lift of a dual operator on R (x) B back to R (x) A:
// the operator whose expectation at psi equals Tr[(Delta psi)(witness)].
CMatrix lift_witness(const std::vector<CMatrix>& ka,
                     const std::vector<CMatrix>& kb, const CMatrix& witness,
                     int dim_r, int dim_a, int dim_b) {
  CMatrix h = CMatrix::Zero(dim_r * dim_a, dim_r * dim_a);
  for (int r = 0; r < dim_r; ++r) {
    for (int rp = 0; rp < dim_r; ++rp) {
      CMatrix wb = witness.block(r * dim_b, rp * dim_b, dim_b, dim_b);
      CMatrix hb = CMatrix::Zero(dim_a, dim_a);
      for (const CMatrix& a : ka) {
        hb.noalias() += a.adjoint() * wb * a;
      }
      for (const CMatrix& b : kb) {
        hb.noalias() -= b.adjoint() * wb * b;
      }
      h.block(r * dim_a, rp * dim_a, dim_a, dim_a) = hb;
    }
  }
  return h;
}

} // namespace

DiamondEstimate diamond_distance(const KrausChannel& a, const KrausChannel& b,
                                 const DiamondConfig& cfg) {
  if (a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b()) {
    fail(ErrorCode::dim_mismatch,
         "channel distance needs channels with equal dimensions");
  }
  int dim_a = a.dim_a();
  int dim_b = a.dim_b();
  int total = dim_a * dim_a;  // reference copies the input space

  Rng rng = Rng::derived(cfg.seed, 0xd1a3);
  int restarts = std::max(1, cfg.restarts);

  DiamondEstimate out;
  out.restarts_used = restarts;
  double best = -1.0;
  for (int r = 0; r < restarts; ++r) {
    CVector psi = (r == 0) ? maximally_entangled(dim_a).vec()
                           : rng.haar_vector(total);
    double prev = -1.0;
    double value = 0.0;
    bool conv = false;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
      DiamondEval eval = diamond_eval(a.ops(), b.ops(), amp_of(psi, dim_a, dim_a),
                                      dim_b);
      value = eval.value;
      if (value - prev < cfg.tol) {
        conv = true;
        break;
      }
      prev = value;
      CMatrix h = lift_witness(a.ops(), b.ops(), eval.witness, dim_a, dim_a,
                               dim_b);
      h = 0.5 * (h + h.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
      psi = solver.eigenvectors().col(total - 1);
    }
    if (value > best) {
      best = value;
      out.achieving_input = psi;
      out.converged = conv;
    }
  }
  if (best > 2.0 + 1e-9) {
    fail(ErrorCode::internal_inconsistency,
         "distance estimate exceeds the trace-norm ceiling: " +
             fmt_double(best));
  }
  out.lower = std::max(0.0, best);
  return out;
}

namespace {

struct PoolEntry {
  CMatrix sigma;    // channel output on R (x) B at the adversarial input
  CMatrix witness;  // dual operator on R (x) A frozen at that input
  double anchor = 0.0;  // Tr[|psi><psi| witness]
};

} // namespace

QcbEstimate q_cb(const KrausChannel& ch, const QcbConfig& cfg) {
  int dim_a = ch.dim_a();
  int dim_b = ch.dim_b();
  if (dim_a * dim_b > 9) {
    fail(ErrorCode::dim_too_large,
         "complete-boundedness search supports total dimension up to 9");
  }
  int env = dim_a * dim_b;
  int rows = dim_a * env;
  KrausChannel ident = identity_channel(dim_a);

  auto channel_of = [&](const CMatrix& v) {
    std::vector<CMatrix> ops;
    for (int k = 0; k < env; ++k) {
      CMatrix op = block_of(v, k, dim_a, env, dim_b);
      if (op.squaredNorm() > 1e-14) {
        ops.push_back(std::move(op));
      }
    }
    return KrausChannel(dim_b, dim_a, ops);
  };

  auto implant = [&](const KrausChannel& rec) {
    CMatrix v = CMatrix::Zero(rows, dim_b);
    const std::vector<CMatrix>& ops = rec.ops();
    for (int k = 0; k < static_cast<int>(ops.size()); ++k) {
      for (int a = 0; a < dim_a; ++a) {
        v.row(a * env + k) = ops[static_cast<std::size_t>(k)].row(a);
      }
    }
    return v;
  };

  std::uint64_t seed_counter = 1;
  auto respond = [&](const CMatrix& v, DiamondConfig dc) {
    dc.seed = Rng::mix(cfg.seed, 0x9cb0 + seed_counter++);
    KrausChannel composed = compose(channel_of(v), ch);
    return diamond_distance(composed, ident, dc);
  };

  std::vector<PoolEntry> pool;
  auto add_pool = [&](const CMatrix& v, const DiamondEstimate& est) {
    const CVector& psi = est.achieving_input;
    CMatrix amp = amp_of(psi, dim_a, dim_a);
    KrausChannel composed = compose(channel_of(v), ch);
    CMatrix m = raw_output_on_reference(composed.ops(), amp, dim_a) -
                (psi * psi.adjoint());
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    CMatrix w = CMatrix::Zero(m.rows(), m.cols());
    for (int k = 0; k < solver.eigenvalues().size(); ++k) {
      double sign = solver.eigenvalues()(k) >= 0.0 ? 1.0 : -1.0;
      w.noalias() +=
          sign * (solver.eigenvectors().col(k) *
                  solver.eigenvectors().col(k).adjoint());
    }
    PoolEntry entry;
    entry.sigma = raw_output_on_reference(ch.ops(), amp, dim_b);
    entry.witness = std::move(w);
    entry.anchor = (psi.adjoint() * entry.witness * psi)(0).real();
    pool.push_back(std::move(entry));
  };

  // Surrogate: the largest frozen-dual response over the pool, a smooth
  // under-estimate of the true best response at v.
  stiefel::Objective surrogate = [&](const CMatrix& v, CMatrix* grad) {
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(env));
    for (int k = 0; k < env; ++k) {
      blocks.push_back(block_of(v, k, dim_a, env, dim_b));
    }
    double best_t = -std::numeric_limits<double>::infinity();
    int best_s = -1;
    for (int s = 0; s < static_cast<int>(pool.size()); ++s) {
      const PoolEntry& e = pool[static_cast<std::size_t>(s)];
      double t = -e.anchor;
      for (int k = 0; k < env; ++k) {
        for (int r = 0; r < dim_a; ++r) {
          for (int rp = 0; rp < dim_a; ++rp) {
            CMatrix sb = e.sigma.block(r * dim_b, rp * dim_b, dim_b, dim_b);
            CMatrix wb = e.witness.block(rp * dim_a, r * dim_a, dim_a, dim_a);
            t += (blocks[static_cast<std::size_t>(k)] * sb *
                  blocks[static_cast<std::size_t>(k)].adjoint() * wb)
                     .trace()
                     .real();
          }
        }
      }
      if (t > best_t) {
        best_t = t;
        best_s = s;
      }
    }
    if (grad != nullptr && best_s >= 0) {
      grad->setZero();
      const PoolEntry& e = pool[static_cast<std::size_t>(best_s)];
      for (int k = 0; k < env; ++k) {
        CMatrix mk = CMatrix::Zero(dim_a, dim_b);
        for (int r = 0; r < dim_a; ++r) {
          for (int rp = 0; rp < dim_a; ++rp) {
            CMatrix sb = e.sigma.block(r * dim_b, rp * dim_b, dim_b, dim_b);
            CMatrix wb = e.witness.block(rp * dim_a, r * dim_a, dim_a, dim_a);
            mk.noalias() += wb * blocks[static_cast<std::size_t>(k)] * sb;
          }
        }
        for (int a = 0; a < dim_a; ++a) {
          grad->row(a * env + k) = 2.0 * mk.row(a);
        }
      }
    }
    return best_t;
  };

  Rng rng = Rng::derived(cfg.seed, 0x9cb1);
  double best_val = std::numeric_limits<double>::infinity();
  CMatrix best_v;
  int rounds_used = 0;

  int outer_restarts = std::max(1, cfg.outer_restarts);
  for (int orst = 0; orst < outer_restarts; ++orst) {
    CMatrix v = (orst == 0)
                    ? implant(transpose_channel(maximally_mixed(dim_a), ch))
                    : rng.haar_isometry(rows, dim_b);
    double local_best = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int round = 0; round < cfg.outer_rounds; ++round) {
      DiamondEstimate est = respond(v, cfg.inner);
      ++rounds_used;
      if (est.lower < best_val) {
        best_val = est.lower;
        best_v = v;
      }
      if (est.lower < local_best - cfg.tol) {
        local_best = est.lower;
        stall = 0;
      } else if (++stall >= 2) {
        break;
      }
      if (est.lower <= cfg.tol) {
        break;  // recovery already essentially exact
      }
      if (round + 1 == cfg.outer_rounds) {
        break;
      }
      add_pool(v, est);
      stiefel::Options sopt;
      sopt.max_iter = cfg.descent_iters;
      sopt.tol = 1e-12;
      v = stiefel::minimize(surrogate, v, sopt).point;
    }
  }

  DiamondConfig final_cfg = cfg.final_eval;
  final_cfg.seed = Rng::mix(cfg.seed, 0x9cbf);
  KrausChannel composed = compose(channel_of(best_v), ch);
  DiamondEstimate fin = diamond_distance(composed, ident, final_cfg);
  return QcbEstimate{fin.lower, channel_of(best_v), rounds_used};
}

BigDeltaEstimate big_delta(const KrausChannel& ch, LossTag kind,
                           const BigDeltaConfig& cfg) {
  if (kind == LossTag::squashed) {
    fail(ErrorCode::not_computable,
         "no evaluator is available for the squashed-entanglement loss");
  }
  int dim_a = ch.dim_a();
  int dim_b = ch.dim_b();
  if (kind == LossTag::formation && dim_a * dim_b > 9) {
    fail(ErrorCode::dim_too_large,
         "formation loss search supports total dimension up to 9");
  }
  int total = dim_a * dim_a;

  auto delta_at = [&](const CVector& psi, const EofConfig& ecfg) {
    CMatrix amp = amp_of(psi, dim_a, dim_a);
    CMatrix sigma = raw_output_on_reference(ch.ops(), amp, dim_b);
    double s_in = raw_entropy(((amp.adjoint() * amp).transpose()).eval());
    double value = 0.0;
    if (kind == LossTag::coherent) {
      CMatrix sb = CMatrix::Zero(dim_b, dim_b);
      for (int r = 0; r < dim_a; ++r) {
        sb += sigma.block(r * dim_b, r * dim_b, dim_b, dim_b);
      }
      value = s_in - (raw_entropy(sb) - raw_entropy(sigma));
      return clip_nonneg(value, "coherent-information loss");
    }
    DensityMatrix tau(sigma, {dim_a, dim_b});
    value = s_in - eof(tau, ecfg).value;
    return clip_nonneg(value, "formation loss");
  };

  std::vector<CVector> canonical = {maximally_entangled(dim_a).vec()};
  Rng rng = Rng::derived(cfg.seed, 0xb16d);
  ClimbOutcome searched = hill_climb(
      [&](const CVector& psi) { return delta_at(psi, cfg.search_eof); }, true,
      canonical, cfg.restarts, cfg.max_evals, total, rng);

  double value = searched.value;
  if (kind == LossTag::formation) {
    value = std::max(value, delta_at(searched.point, cfg.final_eof));
  }
  return BigDeltaEstimate{value, searched.point};
}

BigPhiEstimate big_phi(const KrausChannel& ch, const BigPhiConfig& cfg) {
  int dim_a = ch.dim_a();
  int total = dim_a * dim_a;

  auto state_of = [&](const CVector& psi) {
    CMatrix amp = amp_of(psi, dim_a, dim_a);
    CMatrix rho = (amp.adjoint() * amp).transpose();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(rho, {dim_a});
  };

  std::vector<CVector> canonical = {maximally_entangled(dim_a).vec(),
                                    basis_vector(total, 0)};
  Rng rng = Rng::derived(cfg.seed, 0xb1f1);
  RecoveryConfig search_cfg = cfg.search;
  search_cfg.seed = Rng::mix(cfg.seed, 0xb1f2);
  ClimbOutcome searched = hill_climb(
      [&](const CVector& psi) {
        return optimize_recovery(state_of(psi), ch, search_cfg).fidelity;
      },
      false, canonical, cfg.restarts, cfg.max_evals, total, rng);

  RecoveryConfig refine_cfg = cfg.refine;
  refine_cfg.seed = Rng::mix(cfg.seed, 0xb1f3);
  RecoveryResult refined =
      optimize_recovery(state_of(searched.point), ch, refine_cfg);
  return BigPhiEstimate{refined.fidelity, searched.point,
                        std::move(refined.channel)};
}

Theorem3Result verify_theorem3(const KrausChannel& ch,
                               const Theorem3Config& cfg,
                               const std::string& instance) {
  if (ch.dim_a() != ch.dim_b()) {
    fail(ErrorCode::dim_mismatch,
         "identity-comparison checks need equal input and output dimensions");
  }
  int dim_a = ch.dim_a();
  int total = dim_a * dim_a;

  auto fidelity_at = [&](const CVector& psi) {
    CMatrix amp = amp_of(psi, dim_a, dim_a);
    CMatrix rho = (amp.adjoint() * amp).transpose();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return entanglement_fidelity(DensityMatrix(rho, {dim_a}), ch);
  };

  std::vector<CVector> canonical;
  canonical.push_back(maximally_entangled(dim_a).vec());
  for (int a = 0; a < dim_a; ++a) {
    canonical.push_back(basis_vector(total, a));  // |0>_R (x) |a>_A
  }
  Rng rng = Rng::derived(cfg.seed, 0x7e31);
  ClimbOutcome searched =
      hill_climb(fidelity_at, false, canonical, cfg.restarts, cfg.max_evals,
                 total, rng);

  DiamondConfig dc = cfg.diamond;
  dc.seed = Rng::mix(cfg.seed, 0x7e32);
  DiamondEstimate dist = diamond_distance(ch, identity_channel(dim_a), dc);

  double worst = std::clamp(searched.value, 0.0, 1.0);
  Theorem3Result out;
  out.worst_fidelity = worst;
  out.witness = searched.point;
  out.part_a = make_bound_record("thm3_a", 1.0 - worst,
                                 4.0 * std::sqrt(dist.lower), cfg.tolerance,
                                 instance, BoundStatus::conditional);
  out.part_b = make_bound_record("thm3_b", dist.lower,
                                 4.0 * std::sqrt(1.0 - worst), cfg.tolerance,
                                 instance, BoundStatus::conditional);
  out.distance = std::move(dist);
  return out;
}

std::pair<BoundCheckRecord, BoundCheckRecord> final_bound_records(
    int dim_a, int dim_b, LossTag kind, double qcb_value, double delta_value,
    double tolerance, const std::string& instance) {
  LossKind lk = LossKind::make(kind, dim_a, dim_b);
  std::pair<BoundCheckRecord, BoundCheckRecord> out;

  double arg = 4.0 * std::sqrt(std::max(0.0, qcb_value));
  if (arg > 0.5) {
    BoundCheckRecord rec;
    rec.name = "final_a";
    rec.lhs = delta_value;
    rec.rhs = 0.0;
    rec.slack = 0.0;
    rec.status = BoundStatus::skipped;
    rec.instance = instance + "; rate argument 4*sqrt(q)=" + fmt_double(arg) +
                   " exceeds 1/2";
    out.first = std::move(rec);
  } else {
    out.first = make_bound_record("final_a", delta_value, g_eval(arg, dim_a),
                                  tolerance, instance, BoundStatus::fail);
  }
  out.second = make_bound_record(
      "final_b", qcb_value,
      4.0 * std::pow(2.0 * lk.k_constant * delta_value, 0.25), tolerance,
      instance, BoundStatus::conditional);
  return out;
}

FinalBoundsResult verify_final_bounds(const KrausChannel& ch, LossTag kind,
                                      const FinalBoundsConfig& cfg,
                                      const std::string& instance) {
  QcbEstimate q = q_cb(ch, cfg.qcb);
  BigDeltaEstimate d = big_delta(ch, kind, cfg.delta);

  FinalBoundsResult out;
  out.qcb_value = q.value;
  out.delta_value = d.lower;
  auto records = final_bound_records(ch.dim_a(), ch.dim_b(), kind, q.value,
                                     d.lower, cfg.tolerance, instance);
  out.part_a = std::move(records.first);
  out.part_b = std::move(records.second);
  return out;
}

} // namespace entloss
