#include "entloss/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "entloss/entropy.hpp"
#include "entloss/eof.hpp"
#include "entloss/recovery.hpp"
#include "entloss/rng.hpp"

namespace entloss {

namespace {

using nlohmann::ordered_json;

constexpr double kEpsFamily[] = {1e-3, 1e-5, 1e-7};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return std::string(buf);
}

struct FamilyDef {
  const char* name;
  double tolerance;
  int default_instances;  // random instances per dim pair; 0 = structural only
};

// Fixed family order; this is also the report order.
constexpr FamilyDef kFamilies[] = {
    {"dpi_nonneg", 1e-9, 1000},
    {"thm1_direct", 1e-7, 500},
    {"thm1_converse", 1e-7, 500},
    {"thm2_direct2", 1e-6, 50},
    {"corollary_gap", 1e-6, 200},
    {"thm3_a", 1e-7, 100},
    {"thm3_b", 1e-7, 100},
    {"final_a", 1e-7, 0},
    {"final_b", 1e-7, 0},
    {"hashing_upper", 1e-4, 200},
    {"hashing_lower", 1e-4, 200},
    {"mutualinfo_half", 1e-9, 200},
};

int family_index(const char* name) {
  for (int i = 0; i < static_cast<int>(std::size(kFamilies)); ++i) {
    if (std::string(kFamilies[i].name) == name) {
      return i;
    }
  }
  fail(ErrorCode::internal_inconsistency, "unknown family name");
}

void add_record(FamilySummary& fam, BoundCheckRecord rec) {
  switch (rec.status) {
    case BoundStatus::pass: ++fam.passed; break;
    case BoundStatus::fail: ++fam.failed; break;
    case BoundStatus::skipped: ++fam.skipped; break;
    case BoundStatus::conditional: ++fam.conditional; break;
  }
  bool counts_for_worst = rec.status != BoundStatus::skipped;
  bool first = fam.passed + fam.failed + fam.conditional == 1 &&
               counts_for_worst;
  if (counts_for_worst && (first || rec.slack < fam.worst_slack)) {
    fam.worst_slack = rec.slack;
    fam.worst_instance = rec.instance;
  }
  fam.records.push_back(std::move(rec));
}

BoundCheckRecord skipped_record(std::string name, double lhs,
                                std::string instance) {
  BoundCheckRecord rec;
  rec.name = std::move(name);
  rec.lhs = lhs;
  rec.rhs = 0.0;
  rec.slack = 0.0;
  rec.status = BoundStatus::skipped;
  rec.instance = std::move(instance);
  return rec;
}

double clip_loss_nonneg(double v, const char* what) {
  if (v >= 0.0) {
    return v;
  }
  if (v >= -tol::loss_clip) {
    return 0.0;
  }
  fail(ErrorCode::internal_inconsistency,
       std::string(what) + " came out negative: " + fmt_short(v));
}

std::uint64_t inst_seed(std::uint64_t master, std::uint64_t family_tag,
                        std::uint64_t dim_idx, std::uint64_t k) {
  return Rng::mix(Rng::mix(Rng::mix(master, family_tag), 0x5eed0 + dim_idx), k);
}

std::string dim_str(int da, int db) {
  return std::to_string(da) + "x" + std::to_string(db);
}

DensityMatrix draw_state(const std::vector<int>& dims, std::uint64_t seed,
                         int* rank_out) {
  int total = 1;
  for (int d : dims) {
    total *= d;
  }
  Rng rng(Rng::mix(seed, 0x57));
  int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
  if (rank_out != nullptr) {
    *rank_out = rank;
  }
  return random_state(dims, rank, rng.next_raw());
}

KrausChannel draw_channel(int dim_a, int dim_b, std::uint64_t seed,
                          int* rank_out) {
  Rng rng(Rng::mix(seed, 0xc4));
  int rank_min = (dim_a + dim_b - 1) / dim_b;
  int rank_max = dim_a * dim_b;
  int rank = rank_min +
             static_cast<int>(rng.below(
                 static_cast<std::uint64_t>(rank_max - rank_min + 1)));
  if (rank_out != nullptr) {
    *rank_out = rank;
  }
  return random_channel(dim_a, dim_b, rank, rng.next_raw());
}

// Convex mixture of the identity map with a random channel: Kraus set
// {sqrt(1-eps) I} union {sqrt(eps) B_l}.
KrausChannel near_identity_channel(int dim, double eps, std::uint64_t seed) {
  KrausChannel base = random_channel(dim, dim, dim * dim, seed);
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - eps) *
                CMatrix::Identity(dim, dim).eval());
  for (const CMatrix& b : base.ops()) {
    ops.push_back(std::sqrt(eps) * b);
  }
  return KrausChannel(dim, dim, ops);
}

DensityMatrix isotropic_state(int dim, double eps) {
  PureBipartiteState phi = maximally_entangled(dim);
  CMatrix mat = (1.0 - eps) * (phi.vec() * phi.vec().adjoint()) +
                (eps / (dim * dim)) *
                    CMatrix::Identity(dim * dim, dim * dim);
  return DensityMatrix(mat, {dim, dim});
}

struct ZooEntry {
  std::string descriptor;
  KrausChannel channel;
};

// The named qubit channels exercised by the identity-comparison and
// bound-chain families.
std::vector<ZooEntry> qubit_zoo() {
  std::vector<ZooEntry> zoo;
  zoo.push_back({"identity(d=2)", identity_channel(2)});
  CMatrix z(2, 2);
  z.setZero();
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  zoo.push_back({"unitary_z(d=2)", unitary_channel(z)});
  for (int i = 1; i <= 9; ++i) {
    double p = 0.1 * i;
    zoo.push_back({"depolarizing(p=" + fmt_short(p) + ",d=2)",
                   depolarizing_channel(p, 2)});
  }
  zoo.push_back({"dephasing(p=0.5,d=2)", dephasing_channel(0.5, 2)});
  zoo.push_back({"amplitude_damping(gamma=0.5)",
                 amplitude_damping_channel(0.5)});
  return zoo;
}

struct ResolvedConfig {
  SuiteRestarts restarts;
  int counts[std::size(kFamilies)] = {};
  double tolerances[std::size(kFamilies)] = {};
};

ResolvedConfig resolve(const SuiteConfig& cfg) {
  if (cfg.dims.empty()) {
    fail(ErrorCode::config_error, "at least one dimension pair is required");
  }
  for (const auto& [da, db] : cfg.dims) {
    if (da < 2 || db < 2 || da * db > 9) {
      fail(ErrorCode::config_error,
           "dimension pairs must have both sides >= 2 and product <= 9");
    }
  }
  if (cfg.instances_per_dim < 0) {
    fail(ErrorCode::config_error, "instance count cannot be negative");
  }
  ResolvedConfig out;
  out.restarts = cfg.restarts;
  if (out.restarts.eof < 1 || out.restarts.recovery < 1 ||
      out.restarts.diamond < 1 || out.restarts.climb < 1) {
    fail(ErrorCode::config_error, "restart budgets must be positive");
  }
  if (cfg.quick) {
    out.restarts.eof = std::min(out.restarts.eof, 8);
    out.restarts.recovery = std::min(out.restarts.recovery, 8);
    out.restarts.diamond = std::min(out.restarts.diamond, 8);
    out.restarts.climb = std::min(out.restarts.climb, 8);
  }
  for (std::size_t i = 0; i < std::size(kFamilies); ++i) {
    int n = kFamilies[i].default_instances;
    if (cfg.instances_per_dim > 0 && n > 0) {
      n = cfg.instances_per_dim;
    }
    if (cfg.quick) {
      n = std::min(n, 50);
    }
    out.counts[i] = n;
    double tol_value = kFamilies[i].tolerance;
    auto it = cfg.tolerances.find(kFamilies[i].name);
    if (it != cfg.tolerances.end()) {
      if (!(it->second > 0.0)) {
        fail(ErrorCode::config_error, "tolerances must be positive");
      }
      tol_value = it->second;
    }
    out.tolerances[i] = tol_value;
  }
  for (const auto& [name, value] : cfg.tolerances) {
    bool known = false;
    for (const FamilyDef& f : kFamilies) {
      if (name == f.name) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(ErrorCode::config_error, "unknown tolerance family: " + name);
    }
    (void)value;
  }
  return out;
}

} // namespace

int VerifyReport::total_checked() const {
  int n = 0;
  for (const FamilySummary& f : families) {
    n += f.passed + f.failed + f.skipped + f.conditional;
  }
  return n;
}

int VerifyReport::total_passed() const {
  int n = 0;
  for (const FamilySummary& f : families) n += f.passed;
  return n;
}

int VerifyReport::total_failed() const {
  int n = 0;
  for (const FamilySummary& f : families) n += f.failed;
  return n;
}

int VerifyReport::total_skipped() const {
  int n = 0;
  for (const FamilySummary& f : families) n += f.skipped;
  return n;
}

int VerifyReport::total_conditional() const {
  int n = 0;
  for (const FamilySummary& f : families) n += f.conditional;
  return n;
}

int VerifyReport::exit_code() const {
  bool any_fail = false;
  for (const FamilySummary& f : families) {
    if (f.failed > 0) {
      if (f.name == "final_a" || f.name == "final_b") {
        return 3;
      }
      any_fail = true;
    }
  }
  return any_fail ? 1 : 0;
}

VerifyReport run_verify(const SuiteConfig& cfg) {
  ResolvedConfig rc = resolve(cfg);

  VerifyReport report;
  report.config = cfg;
  report.families.resize(std::size(kFamilies));
  for (std::size_t i = 0; i < std::size(kFamilies); ++i) {
    report.families[i].name = kFamilies[i].name;
    report.families[i].tolerance = rc.tolerances[i];
  }
  auto fam = [&](const char* name) -> FamilySummary& {
    return report.families[static_cast<std::size_t>(family_index(name))];
  };
  auto tol_of = [&](const char* name) {
    return rc.tolerances[static_cast<std::size_t>(family_index(name))];
  };
  auto count_of = [&](const char* name) {
    return rc.counts[static_cast<std::size_t>(family_index(name))];
  };

  EofConfig eof_full{rc.restarts.eof, 2000, 1e-8, 0, 0};
  EofConfig eof_medium{std::min(rc.restarts.eof, 8), 800, 1e-8, 0, 0};
  EofConfig eof_cheap{std::min(rc.restarts.eof, 4), 400, 1e-7, 0, 0};

  // --- nonnegativity of the coherent-information loss -------------------
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    auto [da, db] = cfg.dims[di];
    for (int k = 0; k < count_of("dpi_nonneg"); ++k) {
      std::uint64_t s = inst_seed(cfg.seed, 1, di, static_cast<std::uint64_t>(k));
      int srank = 0;
      int crank = 0;
      DensityMatrix rho = draw_state({da}, s, &srank);
      KrausChannel ch = draw_channel(da, db, Rng::mix(s, 2), &crank);
      double loss = von_neumann_entropy(rho) -
                    channel_coherent_information(rho, ch);
      std::string inst = "dims=" + dim_str(da, db) + " idx=" +
                         std::to_string(k) + " state_rank=" +
                         std::to_string(srank) + " ch_rank=" +
                         std::to_string(crank);
      add_record(fam("dpi_nonneg"),
                 make_bound_record("dpi_nonneg", 0.0, loss,
                                   tol_of("dpi_nonneg"), inst));
    }
  }

  // --- recovery fidelity vs coherent-information loss -------------------
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    auto [da, db] = cfg.dims[di];
    for (int k = 0; k < count_of("thm1_direct"); ++k) {
      std::uint64_t s = inst_seed(cfg.seed, 2, di, static_cast<std::uint64_t>(k));
      int srank = 0;
      int crank = 0;
      DensityMatrix rho = draw_state({da}, s, &srank);
      KrausChannel ch = draw_channel(da, db, Rng::mix(s, 2), &crank);
      double loss = delta_c(rho, ch);

      RecoveryConfig rcfg;
      rcfg.restarts = rc.restarts.recovery;
      rcfg.seed = Rng::mix(s, 3);
      rcfg.record_trace = true;
      RecoveryResult rr = optimize_recovery(rho, ch, rcfg);

      std::string inst = "dims=" + dim_str(da, db) + " idx=" +
                         std::to_string(k) + " state_rank=" +
                         std::to_string(srank) + " ch_rank=" +
                         std::to_string(crank);

      double transpose_fid = rr.tried_fidelities.front();
      add_record(fam("thm1_direct"),
                 make_bound_record("thm1_direct",
                                   1.0 - std::sqrt(2.0 * loss), transpose_fid,
                                   tol_of("thm1_direct"), inst));

      double f_max = rr.fidelity;
      for (double f : rr.tried_fidelities) {
        f_max = std::max(f_max, f);
      }
      if (f_max < 0.5) {
        add_record(fam("thm1_converse"),
                   skipped_record("thm1_converse", loss,
                                  inst + "; no evaluated recovery reached "
                                         "fidelity 1/2"));
      } else {
        double x = std::clamp(1.0 - f_max, 0.0, 0.5);
        add_record(fam("thm1_converse"),
                   make_bound_record("thm1_converse", loss, g_eval(x, da),
                                     tol_of("thm1_converse"), inst));
      }
    }
  }

  // --- recovery fidelity vs formation loss ------------------------------
  {
    double k_tol = tol_of("thm2_direct2");
    auto run_thm2 = [&](const DensityMatrix& rho, const KrausChannel& ch,
                        const EofConfig& ecfg, std::uint64_t seed,
                        const std::string& inst) {
      int da = ch.dim_a();
      int db = ch.dim_b();
      double k_f = LossKind::make(LossTag::formation, da, db).k_constant;
      DensityMatrix sigma = apply_to_subsystem(ch, purify(rho));
      EofConfig used = ecfg;
      used.seed = Rng::mix(seed, 11);
      double formation_loss = clip_loss_nonneg(
          von_neumann_entropy(rho) - eof(sigma, used).value,
          "formation loss");
      double lhs = 1.0 - std::sqrt(2.0 * k_f * formation_loss);
      if (lhs <= 0.0) {
        add_record(fam("thm2_direct2"),
                   skipped_record("thm2_direct2", lhs,
                                  inst + "; bound trivial (lhs <= 0)"));
        return;
      }
      RecoveryConfig rcfg;
      rcfg.restarts = rc.restarts.recovery;
      rcfg.seed = Rng::mix(seed, 12);
      double fid = optimize_recovery(rho, ch, rcfg).fidelity;
      add_record(fam("thm2_direct2"),
                 make_bound_record("thm2_direct2", lhs, fid, k_tol, inst));
    };

    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
      auto [da, db] = cfg.dims[di];
      if (da == db) {
        for (std::size_t e = 0; e < std::size(kEpsFamily); ++e) {
          double eps = kEpsFamily[e];
          std::uint64_t s =
              inst_seed(cfg.seed, 3, di, 1000 + static_cast<std::uint64_t>(e));
          KrausChannel ch = near_identity_channel(da, eps, Rng::mix(s, 1));
          DensityMatrix rho = maximally_mixed(da);
          run_thm2(rho, ch, eof_full, s,
                   "dims=" + dim_str(da, db) + " eps=" + fmt_short(eps) +
                       " near-identity on maximally mixed");
        }
      }
      for (int k = 0; k < count_of("thm2_direct2"); ++k) {
        std::uint64_t s =
            inst_seed(cfg.seed, 3, di, static_cast<std::uint64_t>(k));
        int srank = 0;
        int crank = 0;
        DensityMatrix rho = draw_state({da}, s, &srank);
        KrausChannel ch = draw_channel(da, db, Rng::mix(s, 2), &crank);
        run_thm2(rho, ch, eof_cheap, s,
                 "dims=" + dim_str(da, db) + " idx=" + std::to_string(k) +
                     " state_rank=" + std::to_string(srank) + " ch_rank=" +
                     std::to_string(crank));
      }
    }
  }

  // --- state-level gap between coherent and formation losses ------------
  {
    double k_tol = tol_of("corollary_gap");
    auto run_corollary = [&](const DensityMatrix& tau, const EofConfig& ecfg,
                             std::uint64_t seed, const std::string& inst) {
      int da = tau.dim_at(0);
      int db = tau.dim_at(1);
      double k_f = LossKind::make(LossTag::formation, da, db).k_constant;
      double s_a = von_neumann_entropy(partial_trace(tau, {0}));
      double s_b = von_neumann_entropy(partial_trace(tau, {1}));
      double s_ab = von_neumann_entropy(tau);
      // Orient so the source side has the smaller marginal entropy.
      double s_src = std::min(s_a, s_b);
      double s_dst = std::max(s_a, s_b);
      int d_src = s_a <= s_b ? da : db;
      double coherent_loss = s_src - (s_dst - s_ab);
      EofConfig used = ecfg;
      used.seed = Rng::mix(seed, 21);
      double formation_loss =
          clip_loss_nonneg(s_src - eof(tau, used).value, "formation loss");
      double arg = std::sqrt(2.0 * k_f * formation_loss);
      if (arg > 0.5) {
        add_record(fam("corollary_gap"),
                   skipped_record("corollary_gap", coherent_loss,
                                  inst + "; rate argument " + fmt_short(arg) +
                                      " exceeds 1/2"));
        return;
      }
      add_record(fam("corollary_gap"),
                 make_bound_record("corollary_gap", coherent_loss,
                                   g_eval(arg, d_src), k_tol, inst));
    };

    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
      auto [da, db] = cfg.dims[di];
      if (da == db) {
        for (std::size_t e = 0; e < std::size(kEpsFamily); ++e) {
          double eps = kEpsFamily[e];
          std::uint64_t s =
              inst_seed(cfg.seed, 4, di, 1000 + static_cast<std::uint64_t>(e));
          run_corollary(isotropic_state(da, eps), eof_full, s,
                        "dims=" + dim_str(da, db) + " isotropic eps=" +
                            fmt_short(eps));
        }
      }
      for (int k = 0; k < count_of("corollary_gap"); ++k) {
        std::uint64_t s =
            inst_seed(cfg.seed, 4, di, static_cast<std::uint64_t>(k));
        int rank = 0;
        DensityMatrix tau = draw_state({da, db}, s, &rank);
        run_corollary(tau, eof_cheap, s,
                      "dims=" + dim_str(da, db) + " idx=" + std::to_string(k) +
                          " rank=" + std::to_string(rank));
      }
    }
  }

  // --- worst-case fidelity vs distance from the identity ----------------
  {
    double tol_a = tol_of("thm3_a");
    double tol_b = tol_of("thm3_b");
    auto run_thm3 = [&](const KrausChannel& ch, std::uint64_t seed,
                        const std::string& inst) {
      Theorem3Config tc;
      tc.diamond.restarts = rc.restarts.diamond;
      tc.restarts = rc.restarts.climb;
      tc.tolerance = tol_a;
      tc.seed = seed;
      Theorem3Result res = verify_theorem3(ch, tc, inst);
      add_record(fam("thm3_a"), res.part_a);
      add_record(fam("thm3_b"),
                 make_bound_record("thm3_b", res.part_b.lhs, res.part_b.rhs,
                                   tol_b, inst, BoundStatus::conditional));
    };

    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
      auto [da, db] = cfg.dims[di];
      if (da != db) {
        continue;
      }
      if (da == 2) {
        std::vector<ZooEntry> zoo = qubit_zoo();
        for (std::size_t zi = 0; zi < zoo.size(); ++zi) {
          run_thm3(zoo[zi].channel,
                   inst_seed(cfg.seed, 5, di, 0x2000 + zi),
                   zoo[zi].descriptor);
        }
      }
      for (int k = 0; k < count_of("thm3_a"); ++k) {
        std::uint64_t s =
            inst_seed(cfg.seed, 5, di, static_cast<std::uint64_t>(k));
        int crank = 0;
        KrausChannel ch = draw_channel(da, db, Rng::mix(s, 2), &crank);
        run_thm3(ch, s,
                 "dims=" + dim_str(da, db) + " idx=" + std::to_string(k) +
                     " ch_rank=" + std::to_string(crank));
      }
    }
  }

  // --- bound chain on the qubit zoo --------------------------------------
  {
    bool has_22 = false;
    for (const auto& [da, db] : cfg.dims) {
      has_22 = has_22 || (da == 2 && db == 2);
    }
    if (has_22) {
      double tol_a = tol_of("final_a");
      double tol_b = tol_of("final_b");
      std::vector<ZooEntry> zoo = qubit_zoo();
      for (std::size_t zi = 0; zi < zoo.size(); ++zi) {
        std::uint64_t s =
            inst_seed(cfg.seed, 6, 0, static_cast<std::uint64_t>(zi));
        QcbConfig qc;
        qc.outer_rounds = cfg.quick ? 6 : 12;
        qc.inner.restarts = std::min(rc.restarts.diamond, 12);
        qc.final_eval.restarts = rc.restarts.diamond;
        qc.seed = Rng::mix(s, 31);
        QcbEstimate q = q_cb(zoo[zi].channel, qc);

        for (LossTag kind : {LossTag::coherent, LossTag::formation}) {
          BigDeltaConfig dc;
          dc.seed = Rng::mix(s, kind == LossTag::coherent ? 32 : 33);
          if (kind == LossTag::coherent) {
            dc.restarts = std::min(rc.restarts.climb, 16);
            dc.max_evals = 300;
          } else {
            dc.restarts = std::min(rc.restarts.climb, 4);
            dc.max_evals = 60;
            dc.search_eof = EofConfig{2, 200, 1e-6, 0, 0};
            dc.final_eof = EofConfig{std::min(rc.restarts.eof, 16), 1500,
                                     1e-8, 0, 0};
          }
          BigDeltaEstimate d = big_delta(zoo[zi].channel, kind, dc);
          std::string inst = zoo[zi].descriptor +
                             (kind == LossTag::coherent ? "; loss=c"
                                                        : "; loss=f");
          auto recs = final_bound_records(2, 2, kind, q.value, d.lower, tol_a,
                                          inst);
          add_record(fam("final_a"), std::move(recs.first));
          if (recs.second.status != BoundStatus::skipped && tol_b != tol_a) {
            recs.second =
                make_bound_record("final_b", recs.second.lhs, recs.second.rhs,
                                  tol_b, inst, BoundStatus::conditional);
          }
          add_record(fam("final_b"), std::move(recs.second));
        }
      }
    }
  }

  // --- measure-chain consequences on states ------------------------------
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    auto [da, db] = cfg.dims[di];
    if (da * db > 6) {
      continue;  // formation estimates get slow beyond qubit-qutrit
    }
    for (int k = 0; k < count_of("hashing_upper"); ++k) {
      std::uint64_t s = inst_seed(cfg.seed, 7, di, static_cast<std::uint64_t>(k));
      int rank = 0;
      DensityMatrix tau = draw_state({da, db}, s, &rank);
      EofConfig used = eof_medium;
      used.seed = Rng::mix(s, 41);
      double formation = eof(tau, used).value;
      double s_a = von_neumann_entropy(partial_trace(tau, {0}));
      double s_b = von_neumann_entropy(partial_trace(tau, {1}));
      double ic = coherent_information(tau, Direction::a_to_b);
      std::string inst = "dims=" + dim_str(da, db) + " idx=" +
                         std::to_string(k) + " rank=" + std::to_string(rank);
      add_record(fam("hashing_upper"),
                 make_bound_record("hashing_upper", formation,
                                   std::min(s_a, s_b),
                                   tol_of("hashing_upper"), inst));
      add_record(fam("hashing_lower"),
                 make_bound_record("hashing_lower", std::max(ic, 0.0),
                                   formation, tol_of("hashing_lower"), inst));
    }
  }

  // --- coherent information vs half the mutual information ---------------
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    auto [da, db] = cfg.dims[di];
    for (int k = 0; k < count_of("mutualinfo_half"); ++k) {
      std::uint64_t s = inst_seed(cfg.seed, 8, di, static_cast<std::uint64_t>(k));
      int rank = 0;
      DensityMatrix tau = draw_state({da, db}, s, &rank);
      double ic = coherent_information(tau, Direction::a_to_b);
      double half_mutual = 0.5 * mutual_information(tau);
      std::string inst = "dims=" + dim_str(da, db) + " idx=" +
                         std::to_string(k) + " rank=" + std::to_string(rank);
      add_record(fam("mutualinfo_half"),
                 make_bound_record("mutualinfo_half", std::max(ic, 0.0),
                                   half_mutual, tol_of("mutualinfo_half"),
                                   inst));
    }
  }

  return report;
}

namespace {

ordered_json record_json(const BoundCheckRecord& rec) {
  ordered_json j;
  j["name"] = rec.name;
  j["lhs"] = rec.lhs;
  j["rhs"] = rec.rhs;
  j["slack"] = rec.slack;
  j["status"] = bound_status_name(rec.status);
  j["instance"] = rec.instance;
  return j;
}

} // namespace

std::string verify_report_json(const VerifyReport& report) {
  ordered_json j;
  ordered_json config;
  config["seed"] = report.config.seed;
  ordered_json dims = ordered_json::array();
  for (const auto& [da, db] : report.config.dims) {
    dims.push_back({da, db});
  }
  config["dims"] = dims;
  config["instances_per_dim"] = report.config.instances_per_dim;
  config["quick"] = report.config.quick;
  ordered_json restarts;
  restarts["eof"] = report.config.restarts.eof;
  restarts["recovery"] = report.config.restarts.recovery;
  restarts["diamond"] = report.config.restarts.diamond;
  restarts["climb"] = report.config.restarts.climb;
  config["restarts"] = restarts;
  ordered_json tols = ordered_json::object();
  for (const auto& [name, value] : report.config.tolerances) {
    tols[name] = value;
  }
  config["tolerances"] = tols;
  j["config"] = config;

  ordered_json families = ordered_json::array();
  for (const FamilySummary& f : report.families) {
    ordered_json fj;
    fj["name"] = f.name;
    fj["tolerance"] = f.tolerance;
    fj["checked"] = f.passed + f.failed + f.skipped + f.conditional;
    fj["pass"] = f.passed;
    fj["fail"] = f.failed;
    fj["skipped"] = f.skipped;
    fj["conditional"] = f.conditional;
    if (f.passed + f.failed + f.conditional > 0) {
      fj["worst_slack"] = f.worst_slack;
      fj["worst_instance"] = f.worst_instance;
    }
    ordered_json recs = ordered_json::array();
    for (const BoundCheckRecord& rec : f.records) {
      if (rec.status != BoundStatus::pass) {
        recs.push_back(record_json(rec));
      }
    }
    fj["records"] = recs;
    families.push_back(fj);
  }
  j["families"] = families;

  ordered_json totals;
  totals["checked"] = report.total_checked();
  totals["pass"] = report.total_passed();
  totals["fail"] = report.total_failed();
  totals["skipped"] = report.total_skipped();
  totals["conditional"] = report.total_conditional();
  j["totals"] = totals;
  j["exit_code"] = report.exit_code();
  return j.dump(2) + "\n";
}

std::string verify_report_csv(const VerifyReport& report) {
  std::string out = "family,instance,lhs,rhs,slack,status\n";
  for (const FamilySummary& f : report.families) {
    for (const BoundCheckRecord& rec : f.records) {
      std::string quoted = "\"";
      for (char c : rec.instance) {
        if (c == '"') {
          quoted += "\"\"";
        } else {
          quoted += c;
        }
      }
      quoted += "\"";
      out += f.name + "," + quoted + "," + fmt12(rec.lhs) + "," +
             fmt12(rec.rhs) + "," + fmt12(rec.slack) + "," +
             bound_status_name(rec.status) + "\n";
    }
  }
  return out;
}

std::string fig2_csv(int grid_size) {
  if (grid_size < 2) {
    fail(ErrorCode::config_error, "grid size must be at least 2");
  }
  const double s_max = std::log2(3.0);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_size) + 256);
  for (int i = 0; i < grid_size; ++i) {
    if (i == 0) {
      grid.push_back(0.0);
    } else if (i == grid_size - 1) {
      grid.push_back(s_max);
    } else {
      grid.push_back(s_max * static_cast<double>(i) /
                     static_cast<double>(grid_size - 1));
    }
  }
  // Logarithmic refinement of the near-maximum tail, where the bound turns
  // nontrivial.
  for (int t = 0; t <= 175; ++t) {
    double delta = std::pow(10.0, -(2.0 + 0.04 * t));
    grid.push_back(s_max - delta);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Fig2Point> pts = fig2_curve(grid);
  std::string out = "ef_norm,bound_norm\n";
  char buf[96];
  for (const Fig2Point& p : pts) {
    std::snprintf(buf, sizeof(buf), "%#.12g,%#.12g\n", p.ef / s_max,
                  p.bound / s_max);
    out += buf;
  }
  return out;
}

ChannelReport build_channel_report(const KrausChannel& ch,
                                   const std::string& descriptor,
                                   const DensityMatrix* rho,
                                   const ReportOptions& opts) {
  int da = ch.dim_a();
  int db = ch.dim_b();
  if (da * db > 9) {
    fail(ErrorCode::dim_too_large,
         "channel reports support total dimension up to 9");
  }

  ChannelReport report;
  report.channel_descriptor = descriptor;

  QcbConfig qc;
  if (opts.quick) {
    qc.outer_rounds = 6;
    qc.inner.restarts = 8;
    qc.final_eval.restarts = 8;
  }
  qc.seed = Rng::mix(opts.seed, 0x0e1);
  QcbEstimate q = q_cb(ch, qc);
  report.q_cb_upper = q.value;

  BigDeltaConfig dcc;
  dcc.seed = Rng::mix(opts.seed, 0x0e2);
  if (opts.quick) {
    dcc.restarts = 8;
    dcc.max_evals = 150;
  }
  BigDeltaEstimate d_c = big_delta(ch, LossTag::coherent, dcc);
  report.delta_c_lower = d_c.lower;

  BigDeltaConfig dcf;
  dcf.seed = Rng::mix(opts.seed, 0x0e3);
  dcf.restarts = opts.quick ? 2 : 4;
  dcf.max_evals = opts.quick ? 40 : 60;
  dcf.search_eof = EofConfig{2, 200, 1e-6, 0, 0};
  dcf.final_eof = EofConfig{opts.quick ? 8 : 16, 1500, 1e-8, 0, 0};
  BigDeltaEstimate d_f = big_delta(ch, LossTag::formation, dcf);
  report.delta_f_lower = d_f.lower;

  BigPhiConfig pc;
  pc.seed = Rng::mix(opts.seed, 0x0e4);
  if (opts.quick) {
    pc.restarts = 4;
    pc.max_evals = 40;
  }
  report.phi_lower = big_phi(ch, pc).lower;

  DensityMatrix state = rho != nullptr ? *rho : maximally_mixed(da);
  if (state.dim() != da) {
    fail(ErrorCode::dim_mismatch, "state dimension does not match the channel");
  }
  std::string state_name = opts.state_descriptor;
  if (state_name.empty()) {
    state_name = rho != nullptr ? "custom" : "maximally_mixed";
  }
  std::string state_inst = descriptor + "; state=" + state_name;

  double loss_raw = von_neumann_entropy(state) -
                    channel_coherent_information(state, ch);
  report.bounds.push_back(
      make_bound_record("dpi_nonneg", 0.0, loss_raw, 1e-9, state_inst));

  double loss = delta_c(state, ch);
  RecoveryConfig rcfg;
  rcfg.restarts = opts.quick ? 8 : 16;
  rcfg.seed = Rng::mix(opts.seed, 0x0e5);
  rcfg.record_trace = true;
  RecoveryResult rr = optimize_recovery(state, ch, rcfg);
  report.bounds.push_back(make_bound_record(
      "thm1_direct", 1.0 - std::sqrt(2.0 * loss), rr.tried_fidelities.front(),
      1e-7, state_inst));
  double f_max = rr.fidelity;
  for (double f : rr.tried_fidelities) {
    f_max = std::max(f_max, f);
  }
  if (f_max < 0.5) {
    report.bounds.push_back(skipped_record(
        "thm1_converse", loss,
        state_inst + "; no evaluated recovery reached fidelity 1/2"));
  } else {
    report.bounds.push_back(make_bound_record(
        "thm1_converse", loss, g_eval(std::clamp(1.0 - f_max, 0.0, 0.5), da),
        1e-7, state_inst));
  }

  double k_f = LossKind::make(LossTag::formation, da, db).k_constant;
  DensityMatrix sigma = apply_to_subsystem(ch, purify(state));
  EofConfig ecfg{opts.quick ? 8 : 32, 2000, 1e-8, 0,
                 Rng::mix(opts.seed, 0x0e6)};
  double formation_loss = clip_loss_nonneg(
      von_neumann_entropy(state) - eof(sigma, ecfg).value, "formation loss");
  double lhs2 = 1.0 - std::sqrt(2.0 * k_f * formation_loss);
  if (lhs2 <= 0.0) {
    report.bounds.push_back(skipped_record(
        "thm2_direct2", lhs2, state_inst + "; bound trivial (lhs <= 0)"));
  } else {
    report.bounds.push_back(make_bound_record("thm2_direct2", lhs2,
                                              rr.fidelity, 1e-6, state_inst));
  }

  if (da == db) {
    Theorem3Config tc;
    if (opts.quick) {
      tc.diamond.restarts = 8;
      tc.restarts = 8;
    }
    tc.seed = Rng::mix(opts.seed, 0x0e7);
    Theorem3Result t3 = verify_theorem3(ch, tc, descriptor);
    report.bounds.push_back(t3.part_a);
    report.bounds.push_back(t3.part_b);
  }

  for (LossTag kind : {LossTag::coherent, LossTag::formation}) {
    double d_val = kind == LossTag::coherent ? d_c.lower : d_f.lower;
    std::string inst =
        descriptor + (kind == LossTag::coherent ? "; loss=c" : "; loss=f");
    auto recs = final_bound_records(da, db, kind, q.value, d_val, 1e-7, inst);
    report.bounds.push_back(std::move(recs.first));
    report.bounds.push_back(std::move(recs.second));
  }
  return report;
}

std::string channel_report_json(const ChannelReport& report) {
  ordered_json j;
  j["channel_descriptor"] = report.channel_descriptor;
  j["q_cb_upper"] = report.q_cb_upper;
  j["delta_c_lower"] = report.delta_c_lower;
  j["delta_f_lower"] = report.delta_f_lower;
  j["phi_lower"] = report.phi_lower;
  ordered_json bounds = ordered_json::array();
  for (const BoundCheckRecord& rec : report.bounds) {
    ordered_json b;
    b["name"] = rec.name;
    b["lhs"] = rec.lhs;
    b["rhs"] = rec.rhs;
    b["slack"] = rec.slack;
    b["status"] = bound_status_name(rec.status);
    bounds.push_back(b);
  }
  j["bounds"] = bounds;
  return j.dump(2) + "\n";
}

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io_error, "cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool parse_number(const std::string& text, double* out) {
  if (text.empty()) {
    return false;
  }
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    return false;
  }
  *out = v;
  return true;
}

// "name" or "name:k=v,k=v" -> (name, params as JSON text).
std::pair<std::string, std::string> split_spec(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name =
      colon == std::string::npos ? spec : spec.substr(0, colon);
  ordered_json params = ordered_json::object();
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      std::string item = rest.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      pos = comma == std::string::npos ? rest.size() : comma + 1;
      if (item.empty()) {
        continue;
      }
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        fail(ErrorCode::parse_error,
             "malformed parameter (expected k=v): " + item);
      }
      std::string key = item.substr(0, eq);
      std::string value = item.substr(eq + 1);
      double num = 0.0;
      if (parse_number(value, &num)) {
        params[key] = num;
      } else {
        params[key] = value;
      }
    }
  }
  return {name, params.dump()};
}

double param_of(const std::string& params_json, const std::string& key,
                bool* found) {
  auto j = nlohmann::json::parse(params_json);
  if (!j.contains(key) || !j[key].is_number()) {
    *found = false;
    return 0.0;
  }
  *found = true;
  return j[key].get<double>();
}

double require_param(const std::string& params_json, const std::string& key) {
  bool found = false;
  double v = param_of(params_json, key, &found);
  if (!found) {
    fail(ErrorCode::bad_param, "missing numeric parameter: " + key);
  }
  return v;
}

} // namespace

KrausChannel parse_channel_spec(const std::string& spec) {
  if (spec.empty()) {
    fail(ErrorCode::parse_error, "empty channel spec");
  }
  if (spec[0] == '@') {
    return channel_from_json(read_text_file(spec.substr(1)));
  }
  auto [name, params] = split_spec(spec);
  return channel_zoo(name, params);
}

DensityMatrix parse_state_spec(const std::string& spec) {
  if (spec.empty()) {
    fail(ErrorCode::parse_error, "empty state spec");
  }
  if (spec[0] == '@') {
    return state_from_json(read_text_file(spec.substr(1)));
  }
  auto [name, params] = split_spec(spec);
  if (name == "maximally_mixed") {
    int d = static_cast<int>(require_param(params, "d"));
    if (d < 1) {
      fail(ErrorCode::bad_param, "dimension must be positive");
    }
    return maximally_mixed(d);
  }
  if (name == "bell") {
    return maximally_entangled(2).density();
  }
  if (name == "isotropic") {
    int d = static_cast<int>(require_param(params, "d"));
    double eps = require_param(params, "eps");
    if (d < 2 || eps < 0.0 || eps > 1.0) {
      fail(ErrorCode::bad_param, "isotropic needs d >= 2 and eps in [0,1]");
    }
    return isotropic_state(d, eps);
  }
  if (name == "random") {
    bool has_d = false;
    double d_val = param_of(params, "d", &has_d);
    std::vector<int> dims;
    if (has_d) {
      dims = {static_cast<int>(d_val)};
    } else {
      dims = {static_cast<int>(require_param(params, "da")),
              static_cast<int>(require_param(params, "db"))};
    }
    int rank = static_cast<int>(require_param(params, "rank"));
    auto seed = static_cast<std::uint64_t>(require_param(params, "seed"));
    return random_state(dims, rank, seed);
  }
  fail(ErrorCode::parse_error, "unknown state spec: " + name);
}

std::vector<std::pair<int, int>> parse_dims(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) {
      fail(ErrorCode::config_error, "empty dimension entry");
    }
    auto x = item.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= item.size()) {
      fail(ErrorCode::config_error,
           "dimension entries must look like 2x3: " + item);
    }
    try {
      std::size_t used = 0;
      int da = std::stoi(item.substr(0, x), &used);
      if (used != x) {
        throw std::invalid_argument(item);
      }
      int db = std::stoi(item.substr(x + 1), &used);
      if (used != item.size() - x - 1) {
        throw std::invalid_argument(item);
      }
      out.emplace_back(da, db);
    } catch (const std::exception&) {
      fail(ErrorCode::config_error, "cannot parse dimension entry: " + item);
    }
  }
  return out;
}

} // namespace entloss
