#include "entloss.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <utility>

#include <json.hpp>

#include "entloss/channels.hpp"
#include "entloss/cbnorm.hpp"
#include "entloss/entropy.hpp"
#include "entloss/eof.hpp"
#include "entloss/qcore.hpp"
#include "entloss/recovery.hpp"
#include "entloss/suites.hpp"
#include "entloss/types.hpp"

struct entloss_channel {
  entloss::KrausChannel impl;
};

struct entloss_state {
  entloss::DensityMatrix impl;
};

namespace {

thread_local std::string g_last_error;

entloss_status to_status(entloss::ErrorCode code) {
  using EC = entloss::ErrorCode;
  switch (code) {
    case EC::ok: return ENTLOSS_OK;
    case EC::bad_arg: return ENTLOSS_BAD_ARG;
    case EC::dim_mismatch: return ENTLOSS_DIM_MISMATCH;
    case EC::not_square: return ENTLOSS_NOT_SQUARE;
    case EC::not_hermitian: return ENTLOSS_NOT_HERMITIAN;
    case EC::not_cptp: return ENTLOSS_NOT_CPTP;
    case EC::not_positive: return ENTLOSS_NOT_POSITIVE;
    case EC::not_normalized: return ENTLOSS_NOT_NORMALIZED;
    case EC::bad_param: return ENTLOSS_BAD_PARAM;
    case EC::unknown_channel: return ENTLOSS_UNKNOWN_CHANNEL;
    case EC::index_out_of_range: return ENTLOSS_INDEX_OUT_OF_RANGE;
    case EC::not_computable: return ENTLOSS_NOT_COMPUTABLE;
    case EC::dim_too_large: return ENTLOSS_DIM_TOO_LARGE;
    case EC::domain_error: return ENTLOSS_DOMAIN_ERROR;
    case EC::parse_error: return ENTLOSS_PARSE_ERROR;
    case EC::io_error: return ENTLOSS_IO_ERROR;
    case EC::config_error: return ENTLOSS_CONFIG_ERROR;
    case EC::internal_inconsistency: return ENTLOSS_INTERNAL_INCONSISTENCY;
  }
  return ENTLOSS_INTERNAL_INCONSISTENCY;
}

template <typename F>
entloss_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ENTLOSS_OK;
  } catch (const entloss::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ENTLOSS_INTERNAL_INCONSISTENCY;
  } catch (...) {
    g_last_error = "unknown error";
    return ENTLOSS_INTERNAL_INCONSISTENCY;
  }
}

entloss_status bad_arg(const char* msg) {
  g_last_error = msg;
  return ENTLOSS_BAD_ARG;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) {
    entloss::fail(entloss::ErrorCode::internal_inconsistency,
                  "out of memory");
  }
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

entloss::SuiteConfig parse_suite_config(const char* text) {
  entloss::SuiteConfig cfg;
  if (text == nullptr || std::string(text).empty()) {
    return cfg;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    entloss::fail(entloss::ErrorCode::config_error,
                  std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    entloss::fail(entloss::ErrorCode::config_error,
                  "config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        entloss::fail(entloss::ErrorCode::config_error,
                      "seed must be an integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "dims") {
      if (value.is_string()) {
        cfg.dims = entloss::parse_dims(value.get<std::string>());
      } else if (value.is_array()) {
        cfg.dims.clear();
        for (const auto& pair : value) {
          if (!pair.is_array() || pair.size() != 2 ||
              !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
            entloss::fail(entloss::ErrorCode::config_error,
                          "dims entries must be [dA, dB] integer pairs");
          }
          cfg.dims.emplace_back(pair[0].get<int>(), pair[1].get<int>());
        }
      } else {
        entloss::fail(entloss::ErrorCode::config_error,
                      "dims must be a string or an array of pairs");
      }
    } else if (key == "instances_per_dim") {
      if (!value.is_number_integer()) {
        entloss::fail(entloss::ErrorCode::config_error,
                      "instances_per_dim must be an integer");
      }
      cfg.instances_per_dim = value.get<int>();
    } else if (key == "quick") {
      if (!value.is_boolean()) {
        entloss::fail(entloss::ErrorCode::config_error,
                      "quick must be a boolean");
      }
      cfg.quick = value.get<bool>();
    } else if (key == "restarts") {
      if (!value.is_object()) {
        entloss::fail(entloss::ErrorCode::config_error,
                      "restarts must be an object");
      }
      for (const auto& [rk, rv] : value.items()) {
        if (!rv.is_number_integer()) {
          entloss::fail(entloss::ErrorCode::config_error,
                        "restart budgets must be integers");
        }
        int n = rv.get<int>();
        if (rk == "eof") {
          cfg.restarts.eof = n;
        } else if (rk == "recovery") {
          cfg.restarts.recovery = n;
        } else if (rk == "diamond") {
          cfg.restarts.diamond = n;
        } else if (rk == "climb") {
          cfg.restarts.climb = n;
        } else {
          entloss::fail(entloss::ErrorCode::config_error,
                        "unknown restart budget: " + rk);
        }
      }
    } else if (key == "tolerances") {
      if (!value.is_object()) {
        entloss::fail(entloss::ErrorCode::config_error,
                      "tolerances must be an object");
      }
      for (const auto& [tk, tv] : value.items()) {
        if (!tv.is_number()) {
          entloss::fail(entloss::ErrorCode::config_error,
                        "tolerances must be numbers");
        }
        cfg.tolerances[tk] = tv.get<double>();
      }
    } else {
      entloss::fail(entloss::ErrorCode::config_error,
                    "unknown config key: " + key);
    }
  }
  return cfg;
}

} // namespace

extern "C" {

const char* entloss_status_name(entloss_status status) {
  return entloss::error_code_name(
      static_cast<entloss::ErrorCode>(static_cast<int>(status)));
}

const char* entloss_last_error(void) { return g_last_error.c_str(); }

void entloss_string_free(char* text) { std::free(text); }

/* ---- channels ---- */

entloss_status entloss_channel_parse(const char* spec, entloss_channel** out) {
  if (spec == nullptr || out == nullptr) {
    return bad_arg("spec and out must be non-null");
  }
  return guarded([&] {
    *out = new entloss_channel{entloss::parse_channel_spec(spec)};
  });
}

entloss_status entloss_channel_from_json(const char* json,
                                         entloss_channel** out) {
  if (json == nullptr || out == nullptr) {
    return bad_arg("json and out must be non-null");
  }
  return guarded([&] {
    *out = new entloss_channel{entloss::channel_from_json(json)};
  });
}

entloss_status entloss_channel_random(int dim_a, int dim_b, int rank,
                                      uint64_t seed, entloss_channel** out) {
  if (out == nullptr) {
    return bad_arg("out must be non-null");
  }
  return guarded([&] {
    *out = new entloss_channel{
        entloss::random_channel(dim_a, dim_b, rank, seed)};
  });
}

entloss_status entloss_channel_to_json(const entloss_channel* ch, char** out) {
  if (ch == nullptr || out == nullptr) {
    return bad_arg("channel and out must be non-null");
  }
  return guarded([&] { *out = dup_string(entloss::channel_to_json(ch->impl)); });
}

int entloss_channel_dim_a(const entloss_channel* ch) {
  return ch == nullptr ? 0 : ch->impl.dim_a();
}

int entloss_channel_dim_b(const entloss_channel* ch) {
  return ch == nullptr ? 0 : ch->impl.dim_b();
}

void entloss_channel_free(entloss_channel* ch) { delete ch; }

/* ---- states ---- */

entloss_status entloss_state_parse(const char* spec, entloss_state** out) {
  if (spec == nullptr || out == nullptr) {
    return bad_arg("spec and out must be non-null");
  }
  return guarded([&] {
    *out = new entloss_state{entloss::parse_state_spec(spec)};
  });
}

entloss_status entloss_state_from_json(const char* json, entloss_state** out) {
  if (json == nullptr || out == nullptr) {
    return bad_arg("json and out must be non-null");
  }
  return guarded([&] {
    *out = new entloss_state{entloss::state_from_json(json)};
  });
}

entloss_status entloss_state_to_json(const entloss_state* rho, char** out) {
  if (rho == nullptr || out == nullptr) {
    return bad_arg("state and out must be non-null");
  }
  return guarded([&] { *out = dup_string(entloss::state_to_json(rho->impl)); });
}

int entloss_state_dim(const entloss_state* rho) {
  return rho == nullptr ? 0 : rho->impl.dim();
}

void entloss_state_free(entloss_state* rho) { delete rho; }

/* ---- scalars ---- */

entloss_status entloss_von_neumann_entropy(const entloss_state* rho,
                                           double* out) {
  if (rho == nullptr || out == nullptr) {
    return bad_arg("state and out must be non-null");
  }
  return guarded([&] { *out = entloss::von_neumann_entropy(rho->impl); });
}

entloss_status entloss_coherent_information(const entloss_state* tau,
                                            int direction, double* out) {
  if (tau == nullptr || out == nullptr) {
    return bad_arg("state and out must be non-null");
  }
  if (direction != 0 && direction != 1) {
    return bad_arg("direction must be 0 or 1");
  }
  return guarded([&] {
    *out = entloss::coherent_information(
        tau->impl, direction == 0 ? entloss::Direction::a_to_b
                                  : entloss::Direction::b_to_a);
  });
}

entloss_status entloss_delta_c(const entloss_state* rho,
                               const entloss_channel* ch, double* out) {
  if (rho == nullptr || ch == nullptr || out == nullptr) {
    return bad_arg("state, channel, and out must be non-null");
  }
  return guarded([&] { *out = entloss::delta_c(rho->impl, ch->impl); });
}

entloss_status entloss_eof(const entloss_state* tau, int restarts,
                           uint64_t seed, double* out) {
  if (tau == nullptr || out == nullptr) {
    return bad_arg("state and out must be non-null");
  }
  if (restarts < 0) {
    return bad_arg("restarts cannot be negative");
  }
  return guarded([&] {
    entloss::EofConfig cfg;
    if (restarts > 0) {
      cfg.restarts = restarts;
    }
    cfg.seed = seed;
    *out = entloss::eof(tau->impl, cfg).value;
  });
}

entloss_status entloss_wootters_eof(const entloss_state* tau, double* out) {
  if (tau == nullptr || out == nullptr) {
    return bad_arg("state and out must be non-null");
  }
  return guarded([&] { *out = entloss::wootters_eof(tau->impl); });
}

entloss_status entloss_entanglement_fidelity(const entloss_state* rho,
                                             const entloss_channel* ch,
                                             double* out) {
  if (rho == nullptr || ch == nullptr || out == nullptr) {
    return bad_arg("state, channel, and out must be non-null");
  }
  return guarded([&] {
    *out = entloss::entanglement_fidelity(rho->impl, ch->impl);
  });
}

entloss_status entloss_transpose_recovery_fidelity(const entloss_state* rho,
                                                   const entloss_channel* ch,
                                                   double* out) {
  if (rho == nullptr || ch == nullptr || out == nullptr) {
    return bad_arg("state, channel, and out must be non-null");
  }
  return guarded([&] {
    entloss::KrausChannel rec = entloss::transpose_channel(rho->impl, ch->impl);
    *out = entloss::entanglement_fidelity(
        rho->impl, entloss::compose(rec, ch->impl));
  });
}

entloss_status entloss_optimized_recovery_fidelity(const entloss_state* rho,
                                                   const entloss_channel* ch,
                                                   int restarts, uint64_t seed,
                                                   double* out) {
  if (rho == nullptr || ch == nullptr || out == nullptr) {
    return bad_arg("state, channel, and out must be non-null");
  }
  if (restarts < 0) {
    return bad_arg("restarts cannot be negative");
  }
  return guarded([&] {
    entloss::RecoveryConfig cfg;
    if (restarts > 0) {
      cfg.restarts = restarts;
    }
    cfg.seed = seed;
    *out = entloss::optimize_recovery(rho->impl, ch->impl, cfg).fidelity;
  });
}

entloss_status entloss_diamond_distance(const entloss_channel* a,
                                        const entloss_channel* b, int restarts,
                                        uint64_t seed, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return bad_arg("channels and out must be non-null");
  }
  if (restarts < 0) {
    return bad_arg("restarts cannot be negative");
  }
  return guarded([&] {
    entloss::DiamondConfig cfg;
    if (restarts > 0) {
      cfg.restarts = restarts;
    }
    cfg.seed = seed;
    *out = entloss::diamond_distance(a->impl, b->impl, cfg).lower;
  });
}

entloss_status entloss_q_cb(const entloss_channel* ch, uint64_t seed,
                            int quick, double* out) {
  if (ch == nullptr || out == nullptr) {
    return bad_arg("channel and out must be non-null");
  }
  return guarded([&] {
    entloss::QcbConfig cfg;
    if (quick != 0) {
      cfg.outer_rounds = 6;
      cfg.inner.restarts = 8;
      cfg.final_eval.restarts = 8;
    }
    cfg.seed = seed;
    *out = entloss::q_cb(ch->impl, cfg).value;
  });
}

entloss_status entloss_big_delta(const entloss_channel* ch, const char* kind,
                                 uint64_t seed, int quick, double* out) {
  if (ch == nullptr || kind == nullptr || out == nullptr) {
    return bad_arg("channel, kind, and out must be non-null");
  }
  std::string k(kind);
  if (k != "c" && k != "f") {
    return bad_arg("kind must be \"c\" or \"f\"");
  }
  return guarded([&] {
    entloss::BigDeltaConfig cfg;
    cfg.seed = seed;
    if (k == "f") {
      cfg.restarts = quick != 0 ? 2 : 4;
      cfg.max_evals = quick != 0 ? 40 : 60;
      cfg.search_eof = entloss::EofConfig{2, 200, 1e-6, 0, 0};
      cfg.final_eof = entloss::EofConfig{quick != 0 ? 8 : 16, 1500, 1e-8, 0, 0};
    } else if (quick != 0) {
      cfg.restarts = 8;
      cfg.max_evals = 150;
    }
    *out = entloss::big_delta(ch->impl,
                              k == "c" ? entloss::LossTag::coherent
                                       : entloss::LossTag::formation,
                              cfg)
               .lower;
  });
}

entloss_status entloss_big_phi(const entloss_channel* ch, uint64_t seed,
                               int quick, double* out) {
  if (ch == nullptr || out == nullptr) {
    return bad_arg("channel and out must be non-null");
  }
  return guarded([&] {
    entloss::BigPhiConfig cfg;
    cfg.seed = seed;
    if (quick != 0) {
      cfg.restarts = 4;
      cfg.max_evals = 40;
    }
    *out = entloss::big_phi(ch->impl, cfg).lower;
  });
}

entloss_status entloss_g(double x, int dim_a, double* out) {
  if (out == nullptr) {
    return bad_arg("out must be non-null");
  }
  return guarded([&] { *out = entloss::g_eval(x, dim_a); });
}

entloss_status entloss_g_inverse(double y, int dim_a, double* out) {
  if (out == nullptr) {
    return bad_arg("out must be non-null");
  }
  return guarded([&] { *out = entloss::g_inverse(y, dim_a); });
}

/* ---- high-level runs ---- */

entloss_status entloss_verify_run(const char* config_json, int want_csv,
                                  char** out, int* exit_code) {
  if (out == nullptr || exit_code == nullptr) {
    return bad_arg("out and exit_code must be non-null");
  }
  return guarded([&] {
    entloss::SuiteConfig cfg = parse_suite_config(config_json);
    entloss::VerifyReport report = entloss::run_verify(cfg);
    std::string text = want_csv != 0 ? entloss::verify_report_csv(report)
                                     : entloss::verify_report_json(report);
    *out = dup_string(text);
    *exit_code = report.exit_code();
  });
}

entloss_status entloss_fig2_csv(int grid_size, char** out) {
  if (out == nullptr) {
    return bad_arg("out must be non-null");
  }
  return guarded([&] { *out = dup_string(entloss::fig2_csv(grid_size)); });
}

entloss_status entloss_report_run(const char* channel_spec,
                                  const char* state_spec, uint64_t seed,
                                  int quick, char** out) {
  if (channel_spec == nullptr || out == nullptr) {
    return bad_arg("channel_spec and out must be non-null");
  }
  return guarded([&] {
    entloss::KrausChannel ch = entloss::parse_channel_spec(channel_spec);
    entloss::ReportOptions opts;
    opts.seed = seed;
    opts.quick = quick != 0;
    entloss::ChannelReport report = [&] {
      if (state_spec != nullptr && state_spec[0] != '\0') {
        entloss::DensityMatrix rho = entloss::parse_state_spec(state_spec);
        opts.state_descriptor = state_spec;
        return entloss::build_channel_report(ch, channel_spec, &rho, opts);
      }
      return entloss::build_channel_report(ch, channel_spec, nullptr, opts);
    }();
    *out = dup_string(entloss::channel_report_json(report));
  });
}

} // extern "C"
