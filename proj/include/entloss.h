/* C interface for the entloss shared library.
 *
 * All functions that can fail return an entloss_status; ENTLOSS_OK means the
 * output parameters were filled in. On failure a human-readable message is
 * available from entloss_last_error() until the next call on the same thread.
 * Strings returned through char** parameters are heap-allocated; release them
 * with entloss_string_free(). Handles are released with the matching _free().
 */

#ifndef ENTLOSS_H
#define ENTLOSS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum entloss_status {
  ENTLOSS_OK = 0,
  ENTLOSS_BAD_ARG,
  ENTLOSS_DIM_MISMATCH,
  ENTLOSS_NOT_SQUARE,
  ENTLOSS_NOT_HERMITIAN,
  ENTLOSS_NOT_CPTP,
  ENTLOSS_NOT_POSITIVE,
  ENTLOSS_NOT_NORMALIZED,
  ENTLOSS_BAD_PARAM,
  ENTLOSS_UNKNOWN_CHANNEL,
  ENTLOSS_INDEX_OUT_OF_RANGE,
  ENTLOSS_NOT_COMPUTABLE,
  ENTLOSS_DIM_TOO_LARGE,
  ENTLOSS_DOMAIN_ERROR,
  ENTLOSS_PARSE_ERROR,
  ENTLOSS_IO_ERROR,
  ENTLOSS_CONFIG_ERROR,
  ENTLOSS_INTERNAL_INCONSISTENCY
} entloss_status;

typedef struct entloss_channel entloss_channel;
typedef struct entloss_state entloss_state;

/* Identifier for the status value, e.g. "parse_error". */
const char* entloss_status_name(entloss_status status);

/* Message from the most recent failing call on this thread ("" if none). */
const char* entloss_last_error(void);

void entloss_string_free(char* text);

/* ---- channel handles --------------------------------------------------- */

/* spec: "@file.json", "name", or "name:k=v,k=v" (zoo names: identity,
 * depolarizing, dephasing, amplitude_damping, erasure, replace, random,
 * unitary). */
entloss_status entloss_channel_parse(const char* spec, entloss_channel** out);
entloss_status entloss_channel_from_json(const char* json,
                                         entloss_channel** out);
entloss_status entloss_channel_random(int dim_a, int dim_b, int rank,
                                      uint64_t seed, entloss_channel** out);
entloss_status entloss_channel_to_json(const entloss_channel* ch, char** out);
int entloss_channel_dim_a(const entloss_channel* ch);
int entloss_channel_dim_b(const entloss_channel* ch);
void entloss_channel_free(entloss_channel* ch);

/* ---- state handles ------------------------------------------------------ */

/* spec: "@file.json", "maximally_mixed:d=", "bell", "isotropic:eps=,d=", or
 * "random:da=,db=,rank=,seed=" (also "random:d=,rank=,seed=" for a single
 * factor). */
entloss_status entloss_state_parse(const char* spec, entloss_state** out);
entloss_status entloss_state_from_json(const char* json, entloss_state** out);
entloss_status entloss_state_to_json(const entloss_state* rho, char** out);
int entloss_state_dim(const entloss_state* rho);
void entloss_state_free(entloss_state* rho);

/* ---- scalar quantities --------------------------------------------------- */

entloss_status entloss_von_neumann_entropy(const entloss_state* rho,
                                           double* out);

/* Coherent information of a bipartite state (the state must carry exactly
 * two tensor factors). direction: 0 = first factor into second, 1 = reverse. */
entloss_status entloss_coherent_information(const entloss_state* tau,
                                            int direction, double* out);

/* Coherent-information loss of (rho, channel): S(rho) - I_c(rho, N),
 * clipped to 0 within 1e-9. */
entloss_status entloss_delta_c(const entloss_state* rho,
                               const entloss_channel* ch, double* out);

/* Entanglement of formation of a bipartite state (variational; restarts
 * multi-starts of the decomposition search, 0 picks the default of 32). */
entloss_status entloss_eof(const entloss_state* tau, int restarts,
                           uint64_t seed, double* out);

/* Closed-form two-qubit entanglement of formation (concurrence formula). */
entloss_status entloss_wootters_eof(const entloss_state* tau, double* out);

/* Entanglement fidelity F_e(rho, ch); the channel must map the state's
 * space to itself. */
entloss_status entloss_entanglement_fidelity(const entloss_state* rho,
                                             const entloss_channel* ch,
                                             double* out);

/* F_e(rho, R o N) for the transpose (Petz) recovery R of (rho, N). */
entloss_status entloss_transpose_recovery_fidelity(const entloss_state* rho,
                                                   const entloss_channel* ch,
                                                   double* out);

/* Best recovered entanglement fidelity found by the variational recovery
 * search (restarts 0 picks the default of 16). Never below the transpose
 * recovery value. */
entloss_status entloss_optimized_recovery_fidelity(const entloss_state* rho,
                                                   const entloss_channel* ch,
                                                   int restarts, uint64_t seed,
                                                   double* out);

/* Lower estimate of the stabilized distance ||a - b||_diamond (values in
 * [0, 2]) between two channels with identical input and output spaces
 * (restarts 0 picks the default of 64). */
entloss_status entloss_diamond_distance(const entloss_channel* a,
                                        const entloss_channel* b, int restarts,
                                        uint64_t seed, double* out);

/* Upper proxy for the complete-boundedness deviation of the channel from the
 * identity after the best found recovery. */
entloss_status entloss_q_cb(const entloss_channel* ch, uint64_t seed,
                            int quick, double* out);

/* Channel-level loss sup over inputs; kind is "c" (coherent information) or
 * "f" (formation). Lower estimate. */
entloss_status entloss_big_delta(const entloss_channel* ch, const char* kind,
                                 uint64_t seed, int quick, double* out);

/* Channel-level worst-case recovered entanglement fidelity (inf over inputs
 * of the best recovery found); the recovery search makes each per-input
 * value a lower estimate. */
entloss_status entloss_big_phi(const entloss_channel* ch, uint64_t seed,
                               int quick, double* out);

/* Rate function 4 x log2(dim_a / x) on [0, 1/2] and its inverse. */
entloss_status entloss_g(double x, int dim_a, double* out);
entloss_status entloss_g_inverse(double y, int dim_a, double* out);

/* ---- high-level runs ----------------------------------------------------- */

/* Runs the verification suites. config_json may be NULL or "{}" for the
 * defaults; recognized keys: seed, dims (array of [dA,dB] pairs or a
 * "2x2,2x3" string), instances_per_dim, quick, restarts {eof, recovery,
 * diamond, climb}, tolerances {family: value}. want_csv 0 emits the JSON
 * report, 1 the per-record CSV. exit_code receives 0 (all pass), 1 (some
 * family failed), or 3 (a bound-chain family failed). */
entloss_status entloss_verify_run(const char* config_json, int want_csv,
                                  char** out, int* exit_code);

/* CSV of the formation floor curve on a grid of the given size (>= 2). */
entloss_status entloss_fig2_csv(int grid_size, char** out);

/* Single-channel report as JSON. state_spec may be NULL (maximally mixed
 * input). */
entloss_status entloss_report_run(const char* channel_spec,
                                  const char* state_spec, uint64_t seed,
                                  int quick, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ENTLOSS_H */
