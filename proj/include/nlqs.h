/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the noisy local quantum circuit toolkit. Handles are
 * opaque; every function that can fail returns an nlqs_status, with a
 * human-readable message available from nlqs_last_error() on the calling
 * thread. Strings returned through char** out-parameters are heap-allocated
 * and must be released with nlqs_string_free().
 */
#ifndef NLQS_H
#define NLQS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nlqs_circuit nlqs_circuit;

typedef enum nlqs_status {
  NLQS_OK = 0,
  NLQS_ERR_INVALID_ARGUMENT = 1,
  NLQS_ERR_PARSE = 2,
  NLQS_ERR_LOCALITY = 3,
  NLQS_ERR_UNITARITY = 4,
  NLQS_ERR_GUARD = 5,
  NLQS_ERR_NUMERIC = 6,
  NLQS_ERR_CONDITIONING = 7,
  NLQS_ERR_IO = 8,
  NLQS_ERR_INTERNAL = 9
} nlqs_status;

const char* nlqs_version(void);
const char* nlqs_status_name(nlqs_status status);

/* Message for the most recent failure on the calling thread, or "". */
const char* nlqs_last_error(void);

void nlqs_string_free(char* text);

/* Backend size guards (max dense / statevector qubits). Pass -1 to keep a
 * value. Initial values come from NLQS_MAX_DENSE_QUBITS and
 * NLQS_MAX_STATEVECTOR_QUBITS, defaulting to 13 and 24. */
void nlqs_set_guards(int max_dense_qubits, int max_statevector_qubits);
void nlqs_get_guards(int* max_dense_qubits, int* max_statevector_qubits);

/* Circuit construction. `gateset` is "haar" or "named". */
nlqs_status nlqs_circuit_parse(const char* text, nlqs_circuit** out);
nlqs_status nlqs_circuit_load(const char* path, nlqs_circuit** out);
nlqs_status nlqs_circuit_random(const int32_t* dims, int32_t ndims,
                                int32_t depth, double p, uint64_t seed,
                                const char* gateset, nlqs_circuit** out);
void nlqs_circuit_free(nlqs_circuit* circuit);

int32_t nlqs_circuit_qubits(const nlqs_circuit* circuit);
int32_t nlqs_circuit_depth(const nlqs_circuit* circuit);
double nlqs_circuit_noise(const nlqs_circuit* circuit);
nlqs_status nlqs_circuit_serialize(const nlqs_circuit* circuit,
                                   char** out_text);
nlqs_status nlqs_circuit_hash(const nlqs_circuit* circuit, char** out_hash);

/* Dense simulation summary (entropies, top outcomes) as one JSON line. */
nlqs_status nlqs_simulate_summary(const nlqs_circuit* circuit,
                                  int32_t top_count, char** out_records);

typedef struct nlqs_sample_request {
  const char* method; /* uniform | exact | trajectory | sparse | patching */
  int32_t k;          /* sparse truncation order */
  int32_t ell;        /* patching conditioning distance */
  int32_t width;      /* sublattice width; 0 = default 2d */
  uint64_t seed;
  int64_t count;
} nlqs_sample_request;

/* out_bits: one bitstring per line. out_meta: sidecar metadata JSON line. */
nlqs_status nlqs_sample(const nlqs_circuit* circuit,
                        const nlqs_sample_request* request, char** out_bits,
                        char** out_meta);

/* Pauli coefficient mass by support size and by largest connected component,
 * as JSON lines. */
nlqs_status nlqs_decompose_stats(const nlqs_circuit* circuit, int32_t width,
                                 char** out_records);

/* Markov gap for every block and every ell in [0, ell_max] (ell_max < 0
 * sweeps up to the block count), as JSON lines. */
nlqs_status nlqs_markov_gap_sweep(const nlqs_circuit* circuit, int32_t width,
                                  int32_t ell_max, char** out_records);

/* Smallest depth d with (1-p)^d (4d)^dimension < 1/c. out_record may be
 * NULL; otherwise it receives a JSON line. */
nlqs_status nlqs_critical_depth(double p, int32_t dimension, double c,
                                int32_t* out_depth, char** out_record);

typedef struct nlqs_verify_request {
  const char* family; /* 1d-haar | 1d-named | 2d-haar */
  int32_t n;
  const int32_t* depths;
  int32_t depth_count;
  const double* ps;
  int32_t p_count;
  int32_t seeds;
  uint64_t seed0;
  int32_t width; /* sublattice width; 0 = default 2d */
} nlqs_verify_request;

/* Runs the full analysis suite over the seeded circuit family. out_records
 * receives one JSON line per check plus a trailing summary line. A check
 * that fails does not fail the call; inspect out_failures. */
nlqs_status nlqs_verify(const nlqs_verify_request* request, char** out_records,
                        int64_t* out_checks, int64_t* out_failures);

#ifdef __cplusplus
}
#endif

#endif /* NLQS_H */
