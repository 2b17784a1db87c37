#ifndef CNSQKD_H
#define CNSQKD_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum {
  CNSQKD_STATUS_OK = 0,
  CNSQKD_STATUS_NULL_POINTER = 1,
  CNSQKD_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The configuration or code description was rejected.
   */
  CNSQKD_STATUS_VALIDATION_FAILED = 3,
  /**
   * The caller's buffer is shorter than the result; the required length was written.
   */
  CNSQKD_STATUS_BUFFER_TOO_SMALL = 4,
  CNSQKD_STATUS_RUNTIME = 5,
  CNSQKD_STATUS_PANIC = 6,
} CnsqkdStatus;

typedef enum {
  CNSQKD_SESSION_STATUS_OK = 0,
  CNSQKD_SESSION_STATUS_TIMEOUT = 1,
  CNSQKD_SESSION_STATUS_CODEWORD_FAILURE = 2,
  CNSQKD_SESSION_STATUS_REJECTED = 3,
  CNSQKD_SESSION_STATUS_KEY_MISMATCH = 4,
} CnsqkdSessionStatus;

/**
 * Named process matrices. Functions take these as `int32_t`.
 */
typedef enum {
  CNSQKD_PROCESS_WCNS = 0,
  CNSQKD_PROCESS_WHITE_NOISE = 1,
  CNSQKD_PROCESS_COMB_AB = 2,
  CNSQKD_PROCESS_COMB_BA = 3,
  CNSQKD_PROCESS_WCNS_INTERCEPTED = 4,
} CnsqkdProcess;

typedef enum {
  /**
   * 1990 raw seed bits per party, decoded against the sender's word.
   */
  CNSQKD_MODE_IDEAL = 0,
  /**
   * 264 seed bits per party in majority-voted BCH(31,11) blocks.
   */
  CNSQKD_MODE_CONCATENATED = 1,
} CnsqkdMode;

/**
 * Opaque block code.
 */
typedef struct CnsqkdCodec CnsqkdCodec;

/**
 * Opaque session configuration.
 */
typedef struct CnsqkdSessionConfig CnsqkdSessionConfig;

/**
 * Code lengths and channel parameters for the finite-blocklength estimates.
 */
typedef struct {
  uint64_t n;
  double epsilon;
  double delta;
  double p;
  double p_eve;
  uint64_t k;
} CnsqkdFblInputs;

typedef struct {
  double capacity;
  double dispersion;
  double payload;
  double secrecy_capacity;
  double eve_dispersion;
  double key_length;
} CnsqkdFblReport;

typedef struct {
  /**
   * Codeword length.
   */
  size_t n;
  /**
   * Message length.
   */
  size_t k;
  /**
   * Guaranteed correction radius.
   */
  size_t t;
} CnsqkdCodeParams;

typedef struct {
  size_t corrected_errors;
  /**
   * False when the word lies outside every decoding sphere.
   */
  bool correctable;
} CnsqkdDecodeInfo;

typedef struct {
  CnsqkdSessionStatus status;
  bool success;
  size_t rounds;
  size_t min_rounds;
  int64_t overhead;
  size_t bit_overhead_alice;
  size_t bit_overhead_bob;
  /**
   * NaN when nothing was observed.
   */
  double compliance;
  bool eavesdropping_detected;
  /**
   * Bits in each final key component, 0 without keys.
   */
  size_t key_len;
} CnsqkdSessionSummary;

/**
 * Statistics over successful trials are NaN when there are none.
 */
typedef struct {
  size_t trials;
  size_t successes;
  double success_rate;
  double min;
  double max;
  double mean;
  double stddev;
  double mean_overhead;
  size_t timeouts;
  size_t rejected;
  size_t codeword_failures;
  size_t key_mismatches;
} CnsqkdExperimentSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cnsqkd_string_free(char *s);

/**
 * Success probability of the causal game for `process`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
CnsqkdStatus cnsqkd_game_success(int32_t process, double *out);

/**
 * # Safety
 * Both pointers must be valid.
 */
CnsqkdStatus cnsqkd_fbl(const CnsqkdFblInputs *inputs, CnsqkdFblReport *out);

/**
 * Multiplies `input` by the Toeplitz matrix whose diagonals are `seed`
 * (`out_len + input_len - 1` bits) and writes `out_len` bits.
 *
 * # Safety
 * Each buffer must hold the stated number of bytes.
 */
CnsqkdStatus cnsqkd_toeplitz_extract(const uint8_t *seed,
                                     size_t seed_len,
                                     const uint8_t *input,
                                     size_t input_len,
                                     size_t out_len,
                                     uint8_t *out,
                                     size_t out_capacity,
                                     size_t *written);

/**
 * JSON export of every named process and local instrument operator.
 *
 * # Safety
 * `out` must be a valid pointer. Free the string with `cnsqkd_string_free`.
 */
CnsqkdStatus cnsqkd_export_fixture_json(char **out);

/**
 * Builds a codec from `ideal:N`, `bch:N:K[:systematic|polynomial]`,
 * `mvc-bch:N:K[...]` or `concatenated`.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
CnsqkdStatus cnsqkd_codec_new(const char *spec, CnsqkdCodec **out);

/**
 * # Safety
 * `codec` must come from [`cnsqkd_codec_new`] and not have been freed. Null is ignored.
 */
void cnsqkd_codec_free(CnsqkdCodec *codec);

/**
 * # Safety
 * Both pointers must be valid.
 */
CnsqkdStatus cnsqkd_codec_params(const CnsqkdCodec *codec, CnsqkdCodeParams *out);

/**
 * Encodes `message_len` (= K) bits into `out`, which holds `out_capacity` bytes.
 *
 * # Safety
 * `message` must hold `message_len` bytes, `out` `out_capacity` bytes.
 */
CnsqkdStatus cnsqkd_codec_encode(const CnsqkdCodec *codec,
                                 const uint8_t *message,
                                 size_t message_len,
                                 uint8_t *out,
                                 size_t out_capacity,
                                 size_t *out_len);

/**
 * Decodes `word_len` (= N) bits. An uncorrectable word still yields a
 * message and reports `correctable = false`.
 *
 * # Safety
 * `word` must hold `word_len` bytes, `out` `out_capacity` bytes; `info` may be null.
 */
CnsqkdStatus cnsqkd_codec_decode(const CnsqkdCodec *codec,
                                 const uint8_t *word,
                                 size_t word_len,
                                 uint8_t *out,
                                 size_t out_capacity,
                                 size_t *out_len,
                                 CnsqkdDecodeInfo *info);

/**
 * Message of the last failed call on this thread, or null after a
 * successful call. The pointer stays valid until the next call on the
 * same thread and must not be freed.
 */
const char *cnsqkd_last_error(void);

/**
 * Default configuration for `mode` over a BSC with crossover `p`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
CnsqkdStatus cnsqkd_session_config_new(int32_t mode, double p, CnsqkdSessionConfig **out);

/**
 * Parses a configuration in the JSON form produced by [`cnsqkd_session_config_to_json`].
 *
 * # Safety
 * `json` must be nul-terminated and `out` valid.
 */
CnsqkdStatus cnsqkd_session_config_from_json(const char *json, CnsqkdSessionConfig **out);

/**
 * # Safety
 * Both pointers must be valid. Free the string with `cnsqkd_string_free`.
 */
CnsqkdStatus cnsqkd_session_config_to_json(const CnsqkdSessionConfig *config, char **out);

/**
 * # Safety
 * `config` must come from this library and not have been freed. Null is ignored.
 */
void cnsqkd_session_config_free(CnsqkdSessionConfig *config);

/**
 * # Safety
 * `config` must be a valid handle.
 */
CnsqkdStatus cnsqkd_session_config_set_q0(CnsqkdSessionConfig *config, double q0);

/**
 * # Safety
 * `config` must be a valid handle.
 */
CnsqkdStatus cnsqkd_session_config_set_bsc(CnsqkdSessionConfig *config, double p);

/**
 * Samples every round from `process` (a [`crate::CnsqkdProcess`] value).
 *
 * # Safety
 * `config` must be a valid handle.
 */
CnsqkdStatus cnsqkd_session_config_set_quantum(CnsqkdSessionConfig *config, int32_t process);

/**
 * Output bits per key component; 0 disables privacy amplification.
 *
 * # Safety
 * `config` must be a valid handle.
 */
CnsqkdStatus cnsqkd_session_config_set_privacy_amplification(CnsqkdSessionConfig *config,
                                                             size_t out_len);

/**
 * Retransmit uncorrectable codewords instead of aborting.
 *
 * # Safety
 * `config` must be a valid handle.
 */
CnsqkdStatus cnsqkd_session_config_set_retransmit(CnsqkdSessionConfig *config, bool retransmit);

/**
 * Runs one session from `seed`, with the same derivation as an experiment trial.
 *
 * # Safety
 * Both pointers must be valid.
 */
CnsqkdStatus cnsqkd_run_session(const CnsqkdSessionConfig *config,
                                uint64_t seed,
                                CnsqkdSessionSummary *out);

/**
 * Full session statistics, keys and per-codeword reports included, as JSON.
 *
 * # Safety
 * Both pointers must be valid. Free the string with `cnsqkd_string_free`.
 */
CnsqkdStatus cnsqkd_run_session_json(const CnsqkdSessionConfig *config, uint64_t seed, char **out);

/**
 * Runs `trials` sessions in parallel, trial `t` seeded from `(master, t)`.
 *
 * # Safety
 * Both pointers must be valid.
 */
CnsqkdStatus cnsqkd_run_experiment(const CnsqkdSessionConfig *config,
                                   size_t trials,
                                   uint64_t master,
                                   CnsqkdExperimentSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CNSQKD_H */
