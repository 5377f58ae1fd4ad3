/* C interface over the constraint monitor, for foreign-function hosts.
 * Every call returns 0 on success or a nonzero error code equal to the
 * library's ErrorCode value (FLC_E_* below); flc_last_error() then holds a
 * message for the calling thread. Handles must not be shared across threads. */
#ifndef FLC_C_API_H
#define FLC_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FLC_ABI_VERSION 1

enum {
  FLC_OK = 0,
  FLC_E_SYNTAX = 1,
  FLC_E_CAPACITY = 2,
  FLC_E_UNKNOWN_SYMBOL = 3,
  FLC_E_ALPHABET_MISMATCH = 4,
  FLC_E_PARSE = 5,
  FLC_E_VALIDATION = 6,
  FLC_E_DOMAIN = 7,
  FLC_E_INDEX = 8,
  FLC_E_EPISODE_DONE = 9,
  FLC_E_CONFIG = 10,
  FLC_E_INVALID_ARGUMENT = 100,
  FLC_E_INTERNAL = 101
};

typedef struct flc_monitor flc_monitor;

/* Raw transition for the built-in translators. `token` may be NULL unless
 * the constraint uses the identity translator. */
typedef struct flc_transition {
  int64_t prev_index;
  double prev_hazard_distance;
  int prev_contact;
  double value;
  int dx;
  int dy;
  int fire;
  int64_t next_index;
  double next_hazard_distance;
  int next_contact;
  const char* token;
} flc_transition;

typedef struct flc_step_result {
  uint32_t q;
  double cost;
  int violated;
} flc_step_result;

int flc_abi_version(void);
const char* flc_last_error(void);

/* Loads a .flc file (or a bundled name such as "dithering-1d.flc"). */
int flc_monitor_open(const char* spec_path, flc_monitor** out);
int flc_monitor_step_token(flc_monitor* m, const char* token, flc_step_result* out);
int flc_monitor_step(flc_monitor* m, const flc_transition* t, flc_step_result* out);
/* Index of the first token in `ranked` that does not enter a violating
 * state, or -1 when all of them do. */
int flc_monitor_mask(flc_monitor* m, const char* const* ranked, size_t count, int64_t* chosen);
int flc_monitor_reset(flc_monitor* m);
int flc_monitor_state(const flc_monitor* m, uint32_t* q);
int flc_monitor_num_states(const flc_monitor* m, uint32_t* n);
void flc_monitor_close(flc_monitor* m);

#ifdef __cplusplus
}
#endif

#endif
