/* Compiled as C to keep the public header honest. */
#include "flc/c_api.h"

int flc_c_smoke(void) {
  flc_monitor* m = 0;
  const char* word[] = {"l", "r", "l", "r"};
  flc_step_result res;
  int violations = 0;
  size_t i;
  if (flc_monitor_open("dithering-1d.flc", &m) != FLC_OK) return -1;
  for (i = 0; i < 4; ++i) {
    if (flc_monitor_step_token(m, word[i], &res) != FLC_OK) {
      flc_monitor_close(m);
      return -1;
    }
    violations += res.violated;
  }
  flc_monitor_close(m);
  return violations;
}
