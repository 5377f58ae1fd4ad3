#include "flc/c_api.h"

#include <memory>
#include <string>
#include <vector>

#include "flc/actionshape.hpp"
#include "flc/constraint.hpp"
#include "flc/error.hpp"

struct flc_monitor {
  std::shared_ptr<const flc::ConstraintSpec> spec;
  flc::RecognizerRuntime runtime;
};

namespace {

thread_local std::string g_last_error;

template <class F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FLC_OK;
  } catch (const flc::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLC_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FLC_E_INTERNAL;
  }
}

int invalid(const char* what) {
  g_last_error = what;
  return FLC_E_INVALID_ARGUMENT;
}

void fill(const flc::RecognizerStep& step, flc_step_result* out) {
  out->q = step.q_next;
  out->cost = step.cost;
  out->violated = step.violated ? 1 : 0;
}

}  // namespace

extern "C" {

int flc_abi_version(void) { return FLC_ABI_VERSION; }

const char* flc_last_error(void) { return g_last_error.c_str(); }

int flc_monitor_open(const char* spec_path, flc_monitor** out) {
  if (spec_path == nullptr || out == nullptr) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto spec = std::make_shared<const flc::ConstraintSpec>(flc::load_spec(spec_path));
    *out = new flc_monitor{spec, flc::RecognizerRuntime(spec)};
  });
}

int flc_monitor_step_token(flc_monitor* m, const char* token, flc_step_result* out) {
  if (m == nullptr || token == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { fill(m->runtime.step_token(token), out); });
}

int flc_monitor_step(flc_monitor* m, const flc_transition* t, flc_step_result* out) {
  if (m == nullptr || t == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    flc::Transition tr;
    tr.prev = {t->prev_index, t->prev_hazard_distance, t->prev_contact != 0};
    tr.next = {t->next_index, t->next_hazard_distance, t->next_contact != 0};
    tr.action.value = t->value;
    tr.action.dx = t->dx;
    tr.action.dy = t->dy;
    tr.action.fire = t->fire != 0;
    if (t->token != nullptr) tr.action.token = t->token;
    fill(m->runtime.step(tr), out);
  });
}

int flc_monitor_mask(flc_monitor* m, const char* const* ranked, size_t count, int64_t* chosen) {
  if (m == nullptr || chosen == nullptr || (ranked == nullptr && count > 0)) return invalid("null argument");
  return guarded([&] {
    std::vector<flc::SymbolId> symbols;
    symbols.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (ranked[i] == nullptr) throw flc::ValidationError("null token in ranked list");
      symbols.push_back(m->spec->alphabet.index_of(ranked[i]));
    }
    const flc::FilterResult r = flc::filter_tokens(m->runtime, symbols);
    *chosen = r.chosen ? *r.chosen : -1;
  });
}

int flc_monitor_reset(flc_monitor* m) {
  if (m == nullptr) return invalid("null argument");
  return guarded([&] { m->runtime.reset(); });
}

int flc_monitor_state(const flc_monitor* m, uint32_t* q) {
  if (m == nullptr || q == nullptr) return invalid("null argument");
  *q = m->runtime.state();
  return FLC_OK;
}

int flc_monitor_num_states(const flc_monitor* m, uint32_t* n) {
  if (m == nullptr || n == nullptr) return invalid("null argument");
  *n = static_cast<uint32_t>(m->runtime.dfa().num_states());
  return FLC_OK;
}

void flc_monitor_close(flc_monitor* m) { delete m; }

}  // extern "C"
