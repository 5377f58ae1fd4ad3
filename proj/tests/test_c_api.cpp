#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "flc/actionshape.hpp"
#include "flc/c_api.h"
#include "flc/constraint.hpp"
#include "flc/rng.hpp"

extern "C" int flc_c_smoke(void);

using namespace flc;

namespace {

struct Monitor {
  flc_monitor* m = nullptr;
  explicit Monitor(const char* path) { REQUIRE(flc_monitor_open(path, &m) == FLC_OK); }
  ~Monitor() { flc_monitor_close(m); }
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("c api") {
  TEST_CASE("version and C compilation") {
    CHECK(flc_abi_version() == FLC_ABI_VERSION);
    CHECK(flc_c_smoke() == 1);
  }
  TEST_CASE("dither stream") {
    Monitor mon("dithering-1d.flc");
    flc_step_result r{};
    const char* word[] = {"l", "r", "l", "r"};
    for (int i = 0; i < 4; ++i) {
      REQUIRE(flc_monitor_step_token(mon.m, word[i], &r) == FLC_OK);
      CHECK(r.violated == (i == 3 ? 1 : 0));
    }
    CHECK(r.cost == 1.0);
    REQUIRE(flc_monitor_reset(mon.m) == FLC_OK);
    REQUIRE(flc_monitor_step_token(mon.m, "n", &r) == FLC_OK);
    uint32_t q = 99;
    flc_monitor_state(mon.m, &q);
    CHECK(r.q == q);
    CHECK(r.q == load_spec("dithering-1d.flc").dfa->start());
    CHECK(r.cost == 0.0);
    CHECK(r.violated == 0);
    uint32_t n = 0;
    flc_monitor_num_states(mon.m, &n);
    CHECK(n == 9);
  }
  TEST_CASE("mask after a near-dither") {
    Monitor mon("dithering-1d.flc");
    flc_step_result r{};
    for (const char* t : {"l", "r", "l"}) flc_monitor_step_token(mon.m, t, &r);
    const char* ranked[] = {"r", "n", "l"};
    int64_t chosen = -7;
    REQUIRE(flc_monitor_mask(mon.m, ranked, 3, &chosen) == FLC_OK);
    CHECK(chosen == 1);
    const char* only_r[] = {"r"};
    REQUIRE(flc_monitor_mask(mon.m, only_r, 1, &chosen) == FLC_OK);
    CHECK(chosen == -1);
  }
  TEST_CASE("raw transitions") {
    Monitor mon("proximity.flc");
    flc_transition t{};
    t.next_hazard_distance = 0.95;
    flc_step_result r{};
    REQUIRE(flc_monitor_step(mon.m, &t, &r) == FLC_OK);
    CHECK(r.violated == 0);
    t.next_contact = 1;
    REQUIRE(flc_monitor_step(mon.m, &t, &r) == FLC_OK);
    CHECK(r.violated == 1);
    Monitor paddle("paddle-ball.flc");
    t.token = "L";
    CHECK(flc_monitor_step(paddle.m, &t, &r) == FLC_OK);
    t.token = nullptr;
    CHECK(flc_monitor_step(paddle.m, &t, &r) == FLC_E_UNKNOWN_SYMBOL);
  }
  TEST_CASE("errors") {
    flc_monitor* m = nullptr;
    CHECK(flc_monitor_open("/nonexistent/zzz.flc", &m) != FLC_OK);
    CHECK(m == nullptr);
    CHECK(std::string(flc_last_error()).size() > 0);
    CHECK(flc_monitor_open(nullptr, &m) == FLC_E_INVALID_ARGUMENT);
    Monitor mon("dithering-1d.flc");
    flc_step_result r{};
    CHECK(flc_monitor_step_token(mon.m, "x", &r) == FLC_E_UNKNOWN_SYMBOL);
    CHECK(std::string(flc_last_error()).find("x") != std::string::npos);
    CHECK(flc_monitor_step_token(mon.m, "l", &r) == FLC_OK);
    CHECK(std::string(flc_last_error()).empty());
    int64_t chosen = 0;
    CHECK(flc_monitor_mask(mon.m, nullptr, 0, &chosen) == FLC_E_VALIDATION);
    CHECK(flc_monitor_step_token(nullptr, "l", &r) == FLC_E_INVALID_ARGUMENT);
    CHECK(flc_monitor_reset(nullptr) == FLC_E_INVALID_ARGUMENT);
    flc_monitor_close(nullptr);
  }
  TEST_CASE("bitwise agreement with the core on random streams") {
    Rng rng(1234);
    std::size_t streams = 0, mismatches = 0, masks = 0;
    for (const char* name : {"dithering-1d.flc", "overactuation-2d.flc", "paddle-ball.flc", "proximity.flc",
                             "actuation-sum.flc"}) {
      auto spec = std::make_shared<const ConstraintSpec>(load_spec(name));
      const auto& symbols = spec->alphabet.symbols();
      Monitor mon(name);
      for (int s = 0; s < 2000; ++s, ++streams) {
        RecognizerRuntime core(spec);
        flc_monitor_reset(mon.m);
        const std::size_t len = 1 + rng.uniform_int(40);
        for (std::size_t i = 0; i < len; ++i) {
          if (rng.bernoulli(0.2)) {
            std::vector<const char*> ranked;
            std::vector<SymbolId> ids;
            const std::size_t k = 1 + rng.uniform_int(symbols.size());
            for (std::size_t j = 0; j < k; ++j) {
              ids.push_back(static_cast<SymbolId>(rng.uniform_int(symbols.size())));
              ranked.push_back(symbols[ids.back()].c_str());
            }
            int64_t chosen = 0;
            REQUIRE(flc_monitor_mask(mon.m, ranked.data(), ranked.size(), &chosen) == FLC_OK);
            auto direct = filter_tokens(core, ids);
            mismatches += chosen != (direct.chosen ? *direct.chosen : -1);
            ++masks;
          }
          const auto a = static_cast<SymbolId>(rng.uniform_int(symbols.size()));
          flc_step_result r{};
          REQUIRE(flc_monitor_step_token(mon.m, symbols[a].c_str(), &r) == FLC_OK);
          const auto d = core.step_symbol(a);
          mismatches += r.q != d.q_next || !same_bits(r.cost, d.cost) || (r.violated != 0) != d.violated;
          uint32_t q = 0;
          flc_monitor_state(mon.m, &q);
          mismatches += q != core.state();
        }
      }
    }
    CHECK(streams == 10000);
    CHECK(masks > 1000);
    CHECK(mismatches == 0);
  }
}
