#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tauber {

using StateFunction = std::vector<double>;

// Finite zero-sum stochastic game in discrete time. The maximizer picks a,
// the minimizer picks b, the state moves by kernel[state][a][b] and the
// running cost g(state) in [0,1] accrues per stage.
struct StochasticGame {
  int state_count = 0;
  std::vector<double> payoff;        // g, one entry per state
  std::vector<int> actions_max;      // per-state action counts, maximizer
  std::vector<int> actions_min;      // per-state action counts, minimizer
  // kernel[state][a][b] is a probability vector over successor states
  std::vector<std::vector<std::vector<std::vector<double>>>> kernel;

  bool is_chain() const;  // every action set is a singleton
};

// Diagnostics, not exceptions: one human-readable line per violated
// constraint (row sums, probability signs, payoff range, shape mismatches).
std::vector<std::string> validate(const StochasticGame& game);

std::string serialize(const StochasticGame& game);
// check_semantics=false accepts any structurally well-formed document, for
// tools that want to run validate() themselves and report the violations.
StochasticGame deserialize(const std::string& text, bool check_semantics = true);

// swap2, lazy2, ergodic3, mdp_reach, matching_game
StochasticGame builtin(std::string_view name);
const std::vector<std::string>& builtin_names();

// Kernel rows are normalized uniform(0,1) vectors and payoffs uniform(0,1),
// drawn from xoshiro256++ seeded via splitmix64 — identical output for
// identical seeds on every platform.
StochasticGame random_game(std::uint64_t seed, int states, int amax, int amin);

// Eventually periodic state trajectory, constant on [n, n+1).
struct StepProcess {
  std::vector<int> prefix;
  std::vector<int> cycle;  // nonempty; entered after the prefix

  int state_at(std::size_t n) const {
    if (n < prefix.size()) return prefix[n];
    return cycle[(n - prefix.size()) % cycle.size()];
  }
};

}  // namespace tauber
