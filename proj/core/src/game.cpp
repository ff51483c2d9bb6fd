#include "tauber/game.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "tauber/errors.hpp"
#include "tauber/rng.hpp"

namespace tauber {

bool StochasticGame::is_chain() const {
  for (int a : actions_max)
    if (a != 1) return false;
  for (int b : actions_min)
    if (b != 1) return false;
  return true;
}

std::vector<std::string> validate(const StochasticGame& game) {
  std::vector<std::string> out;
  auto note = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (game.state_count <= 0) {
    note("state_count must be positive");
    return out;
  }
  const auto n = static_cast<std::size_t>(game.state_count);
  if (game.payoff.size() != n) note("payoff length != state_count");
  if (game.actions_max.size() != n) note("actions_max length != state_count");
  if (game.actions_min.size() != n) note("actions_min length != state_count");
  if (game.kernel.size() != n) note("kernel length != state_count");
  if (!out.empty()) return out;

  for (std::size_t s = 0; s < n; ++s) {
    if (!(game.payoff[s] >= 0.0 && game.payoff[s] <= 1.0))
      note("payoff out of [0,1] at state " + std::to_string(s));
    if (game.actions_max[s] < 1) note("actions_max < 1 at state " + std::to_string(s));
    if (game.actions_min[s] < 1) note("actions_min < 1 at state " + std::to_string(s));
    if (game.kernel[s].size() != static_cast<std::size_t>(game.actions_max[s])) {
      note("kernel[" + std::to_string(s) + "] rows != actions_max");
      continue;
    }
    for (std::size_t a = 0; a < game.kernel[s].size(); ++a) {
      if (game.kernel[s][a].size() != static_cast<std::size_t>(game.actions_min[s])) {
        note("kernel[" + std::to_string(s) + "][" + std::to_string(a) + "] cols != actions_min");
        continue;
      }
      for (std::size_t b = 0; b < game.kernel[s][a].size(); ++b) {
        const auto& row = game.kernel[s][a][b];
        if (row.size() != n) {
          note("kernel[" + std::to_string(s) + "][" + std::to_string(a) + "][" +
               std::to_string(b) + "] has wrong length");
          continue;
        }
        double sum = 0;
        bool negative = false;
        for (double prob : row) {
          if (prob < 0) negative = true;
          sum += prob;
        }
        const std::string where = "kernel[" + std::to_string(s) + "][" + std::to_string(a) +
                                  "][" + std::to_string(b) + "]";
        if (negative) note(where + " has a negative probability");
        if (std::abs(sum - 1.0) > 1e-12) note(where + " sums to " + std::to_string(sum));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string serialize(const StochasticGame& game) {
  nlohmann::json doc;
  doc["states"] = game.state_count;
  doc["g"] = game.payoff;
  doc["actions_max"] = game.actions_max;
  doc["actions_min"] = game.actions_min;
  doc["kernel"] = game.kernel;
  return doc.dump(2);
}

StochasticGame deserialize(const std::string& text, bool check_semantics) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& err) {
    raise(Errc::SchemaError, std::string("$ not a JSON document: ") + err.what());
  }

  auto need = [&doc](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) raise(Errc::SchemaError, std::string("$.") + key + " is missing");
    return doc.at(key);
  };

  StochasticGame game;
  try {
    game.state_count = need("states").get<int>();
    game.payoff = need("g").get<std::vector<double>>();
    game.actions_max = need("actions_max").get<std::vector<int>>();
    game.actions_min = need("actions_min").get<std::vector<int>>();
    game.kernel = need("kernel").get<decltype(game.kernel)>();
  } catch (const nlohmann::json::exception& err) {
    raise(Errc::SchemaError, std::string("$: ") + err.what());
  }

  if (check_semantics)
    for (const auto& violation : validate(game)) raise(Errc::SchemaError, "$." + violation);
  return game;
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

namespace {

std::vector<double> point_mass(int n, int target) {
  std::vector<double> row(n, 0.0);
  row[target] = 1.0;
  return row;
}

StochasticGame make_swap2() {
  StochasticGame g;
  g.state_count = 2;
  g.payoff = {1.0, 0.0};
  g.actions_max = {1, 1};
  g.actions_min = {1, 1};
  g.kernel = {{{point_mass(2, 1)}}, {{point_mass(2, 0)}}};
  return g;
}

StochasticGame make_lazy2() {
  StochasticGame g;
  g.state_count = 2;
  g.payoff = {1.0, 0.0};
  g.actions_max = {1, 1};
  g.actions_min = {1, 1};
  g.kernel = {{{{0.5, 0.5}}}, {{{0.5, 0.5}}}};
  return g;
}

StochasticGame make_mdp_reach() {
  // State 0 pays 1 and absorbs; at state 1 the maximizer chooses stay or go.
  StochasticGame g;
  g.state_count = 2;
  g.payoff = {1.0, 0.0};
  g.actions_max = {1, 2};
  g.actions_min = {1, 1};
  g.kernel = {{{point_mass(2, 0)}}, {{point_mass(2, 1)}, {point_mass(2, 0)}}};
  return g;
}

StochasticGame make_matching_game() {
  // Matching pennies with the stage outcome delivered through the next
  // state's payoff: W pays 1, L pays 0, match moves to W, mismatch to L.
  StochasticGame g;
  g.state_count = 2;
  g.payoff = {1.0, 0.0};
  g.actions_max = {2, 2};
  g.actions_min = {2, 2};
  auto rows = std::vector<std::vector<std::vector<double>>>{
      {point_mass(2, 0), point_mass(2, 1)},
      {point_mass(2, 1), point_mass(2, 0)},
  };
  g.kernel = {rows, rows};
  return g;
}

}  // namespace

StochasticGame random_game(std::uint64_t seed, int states, int amax, int amin) {
  if (states < 1 || amax < 1 || amin < 1)
    raise(Errc::NonPositiveParameter, "random_game needs states, amax, amin >= 1");
  Xoshiro256pp rng(seed);
  StochasticGame g;
  g.state_count = states;
  g.payoff.resize(states);
  g.actions_max.assign(states, amax);
  g.actions_min.assign(states, amin);
  g.kernel.assign(states, {});
  for (int s = 0; s < states; ++s) {
    g.payoff[s] = rng.next_double();
    g.kernel[s].assign(amax, {});
    for (int a = 0; a < amax; ++a) {
      g.kernel[s][a].assign(amin, {});
      for (int b = 0; b < amin; ++b) {
        std::vector<double> row(states);
        double sum = 0;
        for (auto& prob : row) {
          prob = rng.next_double();
          sum += prob;
        }
        for (auto& prob : row) prob /= sum;
        g.kernel[s][a][b] = std::move(row);
      }
    }
  }
  return g;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"swap2", "lazy2", "ergodic3", "mdp_reach",
                                              "matching_game"};
  return names;
}

StochasticGame builtin(std::string_view name) {
  if (name == "swap2") return make_swap2();
  if (name == "lazy2") return make_lazy2();
  if (name == "ergodic3") return random_game(42, 3, 2, 1);
  if (name == "mdp_reach") return make_mdp_reach();
  if (name == "matching_game") return make_matching_game();
  raise(Errc::UnknownInstance, "no builtin named \"" + std::string(name) + "\"");
}

}  // namespace tauber
