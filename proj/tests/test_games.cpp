#include <set>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "tauber/errors.hpp"
#include "tauber/game.hpp"
#include "tauber/rng.hpp"

using namespace tauber;

TEST_CASE("validate: well-formed builtins have no violations") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    CHECK(validate(builtin(name)).empty());
  }
}

TEST_CASE("validate: bad row sum and payoff are reported by location") {
  auto game = builtin("swap2");
  game.kernel[0][0][0] = {0.45, 0.45};
  auto violations = validate(game);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("kernel[0][0][0]") != std::string::npos);

  game = builtin("swap2");
  game.payoff[0] = 1.5;
  violations = validate(game);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("payoff") != std::string::npos);
  CHECK(violations[0].find("state 0") != std::string::npos);
}

TEST_CASE("serialize: round trip is exact on builtins and seeded games") {
  auto check_roundtrip = [](const StochasticGame& game) {
    const StochasticGame back = deserialize(serialize(game));
    CHECK(back.state_count == game.state_count);
    CHECK(back.payoff == game.payoff);
    CHECK(back.actions_max == game.actions_max);
    CHECK(back.actions_min == game.actions_min);
    CHECK(back.kernel == game.kernel);
  };
  for (const auto& name : builtin_names()) check_roundtrip(builtin(name));
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    check_roundtrip(random_game(seed, 1 + seed % 5, 1 + seed % 3, 1 + seed % 2));
}

TEST_CASE("deserialize: schema errors carry a path") {
  bool caught = false;
  try {
    (void)deserialize(R"({"states": 2, "g": [1, 0], "actions_max": [1, 1], "actions_min": [1, 1]})");
  } catch (const Error& err) {
    caught = err.code() == Errc::SchemaError &&
             std::string(err.what()).find("$.kernel") != std::string::npos;
  }
  CHECK(caught);

  auto game = builtin("swap2");
  game.kernel[0][0][0] = {1.2, -0.2};
  bool named_entry = false;
  try {
    (void)deserialize(serialize(game));
  } catch (const Error& err) {
    named_entry = err.code() == Errc::SchemaError &&
                  std::string(err.what()).find("kernel[0][0][0]") != std::string::npos;
  }
  CHECK(named_entry);
}

TEST_CASE("builtin: swap2 kernel is the period-2 permutation") {
  const auto game = builtin("swap2");
  CHECK(game.kernel[0][0][0] == std::vector<double>{0.0, 1.0});
  CHECK(game.kernel[1][0][0] == std::vector<double>{1.0, 0.0});
  // kernel squared is the identity
  for (int s = 0; s < 2; ++s) {
    std::vector<double> two(2, 0.0);
    for (int mid = 0; mid < 2; ++mid)
      for (int t = 0; t < 2; ++t) two[t] += game.kernel[s][0][0][mid] * game.kernel[mid][0][0][t];
    CHECK(two[s] == 1.0);
  }
}

TEST_CASE("builtin: mdp_reach structure") {
  const auto game = builtin("mdp_reach");
  CHECK(game.payoff == std::vector<double>{1.0, 0.0});
  CHECK(game.actions_max == std::vector<int>{1, 2});
  CHECK(game.kernel[0][0][0][0] == 1.0);  // state 0 absorbs
  CHECK(game.kernel[1][0][0][1] == 1.0);  // stay
  CHECK(game.kernel[1][1][0][0] == 1.0);  // go
}

TEST_CASE("builtin: ergodic3 is the seed-42 irreducible instance") {
  const auto game = builtin("ergodic3");
  CHECK(game.state_count == 3);
  CHECK(game.actions_max == std::vector<int>{2, 2, 2});
  CHECK(game.actions_min == std::vector<int>{1, 1, 1});
  const auto again = random_game(42, 3, 2, 1);
  CHECK(game.kernel == again.kernel);
  for (const auto& per_state : game.kernel)
    for (const auto& per_a : per_state)
      for (const auto& row : per_a)
        for (double p : row) CHECK(p > 0.0);
}

TEST_CASE("builtin: unknown name") {
  CHECK_THROWS_AS((void)builtin("nope"), Error);
}

TEST_CASE("random_game: determinism and validity") {
  const auto a = random_game(42, 3, 2, 2);
  const auto b = random_game(42, 3, 2, 2);
  CHECK(a.kernel == b.kernel);
  CHECK(a.payoff == b.payoff);

  const auto c = random_game(43, 3, 2, 2);
  CHECK(a.kernel != c.kernel);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto game = random_game(seed, 2 + seed % 4, 1 + seed % 3, 1 + seed % 3);
    CHECK(validate(game).empty());
  }
}

TEST_CASE("random_game: reference stream pins the generator") {
  // splitmix64-seeded xoshiro256++, doubles from the top 53 bits; these
  // values pin the documented stream so ports cannot silently change it.
  Xoshiro256pp rng(1);
  const std::uint64_t first = rng.next();
  const std::uint64_t second = rng.next();
  CHECK(first == 14971601782005023387ULL);
  CHECK(second == 13781649495232077965ULL);

  Xoshiro256pp seeded(42);
  const double d = seeded.next_double();
  CHECK(d >= 0.0);
  CHECK(d < 1.0);
  CHECK(d == doctest::Approx(random_game(42, 1, 1, 1).payoff[0]).epsilon(1e-15));
}

TEST_CASE("step process indexing") {
  const StepProcess z{{0, 1}, {2, 0}};
  CHECK(z.state_at(0) == 0);
  CHECK(z.state_at(1) == 1);
  CHECK(z.state_at(2) == 2);
  CHECK(z.state_at(3) == 0);
  CHECK(z.state_at(4) == 2);
}
