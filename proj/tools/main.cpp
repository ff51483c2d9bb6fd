#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tauber/audit.hpp"
#include "tauber/density.hpp"
#include "tauber/errors.hpp"
#include "tauber/game.hpp"
#include "tauber/tauberian.hpp"
#include "tauber/valuation.hpp"

namespace {

using nlohmann::json;

// Exit contract: 0 ok, 1 validation failure, 2 parse error, 3 numeric failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(const tauber::Error& err) {
  switch (err.code()) {
    case tauber::Errc::NumericalFailure:
    case tauber::Errc::TailNeverSmall:
      return kExitNumeric;
    default:
      return kExitParse;
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

tauber::StochasticGame load_game(const std::string& ref, bool check_semantics = true) {
  const auto& names = tauber::builtin_names();
  for (const auto& name : names)
    if (name == ref) return tauber::builtin(ref);
  std::ifstream in(ref);
  if (!in) tauber::raise(tauber::Errc::ParseError, "no builtin or readable file \"" + ref + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return tauber::deserialize(buffer.str(), check_semantics);
}

// Output files appear atomically: temp file in the same directory + rename.
void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) tauber::raise(tauber::Errc::ParseError, "cannot write \"" + tmp + "\"");
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

int jobs_or_env(int jobs_flag) {
  if (jobs_flag > 0) return jobs_flag;
  if (const char* env = std::getenv("TAUBER_JOBS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Sweep / equivalence configuration and reports
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string game_ref;
  std::vector<tauber::FamilySpec> families;
  std::vector<double> family_tail_eps;  // per family (config override or global)
  double tail_eps = 1e-9;
  double tol = 0.02;
  std::string out;
};

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) tauber::raise(tauber::Errc::ParseError, "cannot open config \"" + path + "\"");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& err) {
    tauber::raise(tauber::Errc::ParseError, std::string("config: ") + err.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.game_ref = doc.at("game").get<std::string>();
    cfg.tail_eps = doc.value("tail_eps", 1e-9);
    cfg.tol = doc.value("tol", 0.02);
    cfg.out = doc.value("out", std::string{});
    for (const auto& fam : doc.at("families")) {
      const auto kind = tauber::family_from_name(fam.at("kind").get<std::string>());
      auto grid = fam.at("grid").get<std::vector<double>>();
      switch (kind) {
        case tauber::FamilyKind::Cesaro:
          cfg.families.push_back(tauber::FamilySpec::cesaro(std::move(grid)));
          break;
        case tauber::FamilyKind::CesaroDiscrete:
          cfg.families.push_back(tauber::FamilySpec::cesaro_discrete(std::move(grid)));
          break;
        case tauber::FamilyKind::Abel:
          cfg.families.push_back(tauber::FamilySpec::abel(std::move(grid)));
          break;
        case tauber::FamilyKind::PowerShift:
          cfg.families.push_back(tauber::FamilySpec::power_shift(
              tauber::Density::parse(fam.at("base").get<std::string>()), std::move(grid)));
          break;
        case tauber::FamilyKind::Scaled:
          cfg.families.push_back(tauber::FamilySpec::scaled(
              tauber::Density::parse(fam.at("base").get<std::string>()), std::move(grid)));
          break;
      }
      cfg.family_tail_eps.push_back(fam.value("tail_eps", cfg.tail_eps));
    }
  } catch (const json::exception& err) {
    tauber::raise(tauber::Errc::ParseError, std::string("config: ") + err.what());
  }
  if (cfg.families.empty()) tauber::raise(tauber::Errc::ParseError, "config has no families");
  return cfg;
}

std::string tables_to_csv(const std::vector<tauber::FamilyTable>& tables,
                          const tauber::StateFunction* u_star) {
  std::string csv = "family,grid_point,state,lo,hi,deviation\n";
  for (const auto& table : tables) {
    for (std::size_t g = 0; g < table.grid.size(); ++g) {
      const auto& bracket = table.values[g];
      for (std::size_t s = 0; s < bracket.lo.size(); ++s) {
        csv += tauber::family_name(table.kind);
        csv += ',';
        csv += format_double(table.grid[g]);
        csv += ',';
        csv += std::to_string(s);
        csv += ',';
        csv += format_double(bracket.lo[s]);
        csv += ',';
        csv += format_double(bracket.hi[s]);
        csv += ',';
        if (u_star) {
          const double mid = 0.5 * (bracket.lo[s] + bracket.hi[s]);
          csv += format_double(std::abs(mid - (*u_star)[s]));
        }
        csv += '\n';
      }
    }
  }
  return csv;
}

json report_to_json(const tauber::EquivalenceReport& report) {
  json doc;
  doc["u_star"] = report.u_star;
  doc["u_star_disagreement"] = report.u_star_disagreement;
  doc["verdicts"] = json::array();
  for (const auto& verdict : report.verdicts) {
    doc["verdicts"].push_back({{"family", tauber::family_name(verdict.kind)},
                               {"grid_point", verdict.grid_point},
                               {"deviation", verdict.deviation},
                               {"allowance", verdict.allowance},
                               {"pass", verdict.pass}});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_validate(const std::string& game_ref) {
  const auto game = load_game(game_ref, /*check_semantics=*/false);
  const auto violations = tauber::validate(game);
  for (const auto& violation : violations) std::cerr << violation << '\n';
  return violations.empty() ? kExitOk : kExitValidation;
}

int run_value(const std::string& game_ref, const std::string& density_expr, double tail_eps) {
  const tauber::Density rho = tauber::Density::parse(density_expr);
  const auto game = load_game(game_ref);
  const auto bracket = tauber::value_backward(game, rho, tail_eps);
  for (std::size_t s = 0; s < bracket.lo.size(); ++s)
    std::cout << "s" << s << " [" << format_double(bracket.lo[s]) << ", "
              << format_double(bracket.hi[s]) << "]\n";
  return kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& out_override, int jobs,
              bool with_verdicts) {
  ExperimentConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  if (cfg.out.empty())
    tauber::raise(tauber::Errc::ParseError, "no output prefix (config \"out\" or --out)");
  const auto game = load_game(cfg.game_ref);

  std::vector<tauber::FamilyTable> tables;
  for (std::size_t i = 0; i < cfg.families.size(); ++i)
    tables.push_back(
        tauber::family_values(game, cfg.families[i], cfg.family_tail_eps[i], jobs));

  json summary;
  summary["game"] = cfg.game_ref;
  summary["tol"] = cfg.tol;
  summary["tail_eps"] = cfg.tail_eps;
  summary["families"] = json::array();
  for (std::size_t i = 0; i < cfg.families.size(); ++i)
    summary["families"].push_back({{"kind", tauber::family_name(cfg.families[i].kind)},
                                   {"grid", cfg.families[i].grid},
                                   {"tail_eps", cfg.family_tail_eps[i]}});

  std::optional<tauber::StateFunction> u_star;
  if (with_verdicts) {
    const tauber::EquivalenceReport report =
        tauber::assemble_report(cfg.families, tables, cfg.tol);
    u_star = report.u_star;
    summary.update(report_to_json(report));
    for (const auto& verdict : report.verdicts)
      std::cout << (verdict.pass ? "PASS " : "FAIL ") << tauber::family_name(verdict.kind)
                << " deviation " << format_double(verdict.deviation) << " allowance "
                << format_double(verdict.allowance) << '\n';
  }

  write_file_atomic(cfg.out + ".csv",
                    tables_to_csv(tables, u_star ? &*u_star : nullptr));
  write_file_atomic(cfg.out + ".json", summary.dump(2) + "\n");
  return kExitOk;
}

int run_audit(const std::string& density_expr, double epsilon, double big_m, double r0,
              const std::string& out) {
  const tauber::Density input = tauber::Density::parse(density_expr);
  const tauber::ProofConstants constants = tauber::proof_constants(epsilon, big_m, r0);

  const tauber::Density mu = tauber::regularize_support(input, epsilon);
  const tauber::QuantilePartition partition = tauber::quantile_partition(mu, constants);
  const tauber::TvCorrection correction =
      tauber::tv_correct(mu, partition, big_m, constants.k, epsilon);

  const double kk = static_cast<double>(constants.k) * static_cast<double>(constants.k);
  double max_mass_residual = 0;
  for (std::size_t m = 1; m < partition.tau.size(); ++m) {
    const double target = std::pow(constants.p, static_cast<double>(m - 1)) * constants.delta;
    const double got = mu.cdf(partition.tau[m]) - mu.cdf(partition.tau[m - 1]);
    max_mass_residual = std::max(max_mass_residual, std::abs(got - target));
  }

  json doc;
  doc["constants"] = {{"epsilon", constants.epsilon},
                      {"M", constants.M},
                      {"r0", constants.r0},
                      {"k", constants.k},
                      {"p", constants.p},
                      {"delta", constants.delta},
                      {"kappa", constants.kappa},
                      {"geometric_identity_residual",
                       std::abs(std::pow(constants.p, kk) - constants.epsilon)}};
  doc["regularize"] = {{"quantile", input.quantile(1.0 - epsilon)},
                       {"mass", mu.mass()},
                       {"l1_to_input", tauber::l1_distance(mu, input)}};
  doc["partition"] = {{"cells", static_cast<long>(partition.lambdas.size())},
                      {"max_mass_residual", max_mass_residual},
                      {"tau_end", partition.tau.back()}};
  doc["tv_correct"] = {{"incorrect_count", correction.incorrect_count},
                       {"l1_change", tauber::l1_distance(correction.mu_tilde, mu)},
                       {"mass", correction.mu_tilde.mass()}};

  const std::string text = doc.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
  return kExitOk;
}

int run_demo(const std::string& name, const std::string& out, std::uint64_t seed, int states,
             int amax, int amin) {
  tauber::StochasticGame game;
  if (name == "random")
    game = tauber::random_game(seed, states, amax, amin);
  else
    game = tauber::builtin(name);
  const std::string text = tauber::serialize(game) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite zero-sum dynamic game values under discounting densities"};
  app.require_subcommand(1);

  std::string game_ref, density_expr, config_path, out_path, demo_name;
  double tail_eps = 1e-9, epsilon = 0.05, big_m = 2.0, r0 = 0.25;
  int jobs_flag = 0, demo_states = 3, demo_amax = 2, demo_amin = 2;
  std::uint64_t seed = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a game document");
  validate_cmd->add_option("--game", game_ref, "builtin name or path")->required();

  auto* value_cmd = app.add_subcommand("value", "per-state value bracket");
  value_cmd->add_option("--game", game_ref, "builtin name or path");
  value_cmd->add_option("--density", density_expr, "density expression")->required();
  value_cmd->add_option("--tail-eps", tail_eps, "truncation tail mass");

  auto* sweep_cmd = app.add_subcommand("sweep", "family sweep to CSV/JSON");
  sweep_cmd->add_option("--config", config_path, "experiment config")->required();
  sweep_cmd->add_option("--out", out_path, "output prefix override");
  sweep_cmd->add_option("--jobs", jobs_flag, "parallel grid evaluation");

  auto* equiv_cmd = app.add_subcommand("equivalence", "equivalence report to CSV/JSON");
  equiv_cmd->add_option("--config", config_path, "experiment config")->required();
  equiv_cmd->add_option("--out", out_path, "output prefix override");
  equiv_cmd->add_option("--jobs", jobs_flag, "parallel grid evaluation");

  auto* audit_cmd = app.add_subcommand("audit", "proof-construction audit report");
  audit_cmd->add_option("--density", density_expr, "density expression")->required();
  audit_cmd->add_option("--epsilon", epsilon, "accuracy parameter in (0, 1/10)")->required();
  audit_cmd->add_option("--M", big_m, "variation budget, > 1")->required();
  audit_cmd->add_option("--r0", r0, "quantile level in (0, 1/2)");
  audit_cmd->add_option("--out", out_path, "report path (stdout if omitted)");

  auto* demo_cmd = app.add_subcommand("demo", "materialize a game document");
  demo_cmd->add_option("name", demo_name, "builtin name, or \"random\"")->required();
  demo_cmd->add_option("--out", out_path, "output path (stdout if omitted)");
  demo_cmd->add_option("--seed", seed, "seed for random demos");
  demo_cmd->add_option("--states", demo_states, "states for random demos");
  demo_cmd->add_option("--amax", demo_amax, "maximizer actions for random demos");
  demo_cmd->add_option("--amin", demo_amin, "minimizer actions for random demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitParse;
  }

  try {
    if (*validate_cmd) return run_validate(game_ref);
    if (*value_cmd) return run_value(game_ref, density_expr, tail_eps);
    if (*sweep_cmd) return run_sweep(config_path, out_path, jobs_or_env(jobs_flag), false);
    if (*equiv_cmd) return run_sweep(config_path, out_path, jobs_or_env(jobs_flag), true);
    if (*audit_cmd) return run_audit(density_expr, epsilon, big_m, r0, out_path);
    if (*demo_cmd)
      return run_demo(demo_name, out_path, seed, demo_states, demo_amax, demo_amin);
  } catch (const tauber::Error& err) {
    std::cerr << err.what() << '\n';
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
