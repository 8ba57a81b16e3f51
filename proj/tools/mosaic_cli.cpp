#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <nlohmann/json.hpp>

#include "mosaic/damcmc.hpp"
#include "mosaic/harness.hpp"
#include "mosaic/io.hpp"
#include "mosaic/rng.hpp"

namespace {

using namespace mosaic;

RunConfig load_config(const std::string& path) {
  return parse_run_config(read_json_file(path));
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& truth_path, std::uint64_t seed_override,
                 bool has_seed) {
  RunConfig cfg = load_config(config_path);
  TruthSpec truth = cfg.truth;
  truth.p = cfg.model.p;
  if (has_seed) truth.seed = seed_override;
  Rng rng(derive_seed(truth.seed, StreamKind::Simulate));
  const SimulatedData sim = simulate_dataset(truth, rng);
  write_data_csv(out_path, sim.y);
  if (!truth_path.empty()) write_truth_json(truth_path, sim.truth);
  std::cout << "simulated " << truth.n << " x " << truth.p << " counts ("
            << to_string(truth.link) << ") -> " << out_path << "\n";
  return 0;
}

int cmd_fit(const std::string& method, const std::string& tile_strategy,
            const std::string& data_path, const std::string& config_path,
            const std::string& out_path, const std::string& diag_path,
            const std::string& init_truth_path, double budget_seconds,
            int workers, std::uint64_t seed_override, bool has_seed) {
  RunConfig cfg = load_config(config_path);
  const IntMatrix raw = read_data_csv(data_path);
  if (cfg.model.p == 0) {
    cfg.model.p = static_cast<int>(raw.cols());
    cfg.model.links.assign(cfg.model.p, LinkFamily::PoissonLogNormal);
  }
  if (cfg.model.p != raw.cols())
    throw std::runtime_error("config model.p does not match the data");

  nlohmann::json diag;
  diag["method"] = method;

  if (method == "mosaic") {
    ChainConfig chain = cfg.chain;
    if (!tile_strategy.empty())
      chain.tile_strategy = tile_strategy_from_string(tile_strategy);
    if (has_seed) chain.seed = seed_override;
    const CompressedDataset data = compress(raw);
    const MosaicSamples samples =
        run_mosaic(cfg.model, data, cfg.prior, chain, workers);
    write_samples_csv(out_path, to_draws(samples));
    diag["draws"] = samples.M;
    diag["tile_strategy"] = to_string(chain.tile_strategy);
    diag["knot_acceptance"] = samples.knot_acceptance;
    diag["tile_acceptance"] = samples.tile_acceptance;
    diag["laplace_fallbacks"] = samples.laplace_fallbacks;
    diag["zero_acceptance_chains"] = samples.zero_acceptance_chains;
    diag["phase_seconds"] = {{"knots", samples.knot_seconds},
                             {"tiles", samples.tile_seconds}};
  } else if (method == "damcmc") {
    DamcmcConfig dcfg = cfg.damcmc;
    if (budget_seconds > 0.0) dcfg.budget_seconds = budget_seconds;
    if (has_seed) dcfg.seed = seed_override;
    Parameters init;
    const Parameters* init_ptr = nullptr;
    if (!init_truth_path.empty()) {
      init = read_truth_json(init_truth_path);
      init_ptr = &init;
    }
    const DamcmcResult result =
        run_damcmc(cfg.model, raw, dcfg, init_ptr, workers);
    write_samples_csv(out_path, to_draws(result.draws));
    diag["draws"] = result.draws.size();
    diag["sweeps"] = result.sweeps;
    diag["latent_acceptance"] = result.latent_acceptance;
    diag["phase_seconds"] = {{"latents", result.latent_seconds},
                             {"params", result.param_seconds}};
    diag["init_truth"] = init_ptr != nullptr;
  } else {
    throw std::runtime_error("unknown method: " + method);
  }

  if (!diag_path.empty()) write_json_file(diag_path, diag);
  std::cout << "fit " << method << " -> " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& samples_path, const std::string& truth_path,
             bool corrected, const std::string& out_path, double level) {
  ParameterDraws draws = read_samples_csv(samples_path);
  const Parameters truth = read_truth_json(truth_path);
  if (corrected) correct_draws(draws);
  const EvalReport report = evaluate(draws, corrected, truth, level);
  write_report_json(out_path, report);
  std::cout << "eval";
  for (const auto& [k, v] : report.coverage)
    std::cout << " " << k << "=" << v;
  std::cout << " -> " << out_path << "\n";
  return 0;
}

int cmd_diag_fisher(const std::string& config_path,
                    const std::string& truth_path,
                    const std::string& out_path) {
  const nlohmann::json j = read_json_file(config_path);
  RunConfig cfg = parse_run_config(j);
  const Parameters truth = read_truth_json(truth_path);
  std::int64_t mc_draws = 200000;
  std::int64_t n = cfg.truth.n;
  std::uint64_t seed = 7;
  if (j.contains("fisher")) {
    const auto& f = j.at("fisher");
    if (f.contains("mc_draws")) mc_draws = f.at("mc_draws").get<std::int64_t>();
    if (f.contains("n")) n = f.at("n").get<std::int64_t>();
    if (f.contains("seed")) seed = f.at("seed").get<std::uint64_t>();
  }
  if (cfg.model.p == 0) {
    cfg.model.p = truth.p();
    cfg.model.links.assign(cfg.model.p, LinkFamily::PoissonLogNormal);
  }
  Rng rng(derive_seed(seed, StreamKind::Fisher));
  const FisherDiagnostic diag =
      fisher_diagnostic(cfg.model, truth, mc_draws, n, rng);
  write_fisher_json(out_path, diag);
  std::cout << "fisher diagnostic (" << mc_draws << " MC draws) -> "
            << out_path << "\n";
  return 0;
}

int cmd_diag_complexity(const std::string& out_path) {
  const KnotParam knot{1.0, 0.75};
  const std::vector<std::int64_t> K_values = {16, 32, 64, 128, 256};
  const std::vector<std::int64_t> n_values = {100000, 10000000};
  const ComplexityReport report = complexity_probe(
      LinkFamily::PoissonLogNormal, knot, K_values, n_values);
  write_complexity_csv(out_path, report);
  const KBoundCheck bound = k_bound_check(10000, 100, 2024);
  std::cout << "time-vs-K log-log slope: " << report.loglog_slope << "\n"
            << "fixed-K n x100 time ratio: " << report.n_scaling_ratio << "\n"
            << "cardinality bound satisfied: " << bound.satisfied << "/"
            << bound.total << "\n";
  return 0;
}

int cmd_replicate(const std::string& config_path, int reps,
                  const std::string& out_path, int workers) {
  ReplicateConfig cfg = parse_replicate_config(read_json_file(config_path));
  if (reps > 0) cfg.replicates = reps;
  if (workers > 0) cfg.workers = workers;
  const ReplicateTable table = run_replicates(cfg);
  write_json_file(out_path, table.to_json());
  const nlohmann::json summary = summarize_replicates(table);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian mosaic sampler and experiment harness"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_path, truth_path, diag_path;
  std::string method = "mosaic", tile_strategy, init_truth_path, samples_path;
  double budget_seconds = 0.0, level = 0.95;
  int workers = 0, reps = 0;
  std::uint64_t seed = 0;
  bool corrected = false;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->add_option("--config", config_path)->required();
  sim->add_option("--out", out_path)->required();
  sim->add_option("--truth", truth_path);
  auto* sim_seed = sim->add_option("--seed", seed);

  auto* fit = app.add_subcommand("fit", "fit a model to a data CSV");
  fit->add_option("--method", method)
      ->check(CLI::IsMember({"mosaic", "damcmc"}));
  fit->add_option("--tile-strategy", tile_strategy)
      ->check(CLI::IsMember({"shortmh", "laplace", "plugin"}));
  fit->add_option("--data", data_path)->required();
  fit->add_option("--config", config_path)->required();
  fit->add_option("--out", out_path)->required();
  fit->add_option("--diag", diag_path);
  fit->add_option("--init-truth", init_truth_path);
  fit->add_option("--budget-seconds", budget_seconds);
  fit->add_option("--workers", workers);
  auto* fit_seed = fit->add_option("--seed", seed);

  auto* ev = app.add_subcommand("eval", "evaluate samples against a truth");
  ev->add_option("--samples", samples_path)->required();
  ev->add_option("--truth", truth_path)->required();
  ev->add_flag("--corrected", corrected);
  ev->add_option("--out", out_path)->required();
  ev->add_option("--level", level);

  auto* diag = app.add_subcommand("diag", "numerical diagnostics");
  diag->require_subcommand(1);
  auto* fisher = diag->add_subcommand("fisher", "Fisher-block diagnostic");
  fisher->add_option("--config", config_path)->required();
  fisher->add_option("--truth", truth_path)->required();
  fisher->add_option("--out", out_path)->required();
  auto* complexity =
      diag->add_subcommand("complexity", "likelihood cost scaling probe");
  complexity->add_option("--out", out_path)->required();

  auto* rep = app.add_subcommand("replicate", "end-to-end simulation study");
  rep->add_option("--config", config_path)->required();
  rep->add_option("--reps", reps);
  rep->add_option("--out", out_path)->required();
  rep->add_option("--workers", workers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, out_path, truth_path, seed,
                          sim_seed->count() > 0);
    if (fit->parsed())
      return cmd_fit(method, tile_strategy, data_path, config_path, out_path,
                     diag_path, init_truth_path, budget_seconds, workers, seed,
                     fit_seed->count() > 0);
    if (ev->parsed())
      return cmd_eval(samples_path, truth_path, corrected, out_path, level);
    if (diag->parsed()) {
      if (fisher->parsed())
        return cmd_diag_fisher(config_path, truth_path, out_path);
      return cmd_diag_complexity(out_path);
    }
    if (rep->parsed()) return cmd_replicate(config_path, reps, out_path, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
