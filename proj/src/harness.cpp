#include "mosaic/harness.hpp"

#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mosaic/rng.hpp"

namespace mosaic {

namespace {

double json_number(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int json_int(const nlohmann::json& j, const char* key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;

  if (j.contains("model")) {
    const auto& m = j.at("model");
    cfg.model.p = json_int(m, "p", 0);
    if (m.contains("links")) {
      for (const auto& l : m.at("links"))
        cfg.model.links.push_back(link_from_string(l.get<std::string>()));
      if (cfg.model.p == 0) cfg.model.p = static_cast<int>(cfg.model.links.size());
    } else if (m.contains("link")) {
      const LinkFamily link = link_from_string(m.at("link").get<std::string>());
      cfg.model.links.assign(std::max(cfg.model.p, 1), link);
      if (cfg.model.p == 0) cfg.model.p = 1;
    }
    cfg.model.validate();
  }

  if (j.contains("prior")) {
    const auto& p = j.at("prior");
    cfg.prior.A = json_number(p, "A", cfg.prior.A);
    cfg.prior.B = json_number(p, "B", cfg.prior.B);
  }

  if (j.contains("chain")) {
    const auto& c = j.at("chain");
    if (c.contains("preset")) {
      const std::string preset = c.at("preset").get<std::string>();
      if (preset == "sim") {
        cfg.chain.iterations = 200;
        cfg.chain.burn_in = 100;
        cfg.chain.thin = 1;
      } else if (preset == "long") {
        // long-chain schedule: 40000/20000 thinned to 500 retained draws
        cfg.chain.iterations = 40000;
        cfg.chain.burn_in = 20000;
        cfg.chain.thin = 40;
        cfg.chain.tile_iterations = 10000;
        cfg.chain.tile_burn_in = 5000;
      } else {
        throw std::invalid_argument("unknown chain preset: " + preset);
      }
    }
    cfg.chain.iterations = json_int(c, "iterations", cfg.chain.iterations);
    cfg.chain.burn_in = json_int(c, "burn_in", cfg.chain.burn_in);
    cfg.chain.thin = json_int(c, "thin", cfg.chain.thin);
    cfg.chain.proposal_scale =
        json_number(c, "proposal_scale", cfg.chain.proposal_scale);
    if (c.contains("tile_strategy"))
      cfg.chain.tile_strategy =
          tile_strategy_from_string(c.at("tile_strategy").get<std::string>());
    cfg.chain.tile_inner_steps =
        json_int(c, "tile_inner_steps", cfg.chain.tile_inner_steps);
    cfg.chain.tile_iterations =
        json_int(c, "tile_iterations", cfg.chain.tile_iterations);
    cfg.chain.tile_burn_in =
        json_int(c, "tile_burn_in", cfg.chain.tile_burn_in);
    cfg.chain.knot_quad_order =
        json_int(c, "knot_quad_order", cfg.chain.knot_quad_order);
    cfg.chain.tile_quad_order =
        json_int(c, "tile_quad_order", cfg.chain.tile_quad_order);
    if (c.contains("seed")) cfg.chain.seed = c.at("seed").get<std::uint64_t>();
  }

  if (j.contains("truth")) {
    const auto& t = j.at("truth");
    if (t.contains("mu_range")) {
      cfg.truth.mu_range = {t.at("mu_range")[0].get<double>(),
                            t.at("mu_range")[1].get<double>()};
    }
    if (t.contains("sigma_diag_range")) {
      cfg.truth.sigma_diag_range = {t.at("sigma_diag_range")[0].get<double>(),
                                    t.at("sigma_diag_range")[1].get<double>()};
    }
    cfg.truth.lkj_eta = json_number(t, "lkj_eta", cfg.truth.lkj_eta);
    cfg.truth.p = cfg.model.p > 0 ? cfg.model.p : json_int(t, "p", cfg.truth.p);
    cfg.truth.n = t.contains("n") ? t.at("n").get<std::int64_t>() : cfg.truth.n;
    if (t.contains("link"))
      cfg.truth.link = link_from_string(t.at("link").get<std::string>());
    else if (!cfg.model.links.empty())
      cfg.truth.link = cfg.model.links.front();
    if (t.contains("seed")) cfg.truth.seed = t.at("seed").get<std::uint64_t>();
  }

  if (j.contains("damcmc")) {
    const auto& d = j.at("damcmc");
    cfg.damcmc.iterations = json_int(d, "iterations", cfg.damcmc.iterations);
    cfg.damcmc.burn_in = json_int(d, "burn_in", cfg.damcmc.burn_in);
    cfg.damcmc.thin_target = json_int(d, "thin_target", cfg.damcmc.thin_target);
    cfg.damcmc.budget_seconds =
        json_number(d, "budget_seconds", cfg.damcmc.budget_seconds);
    cfg.damcmc.latent_step_factor =
        json_number(d, "latent_step_factor", cfg.damcmc.latent_step_factor);
    if (d.contains("seed")) cfg.damcmc.seed = d.at("seed").get<std::uint64_t>();
    if (d.contains("init_truth"))
      cfg.damcmc_init_truth = d.at("init_truth").get<bool>();
  }

  return cfg;
}

ReplicateConfig parse_replicate_config(const nlohmann::json& j) {
  ReplicateConfig cfg;
  cfg.run = parse_run_config(j);
  if (j.contains("replicate")) {
    const auto& r = j.at("replicate");
    cfg.replicates = json_int(r, "reps", cfg.replicates);
    if (r.contains("methods")) {
      cfg.fit_mosaic = false;
      cfg.fit_damcmc = false;
      for (const auto& m : r.at("methods")) {
        const std::string name = m.get<std::string>();
        if (name == "mosaic") cfg.fit_mosaic = true;
        else if (name == "damcmc") cfg.fit_damcmc = true;
        else throw std::invalid_argument("unknown method: " + name);
      }
    }
    cfg.damcmc_budget_factor =
        json_number(r, "budget_factor", cfg.damcmc_budget_factor);
    if (r.contains("corrected")) cfg.corrected = r.at("corrected").get<bool>();
    cfg.level = json_number(r, "level", cfg.level);
    if (r.contains("seed")) cfg.seed = r.at("seed").get<std::uint64_t>();
    cfg.workers = json_int(r, "workers", cfg.workers);
    if (r.contains("damcmc_init_truth"))
      cfg.run.damcmc_init_truth = r.at("damcmc_init_truth").get<bool>();
  }
  return cfg;
}

ReplicateTable run_replicates(const ReplicateConfig& cfg) {
  cfg.run.model.validate();
  ReplicateTable table;
  table.outcomes.resize(cfg.replicates);

  for (int rep = 0; rep < cfg.replicates; ++rep) {
    ReplicateOutcome& outcome = table.outcomes[rep];
    const std::uint64_t rep_seed =
        derive_seed(cfg.seed, StreamKind::Harness, rep);

    TruthSpec truth_spec = cfg.run.truth;
    truth_spec.p = cfg.run.model.p;
    truth_spec.seed = rep_seed;
    Rng sim_rng(derive_seed(rep_seed, StreamKind::Simulate));
    const SimulatedData sim = simulate_dataset(truth_spec, sim_rng);
    const CompressedDataset data = compress(sim.y);

    double mosaic_seconds = 0.0;
    if (cfg.fit_mosaic) {
      ChainConfig chain = cfg.run.chain;
      chain.seed = derive_seed(rep_seed, StreamKind::Knot, 0x10);
      const auto t0 = std::chrono::steady_clock::now();
      MosaicSamples samples =
          run_mosaic(cfg.run.model, data, cfg.run.prior, chain, cfg.workers);
      if (cfg.corrected) correct_samples(samples, -1.0, cfg.workers);
      mosaic_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
      outcome.mosaic =
          evaluate(to_draws(samples), cfg.corrected, sim.truth, cfg.level);
      outcome.mosaic_seconds = mosaic_seconds;
    }

    if (cfg.fit_damcmc) {
      DamcmcConfig dcfg = cfg.run.damcmc;
      dcfg.seed = derive_seed(rep_seed, StreamKind::Params, 0x20);
      if (cfg.fit_mosaic && cfg.damcmc_budget_factor > 0.0)
        dcfg.budget_seconds = cfg.damcmc_budget_factor * mosaic_seconds;
      const auto t0 = std::chrono::steady_clock::now();
      const DamcmcResult result =
          run_damcmc(cfg.run.model, sim.y, dcfg,
                     cfg.run.damcmc_init_truth ? &sim.truth : nullptr,
                     cfg.workers);
      outcome.damcmc_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
      outcome.damcmc_sweeps = result.sweeps;
      outcome.damcmc =
          evaluate(to_draws(result.draws), false, sim.truth, cfg.level);
    }
  }
  return table;
}

namespace {

nlohmann::json group_summary(const std::vector<ReplicateOutcome>& outcomes,
                             bool use_damcmc) {
  // collect per-replicate group values
  std::map<std::string, std::vector<double>> mse, coverage;
  for (const auto& o : outcomes) {
    const EvalReport* report = use_damcmc
                                   ? (o.damcmc ? &*o.damcmc : nullptr)
                                   : &o.mosaic;
    if (!report) continue;
    for (const auto& [k, v] : report->mse) mse[k].push_back(v);
    for (const auto& [k, v] : report->coverage) coverage[k].push_back(v);
  }
  const auto stats = [](const std::vector<double>& xs) {
    nlohmann::json j;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    // standard error convention: sd of the per-replicate values
    const double sd =
        xs.size() > 1 ? std::sqrt(var / (static_cast<double>(xs.size()) - 1.0))
                      : 0.0;
    j["mean"] = mean;
    j["sd"] = sd;
    j["values"] = xs;
    return j;
  };
  nlohmann::json out;
  for (const auto& [k, v] : mse) out["mse"][k] = stats(v);
  for (const auto& [k, v] : coverage) out["coverage"][k] = stats(v);
  return out;
}

}  // namespace

nlohmann::json ReplicateTable::to_json() const {
  nlohmann::json j;
  j["replicates"] = outcomes.size();
  j["summary"] = summarize_replicates(*this);
  nlohmann::json per_rep = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json r;
    r["mosaic"] = {{"mse", o.mosaic.mse},
                   {"coverage", o.mosaic.coverage},
                   {"seconds", o.mosaic_seconds}};
    if (o.damcmc)
      r["damcmc"] = {{"mse", o.damcmc->mse},
                     {"coverage", o.damcmc->coverage},
                     {"seconds", o.damcmc_seconds},
                     {"sweeps", o.damcmc_sweeps}};
    per_rep.push_back(r);
  }
  j["per_replicate"] = per_rep;
  return j;
}

nlohmann::json summarize_replicates(const ReplicateTable& table) {
  nlohmann::json j;
  j["mosaic"] = group_summary(table.outcomes, false);
  bool any_damcmc = false;
  for (const auto& o : table.outcomes) any_damcmc |= o.damcmc.has_value();
  if (any_damcmc) j["damcmc"] = group_summary(table.outcomes, true);
  return j;
}

}  // namespace mosaic
