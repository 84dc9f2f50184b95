#pragma once

// Subcommands of the translucent CLI. Each takes a parsed JSON config,
// writes its report to `out` and returns the process exit code.

#include <algorithm>
#include <iostream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "translucent/translucent.hpp"

namespace translucent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitInput = 2;

/// A scalar range: a number, an array of numbers, or {"start","stop","step"}.
/// Values are exact; the stop value is included when it lies on the grid.
inline std::vector<Rational> read_range(const Json& v, const std::string& path, std::uint64_t budget) {
  if (v.is_array()) return io::read_rational_array(v, path);
  if (v.is_object()) {
    Rational start = io::read_rational(io::require(v, "start", path), path + ".start");
    Rational stop = io::read_rational(io::require(v, "stop", path), path + ".stop");
    Rational step = io::read_rational(io::require(v, "step", path), path + ".step");
    if (step <= 0) io::fail(path + ".step", "must be > 0");
    if (stop < start) io::fail(path, "stop < start");
    Rational span = (stop - start) / step;
    mpz_class count = span.get_num() / span.get_den();
    if (count > mpz_class(static_cast<unsigned long>(budget))) io::fail(path, "too many grid points");
    std::vector<Rational> out;
    for (long k = 0; k <= count.get_si(); ++k) {
      Rational value = start + step * k;
      out.push_back(value);
    }
    return out;
  }
  return {io::read_rational(v, path)};
}

inline std::vector<int> to_ints(const std::vector<Rational>& values, const std::string& path) {
  std::vector<int> out;
  for (const auto& q : values) {
    if (q.get_den() != 1 || !q.get_num().fits_sint_p()) io::fail(path, "expected integers");
    out.push_back(static_cast<int>(q.get_num().get_si()));
  }
  return out;
}

inline void write_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << "\n"; }

inline Rational unit_value(const Json& cfg, const char* key) {
  Rational v = io::read_rational(io::require(cfg, key, "config"), std::string("config.") + key);
  if (v < 0 || v > 1) io::fail(std::string("config.") + key, "must lie in [0,1]");
  return v;
}

inline Json verdict_json(const CooperationVerdict<Rational>& v) {
  Json out = Json::object();
  out["rational"] = v.rational;
  out["binding"] = v.binding ? Json(round_real(to_double(*v.binding))) : Json("inf");
  out["threshold"] = round_real(to_double(v.threshold));
  return out;
}

// check ---------------------------------------------------------------------

inline int cmd_check(const Json& cfg, std::ostream& out, std::uint64_t budget) {
  DilemmaParams p = dilemma_params_from_json(io::require(cfg, "game", "config"), "config.game");
  Rational alpha = unit_value(cfg, "alpha");
  Rational beta = unit_value(cfg, "beta");
  int player = cfg.contains("player") ? io::read_int(cfg["player"], "config.player") : 0;
  SocialDilemma d = make_dilemma(p);
  if (player < 0 || player >= d.num_players()) io::fail("config.player", "out of range");

  auto closed = cooperation_condition<Rational>(p, alpha, beta);
  auto engine = is_cooperation_rational_exact(d, player, TranslucentType<Rational>{alpha, beta}, budget);

  Json report = Json::object();
  report["game"] = dilemma_params_to_json(p);
  report["alpha"] = to_double(alpha);
  report["beta"] = to_double(beta);
  report["player"] = player;
  report["closed_form"] = verdict_json(closed);
  if (p.kind == DilemmaKind::kTravelersDilemma || p.kind == DilemmaKind::kBertrand) {
    report["printed_form"] = verdict_json(printed_cooperation_condition<Rational>(p, alpha, beta));
  }
  report["engine"] = {{"rational", engine.verdict},
                      {"eu_coop", round_real(engine.eu_coop)},
                      {"eu_best_deviation", round_real(engine.eu_best_deviation)},
                      {"best_deviation", d.game.strategy_label(player, engine.best_deviation)},
                      {"exact", engine.exact}};
  report["agree"] = closed.rational == engine.verdict;
  if (alpha == 0) report["note"] = "opaque";
  write_json(out, report);
  return closed.rational == engine.verdict ? kExitOk : kExitVerdict;
}

// sweep ---------------------------------------------------------------------

namespace detail {

struct ParamAxis {
  std::string key;
  bool integer;
  std::vector<Rational> values;
};

inline std::vector<ParamAxis> param_axes(DilemmaKind kind, const Json& params, std::uint64_t budget) {
  std::vector<std::pair<std::string, bool>> keys;
  switch (kind) {
    case DilemmaKind::kPrisonersDilemma: keys = {{"b", false}, {"c", false}}; break;
    case DilemmaKind::kPublicGoods: keys = {{"n", true}, {"rho", false}}; break;
    case DilemmaKind::kBertrand: keys = {{"n", true}, {"l", true}, {"h", true}}; break;
    case DilemmaKind::kTravelersDilemma: keys = {{"l", true}, {"h", true}, {"bonus", false}}; break;
  }
  std::vector<ParamAxis> axes;
  for (const auto& [key, integer] : keys) {
    const std::string path = "config.params." + key;
    auto values = read_range(io::require(params, key, "config.params"), path, budget);
    if (integer) to_ints(values, path);
    if (values.empty()) io::fail(path, "empty range");
    axes.push_back({key, integer, std::move(values)});
  }
  return axes;
}

inline DilemmaParams params_at(DilemmaKind kind, const std::vector<ParamAxis>& axes, const std::vector<int>& pick,
                               int grid) {
  DilemmaParams p;
  p.kind = kind;
  p.grid = grid;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const Rational& v = axes[k].values[static_cast<std::size_t>(pick[k])];
    const std::string& key = axes[k].key;
    int as_int = axes[k].integer ? static_cast<int>(v.get_num().get_si()) : 0;
    if (key == "b") p.b = Number(v);
    if (key == "c") p.c = Number(v);
    if (key == "rho") p.rho = Number(v);
    if (key == "bonus") p.bonus = Number(v);
    if (key == "n") p.n = as_int;
    if (key == "l") p.l = as_int;
    if (key == "h") p.h = as_int;
  }
  return p;
}

inline bool params_valid(const DilemmaParams& p) {
  try {
    check_closed_form_params(p);
    if (p.kind == DilemmaKind::kPublicGoods && p.rho.exact() == 1) return false;
    return true;
  } catch (const InputError&) {
    return false;
  }
}

inline std::string csv_bool(bool v) { return v ? "true" : "false"; }

}  // namespace detail

/// Config: {"kind", "params": {key: range}, "alpha": range, "beta": range,
///          "lambda"?: range, "grid"?: int, "mode"?: "cooperation"|"te"|"te_typed"|"qre",
///          "skip_invalid"?: bool, "verify_fraction"?: number, "seed"?: int}
/// Rows are in lexicographic order of (params..., alpha, beta).
inline int cmd_sweep(const Json& cfg, std::ostream& out, std::uint64_t budget) {
  DilemmaKind kind;
  try {
    kind = parse_kind(io::read_string(io::require(cfg, "kind", "config"), "config.kind"));
  } catch (const InputError& e) {
    io::fail("config.kind", e.what());
  }
  std::string mode = cfg.contains("mode") ? io::read_string(cfg["mode"], "config.mode") : "cooperation";
  if (mode != "cooperation" && mode != "te" && mode != "te_typed" && mode != "qre") {
    io::fail("config.mode", "expected cooperation, te, te_typed or qre");
  }
  const Json& params = io::require(cfg, "params", "config");
  if (!params.is_object()) io::fail("config.params", "expected an object");
  auto axes = detail::param_axes(kind, params, budget);
  int grid = cfg.contains("grid") ? io::read_int(cfg["grid"], "config.grid") : 100;
  bool skip_invalid = cfg.contains("skip_invalid") && cfg["skip_invalid"].is_boolean() && cfg["skip_invalid"].get<bool>();

  std::vector<Rational> alphas{0};
  std::vector<Rational> betas{0};
  std::vector<Rational> lambdas;
  if (mode == "qre") {
    lambdas = read_range(io::require(cfg, "lambda", "config"), "config.lambda", budget);
  } else {
    if (mode != "te") alphas = read_range(io::require(cfg, "alpha", "config"), "config.alpha", budget);
    betas = read_range(io::require(cfg, "beta", "config"), "config.beta", budget);
  }
  for (const auto* axis : {&alphas, &betas}) {
    for (const auto& v : *axis) {
      if (v < 0 || v > 1) io::fail("config", "alpha and beta values must lie in [0,1]");
    }
  }
  double verify_fraction = 0.0;
  if (cfg.contains("verify_fraction")) verify_fraction = to_double(io::read_rational(cfg["verify_fraction"], "config.verify_fraction"));
  unsigned long seed = cfg.contains("seed") ? static_cast<unsigned long>(io::read_int(cfg["seed"], "config.seed")) : 1UL;

  std::vector<int> sizes;
  for (const auto& a : axes) sizes.push_back(static_cast<int>(a.values.size()));
  std::uint64_t rows = saturating_product(sizes);
  std::uint64_t per = mode == "qre" ? lambdas.size() : alphas.size() * betas.size();
  if (per != 0 && rows > budget / per) throw BudgetExceeded("sweep", rows * per, budget);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int mismatches = 0;

  out << "kind,param_snapshot,alpha,beta,rational,binding,threshold\n";
  std::string path_hint;
  for_each_profile(sizes, [&](const Profile& pick) {
    DilemmaParams p = detail::params_at(kind, axes, pick, grid);
    if (!detail::params_valid(p)) {
      if (skip_invalid) return;
      throw InputError("config.params: invalid combination " + p.snapshot());
    }
    const std::string head = kind_name(kind) + "," + p.snapshot() + ",";
    if (mode == "qre") {
      SocialDilemma d = make_dilemma(p);
      for (const auto& lambda : lambdas) {
        auto result = logit_qre(d.game, to_double(lambda));
        double top = 0.0;
        for (int i = 0; i < d.num_players(); ++i) {
          top = std::max(top, result.sigma.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(d.cooperate(i))]);
        }
        out << head << format_real(lambda) << ",," << detail::csv_bool(top < 0.5) << "," << format_real(top)
            << ",0.5\n";
      }
      return;
    }
    std::optional<SocialDilemma> dilemma;
    for (const auto& alpha : alphas) {
      for (const auto& beta : betas) {
        out << head << (mode == "te" ? std::string() : format_real(alpha)) << "," << format_real(beta) << ",";
        if (mode == "cooperation") {
          auto v = cooperation_condition<Rational>(p, alpha, beta);
          out << detail::csv_bool(v.rational) << "," << (v.binding ? format_real(*v.binding) : std::string("inf"))
              << "," << format_real(v.threshold) << "\n";
          if (verify_fraction > 0.0 && coin(rng) < verify_fraction) {
            if (!dilemma) dilemma = make_dilemma(p);
            auto engine = is_cooperation_rational_exact(*dilemma, 0, TranslucentType<Rational>{alpha, beta}, budget);
            if (engine.verdict != v.rational) {
              ++mismatches;
              std::cerr << "verify mismatch: " << p.snapshot() << " alpha=" << format_real(alpha)
                        << " beta=" << format_real(beta) << "\n";
            }
          }
        } else if (mode == "te") {
          std::vector<Rational> all(static_cast<std::size_t>(p.num_players()), beta);
          out << detail::csv_bool(te_condition(p, all)) << ",,\n";
        } else {
          std::vector<Rational> b(static_cast<std::size_t>(p.num_players()), beta);
          std::vector<Rational> a(static_cast<std::size_t>(p.num_players()), alpha);
          auto v = te_condition_typed(p, a, b, budget);
          if (v.scaled) {
            out << "scaled=" << detail::csv_bool(*v.scaled) << ";mean=" << detail::csv_bool(v.printed) << ",,\n";
          } else {
            out << detail::csv_bool(*v.verdict) << ",,\n";
          }
        }
      }
    }
  });
  return mismatches == 0 ? kExitOk : kExitVerdict;
}

// equilibrium ---------------------------------------------------------------

inline Json witness_json(const std::optional<CoherenceWitness>& w) {
  if (!w) return nullptr;
  return {{"player", w->player}, {"strategy", w->strategy}, {"deviation", w->deviation}};
}

/// Config: {"game", "betas": [...], "alphas"?: [...]} for a dilemma, or
/// {"game", "sigma": [[...], ...]} for any game including payoff tables.
inline int cmd_equilibrium(const Json& cfg, std::ostream& out, std::uint64_t budget) {
  const Json& game_doc = io::require(cfg, "game", "config");
  Json report = Json::object();
  if (cfg.contains("sigma")) {
    Game game = game_from_json(game_doc, "config.game");
    auto sigma = mixed_profile_from_json(cfg["sigma"], "config.sigma");
    try {
      check_mixed_profile(game, sigma);
    } catch (const InputError& e) {
      io::fail("config.sigma", e.what());
    }
    auto te = is_translucent_equilibrium(game, sigma, true, budget);
    report["coherent"] = te.equilibrium;
    report["witness"] = witness_json(te.witness);
    report["translucent_equilibrium"] = te.equilibrium;
    report["structure_agrees"] = te.structure_agrees;
    write_json(out, report);
    return te.structure_agrees ? kExitOk : kExitVerdict;
  }

  DilemmaParams p = dilemma_params_from_json(game_doc, "config.game");
  SocialDilemma d = make_dilemma(p);
  std::vector<Rational> betas = io::read_rational_array(io::require(cfg, "betas", "config"), "config.betas");
  if (static_cast<int>(betas.size()) != d.num_players()) io::fail("config.betas", "need one value per player");
  for (const auto& b : betas) {
    if (b < 0 || b > 1) io::fail("config.betas", "values must lie in [0,1]");
  }
  bool closed = te_condition(p, betas);
  auto coherence = is_coherent(d.game, two_point_profile(d, betas), budget);
  bool agree = closed == coherence.coherent;
  report["game"] = dilemma_params_to_json(p);
  report["te_condition"] = closed;
  report["coherent"] = coherence.coherent;
  report["witness"] = witness_json(coherence.witness);

  if (cfg.contains("alphas")) {
    std::vector<Rational> alphas = io::read_rational_array(cfg["alphas"], "config.alphas");
    if (alphas.size() != betas.size()) io::fail("config.alphas", "need one value per player");
    for (const auto& a : alphas) {
      if (a < 0 || a > 1) io::fail("config.alphas", "values must lie in [0,1]");
    }
    auto typed = te_condition_typed(p, alphas, betas, budget);
    Json t = Json::object();
    if (typed.verdict) {
      t["verdict"] = *typed.verdict;
      t["printed"] = typed.printed;
    } else {
      t["scaled_reading"] = *typed.scaled;
      t["mean_reading"] = typed.printed;
    }
    try {
      bool structure = typed_structure_equilibrium(d, alphas, betas, budget);
      t["structure"] = structure;
      if (typed.verdict) {
        t["agree"] = *typed.verdict == structure;
        agree = agree && *typed.verdict == structure;
      } else {
        t["matching_reading"] = *typed.scaled == structure && typed.printed != structure ? "scaled"
                                : typed.printed == structure && *typed.scaled != structure ? "mean"
                                : *typed.scaled == structure ? "both"
                                                             : "neither";
      }
    } catch (const BudgetExceeded&) {
      t["structure"] = nullptr;
    }
    report["typed"] = std::move(t);
  }
  report["agree"] = agree;
  write_json(out, report);
  return agree ? kExitOk : kExitVerdict;
}

// population ----------------------------------------------------------------

/// Config: {"game", "population": {"types": [{"alpha","beta","weight"}, ...]}}
/// or {"game", "population": {"grid": {"alpha": range, "beta": range}}} (uniform).
inline int cmd_population(const Json& cfg, std::ostream& out, std::uint64_t budget) {
  DilemmaParams p = dilemma_params_from_json(io::require(cfg, "game", "config"), "config.game");
  check_closed_form_params(p);
  const Json& pop = io::require(cfg, "population", "config");
  struct Entry {
    Rational alpha, beta, weight;
  };
  std::vector<Entry> types;
  if (pop.contains("types")) {
    const Json& list = pop["types"];
    if (!list.is_array() || list.empty()) io::fail("config.population.types", "expected a nonempty array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string tp = "config.population.types[" + std::to_string(k) + "]";
      Entry e{io::read_rational(io::require(list[k], "alpha", tp), tp + ".alpha"),
              io::read_rational(io::require(list[k], "beta", tp), tp + ".beta"),
              io::read_rational(io::require(list[k], "weight", tp), tp + ".weight")};
      if (e.weight < 0) io::fail(tp + ".weight", "must be >= 0");
      types.push_back(e);
    }
  } else {
    const Json& g = io::require(pop, "grid", "config.population");
    auto alphas = read_range(io::require(g, "alpha", "config.population.grid"), "config.population.grid.alpha", budget);
    auto betas = read_range(io::require(g, "beta", "config.population.grid"), "config.population.grid.beta", budget);
    if (alphas.size() * betas.size() > budget) throw BudgetExceeded("population grid", alphas.size() * betas.size(), budget);
    Rational w(1, static_cast<unsigned long>(alphas.size() * betas.size()));
    for (const auto& a : alphas) {
      for (const auto& b : betas) types.push_back({a, b, w});
    }
  }
  Rational total = 0;
  for (const auto& e : types) total += e.weight;
  if (abs(Rational(total - 1)) > Rational(1, 1000000000)) io::fail("config.population", "weights must sum to 1");
  Rational rate = 0;
  for (const auto& e : types) {
    if (e.alpha < 0 || e.alpha > 1 || e.beta < 0 || e.beta > 1) io::fail("config.population", "alpha and beta must lie in [0,1]");
    if (cooperation_condition<Rational>(p, e.alpha, e.beta).rational) rate += e.weight;
  }
  Json report = Json::object();
  report["game"] = dilemma_params_to_json(p);
  report["types"] = types.size();
  report["cooperation_rate"] = to_double(rate);
  report["cooperation_rate_exact"] = rate.get_str();
  write_json(out, report);
  return kExitOk;
}

// validate-structure --------------------------------------------------------

inline int cmd_validate_structure(const Json& doc, std::ostream& out) {
  auto m = structure_from_json(doc);
  auto violations = validate_structure(m);
  if (doc.contains("game")) {
    Game game = game_from_json(doc["game"], "structure.game");
    std::vector<int> counts(game.strategy_counts().begin(), game.strategy_counts().end());
    if (counts != m.strategy_counts) violations.push_back({"shape", -1, -1, "strategy counts differ from the game"});
  }
  for (const auto& v : violations) out << v.to_string() << "\n";
  if (violations.empty()) {
    out << "ok: " << m.num_states() << " states, no violations\n";
    return kExitOk;
  }
  return kExitVerdict;
}

// qre -----------------------------------------------------------------------

/// Config: {"game", "lambda": range, "damping"?, "tolerance"?, "max_iterations"?}
inline int cmd_qre(const Json& cfg, std::ostream& out, std::uint64_t budget) {
  Game game = game_from_json(io::require(cfg, "game", "config"), "config.game");
  auto lambdas = read_range(io::require(cfg, "lambda", "config"), "config.lambda", budget);
  QreOptions options;
  options.budget = budget;
  if (cfg.contains("damping")) options.damping = to_double(io::read_rational(cfg["damping"], "config.damping"));
  if (cfg.contains("tolerance")) options.tolerance = to_double(io::read_rational(cfg["tolerance"], "config.tolerance"));
  if (cfg.contains("max_iterations")) options.max_iterations = io::read_int(cfg["max_iterations"], "config.max_iterations");
  Json results = Json::array();
  bool all_converged = true;
  for (const auto& lambda : lambdas) {
    Json row = {{"lambda", to_double(lambda)}};
    try {
      auto r = logit_qre(game, to_double(lambda), options);
      row["converged"] = true;
      row["sigma"] = r.sigma.probs;
      row["residual"] = r.residual;
      row["iterations"] = r.iterations;
    } catch (const QreNotConverged& e) {
      all_converged = false;
      row["converged"] = false;
      row["residual"] = e.residual();
    }
    results.push_back(std::move(row));
  }
  write_json(out, Json{{"results", std::move(results)}});
  return all_converged ? kExitOk : kExitVerdict;
}

}  // namespace translucent::cli
