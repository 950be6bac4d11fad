// wfg: water-filling power allocation and interference-game solvers.
//
// Subcommands: single | nash | iwfa | sweep | continuum | check.
// Exit codes: 0 success, 1 internal solver error, 2 invalid input,
// 3 unsupported regime (g = 1 is served by `continuum`), 4 check failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wfg/centralized.hpp"
#include "wfg/game_ne.hpp"
#include "wfg/iwfa.hpp"
#include "wfg/model.hpp"
#include "wfg/single_wf.hpp"
#include "wfg/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSolverError = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUnsupportedRegime = 3;
constexpr int kExitCheckFailed = 4;

struct InstanceConfig {
  std::vector<double> weights;
  std::vector<double> noise;
  double g = 0.0;
  std::vector<double> budgets;
  std::vector<std::string> labels;
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

InstanceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitInvalidInput, "cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CliError(kExitInvalidInput, "config is not valid JSON: " + std::string(e.what()));
  }
  InstanceConfig cfg;
  try {
    cfg.weights = doc.at("weights").get<std::vector<double>>();
    cfg.noise = doc.at("noise").get<std::vector<double>>();
    cfg.g = doc.at("g").get<double>();
    cfg.budgets = doc.at("budgets").get<std::vector<double>>();
    if (doc.contains("labels")) {
      cfg.labels = doc.at("labels").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw CliError(kExitInvalidInput, "config schema error: " + std::string(e.what()));
  }
  if (!cfg.labels.empty() && cfg.labels.size() != cfg.budgets.size()) {
    throw CliError(kExitInvalidInput, "labels must match the number of budgets");
  }
  return cfg;
}

wfg::GameSpec make_spec(const InstanceConfig& cfg) {
  try {
    return wfg::validate_and_canonicalize(cfg.weights, cfg.noise, cfg.g, cfg.budgets);
  } catch (const wfg::Error& e) {
    throw CliError(kExitInvalidInput, std::string("invalid instance: ") + e.what());
  }
}

std::string format_value(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitInvalidInput, "cannot open output file: " + path);
  out << text;
}

void emit_json(const json& doc, const std::string& out_path) {
  write_text(out_path, doc.dump(2) + "\n");
}

json strategies_to_json(const wfg::StrategyProfile& profile) {
  json arr = json::array();
  for (const wfg::Strategy& s : profile.strategies) arr.push_back(s.powers);
  return arr;
}

double rate_scale(bool bits) { return bits ? 1.0 / std::log(2.0) : 1.0; }

std::vector<double> scaled(std::vector<double> values, double scale) {
  for (double& v : values) v *= scale;
  return values;
}

std::vector<double> parse_g_grid(const std::string& text) {
  std::vector<double> grid;
  const auto parse_one = [](const std::string& tok) {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  };
  try {
    if (text.find(':') != std::string::npos) {
      // start:stop:step, inclusive of stop up to rounding
      std::stringstream ss(text);
      std::string a, b, c;
      std::getline(ss, a, ':');
      std::getline(ss, b, ':');
      std::getline(ss, c);
      const double start = parse_one(a), stop = parse_one(b), step = parse_one(c);
      if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
      for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-12) break;
        grid.push_back(v);
      }
    } else {
      std::stringstream ss(text);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) grid.push_back(parse_one(tok));
      }
    }
  } catch (const std::exception&) {
    throw CliError(kExitInvalidInput, "cannot parse g grid: " + text);
  }
  if (grid.empty()) throw CliError(kExitInvalidInput, "g grid is empty");
  for (double g : grid) {
    if (!(g >= 0.0 && g < 1.0)) {
      throw CliError(kExitInvalidInput, "g grid values must lie in [0, 1)");
    }
  }
  return grid;
}

// ---- subcommand bodies ----

int run_single(const InstanceConfig& cfg, std::size_t budget_index,
               const std::string& out_path, bool bits) {
  wfg::GameSpec spec = make_spec(cfg);
  if (budget_index >= cfg.budgets.size()) {
    throw CliError(kExitInvalidInput, "budget index out of range");
  }
  const double budget = cfg.budgets[budget_index];
  const wfg::WaterfillSolution sol = wfg::waterfill_closed_form(spec.profile, budget);

  wfg::StrategyProfile lone{{sol.strategy}};
  const double rate = wfg::payoff(spec.profile, 0.0, 0, lone) * rate_scale(bits);

  json doc;
  doc["budget"] = budget;
  doc["strategy"] = wfg::to_original_channel_order(spec.profile, sol.strategy.powers);
  doc["water_level"] = sol.water_level;
  doc["multiplier"] = sol.multiplier;
  doc["active_count"] = sol.active_count;
  doc["phi"] = sol.phi;  // canonical (noise-sorted) channel order
  doc["payoff"] = rate;
  doc["rate_units"] = bits ? "bits" : "nats";
  emit_json(doc, out_path);
  return 0;
}

json nash_json(const wfg::GameSpec& spec, const wfg::EquilibriumSolution& ne,
               const wfg::KktReport& kkt, bool bits) {
  json doc;
  doc["g"] = spec.g;
  doc["strategies"] = strategies_to_json(ne.strategies);
  doc["payoffs"] = scaled(ne.payoffs, rate_scale(bits));
  doc["thresholds"] = ne.thresholds.t;
  doc["multipliers"] = ne.multipliers.omega;
  doc["breakpoints"] = ne.breakpoints;
  doc["user_order"] = ne.user_to_original;
  doc["channel_order"] = ne.channel_to_original;
  double total = 0.0;
  for (double v : ne.payoffs) total += v;
  doc["sum_rate"] = total * rate_scale(bits);
  doc["rate_units"] = bits ? "bits" : "nats";
  doc["kkt"] = {{"max_residual", kkt.max_residual}, {"satisfied", kkt.satisfied}};
  return doc;
}

std::string strategy_csv(const wfg::StrategyProfile& profile, int digits) {
  std::string csv = "user,channel,power\n";
  for (std::size_t j = 0; j < profile.users(); ++j) {
    for (std::size_t i = 0; i < profile.strategies[j].powers.size(); ++i) {
      csv += std::to_string(j + 1) + "," + std::to_string(i + 1) + "," +
             format_value(profile.strategies[j].powers[i], digits) + "\n";
    }
  }
  return csv;
}

int run_nash(const InstanceConfig& cfg, const std::string& out_path,
             const std::string& csv_path, int digits, bool bits) {
  if (cfg.g == 1.0) {
    std::cerr << "g = 1 admits a continuum of equilibria; use the `continuum` command\n";
    return kExitUnsupportedRegime;
  }
  wfg::GameSpec spec = make_spec(cfg);
  const wfg::EquilibriumSolution ne = wfg::solve_ne(spec);
  const wfg::KktReport kkt =
      wfg::kkt_check(spec, wfg::to_canonical_orders(spec, ne.strategies), 1e-8);

  emit_json(nash_json(spec, ne, kkt, bits), out_path);
  if (!csv_path.empty()) write_text(csv_path, strategy_csv(ne.strategies, digits));
  return 0;
}

int run_iwfa(const InstanceConfig& cfg, double tol, std::size_t max_rounds,
             const std::string& trace_csv, const std::string& out_path, int digits,
             bool bits) {
  if (cfg.g == 1.0) {
    std::cerr << "g = 1 admits a continuum of equilibria; use the `continuum` command\n";
    return kExitUnsupportedRegime;
  }
  wfg::GameSpec spec = make_spec(cfg);
  const wfg::EquilibriumSolution reference = wfg::solve_ne(spec);
  const wfg::StrategyProfile reference_canonical =
      wfg::to_canonical_orders(spec, reference.strategies);

  wfg::IwfaOptions options;
  options.tol = tol;
  options.max_rounds = max_rounds;
  options.record_profiles = !trace_csv.empty();
  auto [sol, trace] = wfg::iwfa_solve(spec, options);

  const auto error_vs_reference = [&](const wfg::StrategyProfile& p) {
    double total = 0.0;
    for (std::size_t j = 0; j < p.users(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < p.strategies[j].powers.size(); ++i) {
        const double d =
            p.strategies[j].powers[i] - reference_canonical.strategies[j].powers[i];
        acc += d * d;
      }
      total += std::sqrt(acc);
    }
    return total;
  };

  if (!trace_csv.empty()) {
    std::string csv = "round,error,delta\n";
    for (std::size_t r = 0; r < trace.profile_history.size(); ++r) {
      csv += std::to_string(r + 1) + "," +
             format_value(error_vs_reference(trace.profile_history[r]), digits) + "," +
             format_value(trace.strategy_deltas[r], digits) + "\n";
    }
    write_text(trace_csv, csv);
  }

  json doc;
  doc["converged"] = trace.converged;
  doc["rounds"] = trace.iterations;
  doc["tol"] = tol;
  doc["strategies"] = strategies_to_json(sol.strategies);
  doc["payoffs"] = scaled(sol.payoffs, rate_scale(bits));
  doc["final_error"] = error_vs_reference(trace.final_profile);
  doc["rate_units"] = bits ? "bits" : "nats";
  emit_json(doc, out_path);
  if (!trace.converged) {
    std::cerr << "iwfa did not reach tol within " << max_rounds << " rounds\n";
    return kExitSolverError;
  }
  return 0;
}

int run_sweep(const InstanceConfig& cfg, const std::string& grid_text, std::size_t starts,
              std::uint64_t seed, const std::string& csv_path, const std::string& out_path,
              int digits, bool bits) {
  const std::vector<double> grid = parse_g_grid(grid_text);
  InstanceConfig base = cfg;
  base.g = grid.front();  // template g is irrelevant; must only pass validation
  wfg::GameSpec spec = make_spec(base);
  const std::vector<wfg::PoaPoint> points = wfg::poa_sweep(spec, grid, starts, seed);

  const double scale = rate_scale(bits);
  std::string csv = "g,ne_sum,opt_sum,poa\n";
  for (const wfg::PoaPoint& p : points) {
    csv += format_value(p.g, digits) + "," + format_value(p.ne_sum_rate * scale, digits) +
           "," + format_value(p.opt_sum_rate * scale, digits) + "," +
           format_value(p.poa, digits) + "\n";
  }
  if (!csv_path.empty()) {
    write_text(csv_path, csv);
  } else if (out_path.empty()) {
    std::cout << csv;
  }

  if (!out_path.empty()) {
    json doc = json::array();
    for (const wfg::PoaPoint& p : points) {
      doc.push_back({{"g", p.g},
                     {"ne_sum", p.ne_sum_rate * scale},
                     {"opt_sum", p.opt_sum_rate * scale},
                     {"poa", p.poa},
                     {"per_user_ne", scaled(p.per_user_ne, scale)},
                     {"per_user_opt", scaled(p.per_user_opt, scale)}});
    }
    emit_json(doc, out_path);
  }
  return 0;
}

int run_continuum(const InstanceConfig& cfg, std::size_t count, std::uint64_t seed,
                  const std::string& out_path, bool bits) {
  if (cfg.g != 1.0) {
    throw CliError(kExitInvalidInput, "continuum requires g = 1 in the config");
  }
  wfg::GameSpec spec = make_spec(cfg);
  const std::vector<wfg::StrategyProfile> family = wfg::continuum_g1(spec, count, seed);

  json doc;
  doc["count"] = family.size();
  json profiles = json::array();
  for (const wfg::StrategyProfile& canonical : family) {
    const wfg::KktReport kkt = wfg::kkt_check(spec, canonical, 1e-8);
    json entry;
    entry["strategies"] = strategies_to_json(wfg::to_original_orders(spec, canonical));
    std::vector<double> payoffs(spec.users());
    for (std::size_t j = 0; j < spec.users(); ++j) {
      payoffs[spec.user_to_original[j]] =
          wfg::payoff(spec.profile, spec.g, j, canonical) * rate_scale(bits);
    }
    entry["payoffs"] = payoffs;
    entry["implied_multipliers"] = kkt.implied_multipliers;
    entry["kkt_max_residual"] = kkt.max_residual;
    profiles.push_back(std::move(entry));
  }
  doc["profiles"] = std::move(profiles);
  doc["rate_units"] = bits ? "bits" : "nats";
  emit_json(doc, out_path);
  return 0;
}

int run_check(const InstanceConfig& cfg, const std::string& strategy_path, double threshold,
              const std::string& out_path) {
  wfg::GameSpec spec = make_spec(cfg);

  std::ifstream in(strategy_path);
  if (!in) throw CliError(kExitInvalidInput, "cannot open strategy file: " + strategy_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CliError(kExitInvalidInput, "strategy file is not valid JSON: " + std::string(e.what()));
  }
  wfg::StrategyProfile original;
  try {
    for (const auto& row : doc.at("strategies")) {
      original.strategies.push_back(wfg::Strategy{row.get<std::vector<double>>()});
    }
  } catch (const json::exception& e) {
    throw CliError(kExitInvalidInput, "strategy schema error: " + std::string(e.what()));
  }

  wfg::StrategyProfile canonical;
  wfg::KktReport report;
  std::vector<double> gaps;
  try {
    canonical = wfg::to_canonical_orders(spec, original);
    report = wfg::kkt_check(spec, canonical, threshold);
    gaps = wfg::best_response_gap(spec, canonical);
  } catch (const wfg::InfeasibleProfile& e) {
    throw CliError(kExitInvalidInput, std::string("infeasible profile: ") + e.what());
  } catch (const wfg::DimensionMismatch& e) {
    throw CliError(kExitInvalidInput, std::string("profile shape error: ") + e.what());
  }

  json out;
  out["satisfied"] = report.satisfied;
  out["threshold"] = threshold;
  out["max_residual"] = report.max_residual;
  out["implied_multipliers"] = report.implied_multipliers;
  out["residuals"] = report.residuals;  // canonical user/channel order
  out["best_response_gaps"] = gaps;
  emit_json(out, out_path);
  if (!report.satisfied) {
    std::cerr << "profile fails the first-order check: max residual " << report.max_residual
              << " > " << threshold << "\n";
    return kExitCheckFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"water-filling power allocation and interference-game solvers"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, grid_text = "0.05:0.95:0.05";
  std::string strategy_path;
  double tol = 1e-8, check_tol = 1e-8;
  std::size_t max_rounds = 100000, starts = 64, count = 3, budget_index = 0;
  std::uint64_t seed = 1;
  int digits = 17;
  bool bits = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "instance JSON file")->required();
    cmd->add_option("--out", out_path, "write JSON result here instead of stdout");
    cmd->add_option("--digits", digits, "significant digits for CSV output");
    cmd->add_flag("--bits", bits, "report rates in bits instead of nats");
  };

  CLI::App* single = app.add_subcommand("single", "single-user water-filling optimum");
  add_common(single);
  single->add_option("--budget-index", budget_index, "which config budget to use");

  CLI::App* nash = app.add_subcommand("nash", "closed-form Nash equilibrium");
  add_common(nash);
  nash->add_option("--csv", csv_path, "also write user,channel,power CSV");

  CLI::App* iwfa = app.add_subcommand("iwfa", "iterative water-filling with diagnostics");
  add_common(iwfa);
  iwfa->add_option("--tol", tol, "per-round max-norm convergence tolerance");
  iwfa->add_option("--max-rounds", max_rounds, "round cap");
  iwfa->add_option("--trace-csv", csv_path, "write round,error,delta CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "price-of-anarchy sweep over g");
  add_common(sweep);
  sweep->add_option("--g-grid", grid_text, "comma list or start:stop:step");
  sweep->add_option("--starts", starts, "random optimizer starts per grid point");
  sweep->add_option("--seed", seed, "random seed");
  sweep->add_option("--out-csv", csv_path, "write g,ne_sum,opt_sum,poa CSV");

  CLI::App* continuum = app.add_subcommand("continuum", "equilibrium family at g = 1");
  add_common(continuum);
  continuum->add_option("--count", count, "number of distinct equilibria to emit");
  continuum->add_option("--seed", seed, "random seed");

  CLI::App* check = app.add_subcommand("check", "verify a strategy profile");
  add_common(check);
  check->add_option("strategy-file", strategy_path, "JSON file with a strategies array")
      ->required();
  check->add_option("--tol", check_tol, "first-order residual threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    const InstanceConfig cfg = load_config(config_path);
    if (single->parsed()) return run_single(cfg, budget_index, out_path, bits);
    if (nash->parsed()) return run_nash(cfg, out_path, csv_path, digits, bits);
    if (iwfa->parsed())
      return run_iwfa(cfg, tol, max_rounds, csv_path, out_path, digits, bits);
    if (sweep->parsed())
      return run_sweep(cfg, grid_text, starts, seed, csv_path, out_path, digits, bits);
    if (continuum->parsed()) return run_continuum(cfg, count, seed, out_path, bits);
    if (check->parsed()) return run_check(cfg, strategy_path, check_tol, out_path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const wfg::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const wfg::NonPositiveValue& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const wfg::CrosstalkOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const wfg::InvalidBudget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const wfg::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return 0;
}
