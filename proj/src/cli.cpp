#include "walkwait/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "walkwait/config.hpp"
#include "walkwait/intermediate.hpp"
#include "walkwait/mcsim.hpp"
#include "walkwait/optimizer.hpp"

namespace walkwait::cli {
namespace {

using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void row(std::ostream& out, std::string_view label, const std::string& value) {
  out << label;
  for (auto i = label.size(); i < 28; ++i) out << ' ';
  out << value << '\n';
}

void row(std::ostream& out, std::string_view label, double value) {
  row(out, label, format_number(value));
}

// wait_forever | walk_now | wait_then_walk:<min> | walk_and_wait:<km>,<min>,<p>
Strategy parse_strategy(const std::string& s, const Scenario& scenario) {
  auto numbers = [&](std::string_view body, std::size_t count) {
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const auto piece = body.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start);
      double x = 0.0;
      const auto* first = piece.data();
      const auto* last = piece.data() + piece.size();
      const auto [ptr, ec] = std::from_chars(first, last, x);
      if (piece.empty() || ec != std::errc{} || ptr != last)
        throw InputError("unknown strategy '" + s + "'");
      v.push_back(x);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (v.size() != count) throw InputError("unknown strategy '" + s + "'");
    return v;
  };

  if (s == "wait_forever") return WaitForever{};
  if (s == "walk_now") return WalkNow{};
  const std::string_view sv(s);
  if (sv.starts_with("wait_then_walk:")) {
    const double t = numbers(sv.substr(15), 1)[0];
    if (!(t >= 0.0)) throw InputError("strategy wait_then_walk: wait must be >= 0");
    return WaitThenWalk{t};
  }
  if (sv.starts_with("walk_and_wait:")) {
    const auto v = numbers(sv.substr(14), 3);
    WalkAndWaitPlan plan{v[0], v[1], v[2]};
    try {
      validate(scenario, plan);
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("strategy walk_and_wait: ") + e.what());
    }
    return WalkAndWait{plan};
  }
  throw InputError("unknown strategy '" + s + "'");
}

std::string strategy_name(const Strategy& s) {
  if (std::holds_alternative<WaitForever>(s)) return "wait_forever";
  if (std::holds_alternative<WalkNow>(s)) return "walk_now";
  if (const auto* w = std::get_if<WaitThenWalk>(&s))
    return "wait_then_walk:" + format_number(w->t_wait);
  const auto& p = std::get<WalkAndWait>(s).plan;
  return "walk_and_wait:" + format_number(p.d1) + "," + format_number(p.t_wait) +
         "," + format_number(p.p_catch);
}

int cmd_analyze(const ScenarioConfig& cfg, bool as_json, std::ostream& out) {
  const auto& sc = cfg.scenario;
  const auto& m = cfg.model;
  json j{{"model", model_to_json(m)},
         {"t_delta_min", sc.t_delta()},
         {"walk_time_min", sc.walk_time()},
         {"bus_time_min", sc.bus_time()},
         {"mean_arrival_min", mean_arrival(m)},
         {"expected_wait_forever_min", expected_tt_wait_forever(sc, m)},
         {"expected_walk_now_min", expected_tt(sc, m, 0.0)},
         {"verdict", std::string(to_string(compare_wait_walk(sc, m)))}};
  if (const auto* u = m.get_if<Uniform>())
    j["uniform_case"] = std::string(to_string(classify_uniform(sc, u->headway)));
  if (cfg.p_catch) {
    j["p_catch"] = *cfg.p_catch;
    j["expected_walk_vigilant_min"] = expected_tt_walk_vigilant(sc, m, *cfg.p_catch);
    j["walk_advantage_min"] = walk_vs_wait_advantage(sc, m, *cfg.p_catch);
  }

  if (as_json) {
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  row(out, "model", m.kind());
  row(out, "T_delta (min)", sc.t_delta());
  row(out, "walk time (min)", sc.walk_time());
  row(out, "bus time (min)", sc.bus_time());
  row(out, "mean arrival (min)", mean_arrival(m));
  row(out, "E wait forever (min)", j["expected_wait_forever_min"].get<double>());
  row(out, "E walk now (min)", j["expected_walk_now_min"].get<double>());
  if (j.contains("uniform_case")) row(out, "uniform case", j["uniform_case"].get<std::string>());
  if (cfg.p_catch) {
    row(out, "p_catch", *cfg.p_catch);
    row(out, "E walk vigilant (min)", j["expected_walk_vigilant_min"].get<double>());
    row(out, "walk advantage (min)", j["walk_advantage_min"].get<double>());
  }
  row(out, "verdict", j["verdict"].get<std::string>());
  return kExitOk;
}

int cmd_optimize(const ScenarioConfig& cfg, std::optional<double> horizon_opt,
                 bool as_json, std::ostream& out) {
  const auto& sc = cfg.scenario;
  const auto& m = cfg.model;
  const double horizon = horizon_opt.value_or(default_horizon(m));
  if (!(horizon > 0.0)) throw InputError("--horizon must be > 0");

  const auto points = find_stationary_points(sc, m, horizon);
  const auto policy = optimal_policy(sc, m, horizon);

  json pts = json::array();
  for (const auto& p : points)
    pts.push_back({{"t_wait_min", p.t_wait},
                   {"kind", std::string(to_string(p.kind))},
                   {"expected_tt_min", p.expected_tt}});
  json pol{{"strategy", std::string(to_string(policy.strategy))},
           {"expected_tt_min", policy.expected_tt},
           {"tie_broken", policy.tie_broken}};
  if (policy.strategy == StrategyKind::wait_then_walk) pol["t_wait_min"] = policy.t_wait;

  if (as_json) {
    json j{{"model", model_to_json(m)},
           {"t_delta_min", sc.t_delta()},
           {"horizon_min", horizon},
           {"stationary_points", pts},
           {"policy", pol}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  row(out, "T_delta (min)", sc.t_delta());
  row(out, "horizon (min)", horizon);
  if (points.empty()) out << "no stationary points\n";
  for (const auto& p : points)
    out << "stationary " << to_string(p.kind) << " at " << format_number(p.t_wait)
        << " min, E = " << format_number(p.expected_tt) << " min\n";
  std::string choice(to_string(policy.strategy));
  if (policy.strategy == StrategyKind::wait_then_walk)
    choice += " (" + format_number(policy.t_wait) + " min)";
  row(out, "policy", choice);
  row(out, "expected travel (min)", policy.expected_tt);
  if (policy.tie_broken) out << "note: tie between candidates resolved by convention\n";
  return kExitOk;
}

struct SweepArgs {
  std::string var;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::string out;
};

int cmd_sweep(const ScenarioConfig& cfg, const SweepArgs& a, bool as_json,
              std::ostream& out) {
  if (a.steps < 2) throw InputError("--steps must be >= 2");
  if (!(a.to > a.from)) throw InputError("--to must exceed --from");
  const auto& sc = cfg.scenario;
  const auto& m = cfg.model;

  std::string header;
  std::function<std::pair<double, double>(double)> eval;
  if (a.var == "tw") {
    if (a.from < 0.0) throw InputError("--from must be >= 0 for tw");
    header = "x,expected_tt,derivative";
    eval = [&](double x) {
      return std::pair{expected_tt(sc, m, x), expected_tt_gradient(sc, m, x).first};
    };
  } else if (a.var == "d1") {
    if (a.from < 0.0 || a.to > sc.distance())
      throw InputError("--from/--to must lie in [0, distance_km] for d1");
    header = "x,expected_tt,derivative";
    const double tw = cfg.t_wait_min.value_or(0.0);
    const double pc = cfg.p_catch.value_or(0.0);
    eval = [&, tw, pc](double x) {
      const WalkAndWaitPlan plan{std::min(x, sc.distance()), tw, pc};
      return std::pair{expected_tt_plan(sc, m, plan), plan_gradient_d1(sc, m, plan)};
    };
  } else if (a.var == "pc") {
    if (a.from < 0.0 || a.to > 1.0) throw InputError("--from/--to must lie in [0, 1] for pc");
    header = "x,expected_tt,advantage";
    eval = [&](double x) {
      const double pc = std::min(x, 1.0);
      return std::pair{expected_tt_walk_vigilant(sc, m, pc),
                       walk_vs_wait_advantage(sc, m, pc)};
    };
  } else {
    throw InputError("--var must be one of tw, d1, pc");
  }

  std::ostringstream csv;
  csv << header << '\n';
  for (int i = 0; i < a.steps; ++i) {
    const double x = i + 1 == a.steps
                         ? a.to
                         : a.from + (a.to - a.from) * static_cast<double>(i) / (a.steps - 1);
    const auto [y, dy] = eval(x);
    csv << format_number(x) << ',' << format_number(y) << ',' << format_number(dy) << '\n';
  }

  std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + a.out + "' for writing");
  file << csv.str();
  file.close();
  if (!file) throw IoError("failed writing '" + a.out + "'");

  if (as_json) {
    out << json{{"var", a.var}, {"rows", a.steps}, {"columns", header}, {"out", a.out}}.dump(2)
        << '\n';
  } else {
    out << "wrote " << a.steps << " rows to " << a.out << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& strategy_text,
                 std::int64_t n, std::uint64_t seed, unsigned threads, bool as_json,
                 std::ostream& out) {
  if (n < 2) throw InputError("--n must be >= 2");
  const auto strategy = parse_strategy(strategy_text, cfg.scenario);
  const auto est = estimate(cfg.scenario, cfg.model, strategy,
                            static_cast<std::uint64_t>(n), seed, threads);
  const double analytic = analytic_expected_tt(cfg.scenario, cfg.model, strategy);
  const double diff = est.mean - analytic;
  double z = 0.0;
  if (est.std_error > 0.0)
    z = diff / est.std_error;
  else if (std::abs(diff) > 1e-12)
    z = std::copysign(std::numeric_limits<double>::infinity(), diff);

  if (as_json) {
    json j{{"strategy", strategy_name(strategy)},
           {"n", est.n},
           {"seed", seed},
           {"mean_min", est.mean},
           {"std_error_min", est.std_error},
           {"analytic_min", analytic}};
    if (std::isfinite(z))
      j["z"] = z;
    else
      j["z"] = nullptr;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  row(out, "strategy", strategy_name(strategy));
  row(out, "n", std::to_string(est.n));
  row(out, "seed", std::to_string(seed));
  row(out, "mean (min)", est.mean);
  row(out, "std error (min)", est.std_error);
  row(out, "analytic (min)", analytic);
  row(out, "z", z);
  return kExitOk;
}

}  // namespace

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wait-or-walk expected travel time analysis", "walkwait"};
  app.require_subcommand(1);

  std::string config_path;
  bool as_json = false;
  std::optional<double> horizon;
  SweepArgs sweep;
  std::string strategy;
  std::int64_t n = 1000000;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Scenario configuration (JSON)")->required();
    sub->add_flag("--json", as_json, "Machine-readable JSON output");
  };

  auto* analyze = app.add_subcommand("analyze", "Wait vs walk summary");
  add_common(analyze);

  auto* optimize = app.add_subcommand("optimize", "Stationary waits and the best policy");
  add_common(optimize);
  optimize->add_option("--horizon", horizon, "Search horizon in minutes");

  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate a curve to CSV");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--var", sweep.var, "tw | d1 | pc")->required();
  sweep_cmd->add_option("--from", sweep.from)->required();
  sweep_cmd->add_option("--to", sweep.to)->required();
  sweep_cmd->add_option("--steps", sweep.steps)->required();
  sweep_cmd->add_option("--out", sweep.out, "CSV output path")->required();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of a strategy");
  add_common(simulate);
  simulate->add_option("--strategy", strategy,
                       "wait_forever | walk_now | wait_then_walk:<min> | "
                       "walk_and_wait:<d1_km>,<t_wait_min>,<p_catch>")
      ->required();
  simulate->add_option("--n", n, "Number of simulated journeys");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "walkwait: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    const auto cfg = load_config(config_path);
    if (analyze->parsed()) return cmd_analyze(cfg, as_json, out);
    if (optimize->parsed()) return cmd_optimize(cfg, horizon, as_json, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, sweep, as_json, out);
    return cmd_simulate(cfg, strategy, n, seed, threads, as_json, out);
  } catch (const ConfigError& e) {
    err << "walkwait: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << "walkwait: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "walkwait: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    err << "walkwait: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace walkwait::cli
