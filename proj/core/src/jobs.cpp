#include "nsbox/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nsbox/counterexample.hpp"
#include "nsbox/errors.hpp"
#include "nsbox/estimates.hpp"
#include "nsbox/snapshot.hpp"
#include "nsbox/version.hpp"

namespace nsbox::jobs {

namespace {

using json = nlohmann::json;

// Shortest round-trip decimal; deterministic within a build.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// JSON has no inf/nan literals: encode them as strings, NaN (used for
// not-applicable slots) as null.
json json_num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? json("inf") : json("-inf");
}

json json_vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(json_num(x));
  return a;
}

json config_json(const Config& cfg) {
  json j = json::object();
  for (const auto& [key, value] : cfg.entries()) j[key] = value;
  return j;
}

json report_base(const Config& cfg, const std::string& command) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_json(cfg);
  return j;
}

json grid_json(const Grid& grid) {
  return {{"dim", grid.dim()}, {"n", grid.n()}, {"length", grid.box_length()}};
}

json norm_report_json(const NormReport& rep) {
  return {{"norm_kind", rep.norm_kind},
          {"p", json_num(rep.p)},
          {"sigma", json_num(rep.sigma)},
          {"s", json_num(rep.s)},
          {"r", json_num(rep.r)},
          {"j_min", rep.j_min},
          {"j_max", rep.j_max},
          {"value", json_num(rep.value)},
          {"truncation_warning", rep.truncation_warning}};
}

json ratio_report_json(const RatioReport& rep) {
  return {{"inequality_id", rep.inequality_id},
          {"trials", rep.trials},
          {"seed", rep.seed},
          {"n", rep.n},
          {"p", json_num(rep.p)},
          {"q", json_num(rep.q)},
          {"r", json_num(rep.r)},
          {"r1", json_num(rep.r1)},
          {"sigma", json_num(rep.sigma)},
          {"s", json_num(rep.s)},
          {"delta", json_num(rep.delta)},
          {"max_ratio", json_num(rep.max_ratio)},
          {"median_ratio", json_num(rep.median_ratio)},
          {"truncation_warning", rep.truncation_warning}};
}

// Artifacts buffer in memory and flush only after the whole job succeeded, so
// failed runs leave no partial outputs.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // (relative path, bytes)

  void add(const std::string& rel, std::string bytes) {
    files.emplace_back(rel, std::move(bytes));
  }
  void add_json(const std::string& rel, const json& j) { add(rel, j.dump(2) + "\n"); }

  void flush(const std::string& out_dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& [rel, bytes] : files) {
      const fs::path path = fs::path(out_dir) / rel;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write '" + path.string() + "'");
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw Error("short write to '" + path.string() + "'");
    }
  }
};

std::string series_csv(const std::vector<std::pair<double, double>>& series,
                       const std::string& norm_kind) {
  std::string out = "t,norm_kind,value\n";
  for (const auto& [t, v] : series) out += fmt(t) + "," + norm_kind + "," + fmt(v) + "\n";
  return out;
}

double parse_box_length(const std::string& key, const std::string& raw) {
  std::string body = raw;
  double factor = 1.0;
  if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
    factor = kPi;
    body = body.substr(0, body.size() - 2);
    if (body.empty()) body = "1";
  }
  char* end = nullptr;
  const double v = std::strtod(body.c_str(), &end);
  if (body.empty() || end != body.c_str() + body.size() || !std::isfinite(v) || v <= 0.0)
    throw InvalidParameter(key + ": expected a positive length, got '" + raw + "'");
  return factor * v;
}

Grid grid_from(const Config& cfg, const std::string& fallback_length = "") {
  const int dim = static_cast<int>(cfg.get_int_or("grid.dim", 2));
  const int n = static_cast<int>(cfg.get_int("grid.n"));
  const std::string raw = fallback_length.empty()
                              ? cfg.get_string("grid.length")
                              : cfg.get_string_or("grid.length", fallback_length);
  const double length = parse_box_length("grid.length", raw);
  const double dealias = cfg.get_double_or("grid.dealias", 2.0 / 3.0);
  return Grid(dim, n, length, dealias);
}

EnsembleSpec ensemble_from(const Config& cfg, const std::string& prefix,
                           double default_amplitude = 1.0) {
  EnsembleSpec ens;
  ens.slope = cfg.get_double_or(prefix + ".slope", ens.slope);
  ens.k_min = cfg.get_double_or(prefix + ".k_min", ens.k_min);
  ens.k_max = cfg.get_double_or(prefix + ".k_max", ens.k_max);
  ens.amplitude = cfg.get_double_or(prefix + ".amplitude", default_amplitude);
  ens.divergence_free = cfg.get_bool_or(prefix + ".divergence_free", true);
  return ens;
}

PartitionKind partition_from(const Config& cfg) {
  const std::string kind = cfg.get_string_or("partition", "smooth");
  if (kind == "smooth") return PartitionKind::Smooth;
  if (kind == "sharp") return PartitionKind::Sharp;
  throw InvalidParameter("partition: expected smooth or sharp, got '" + kind + "'");
}

Scheme scheme_from(const Config& cfg) {
  const std::string name = cfg.get_string_or("solver.scheme", "etd2");
  if (name == "etd1") return Scheme::ETD1;
  if (name == "etd2") return Scheme::ETD2;
  throw InvalidParameter("solver.scheme: expected etd1 or etd2, got '" + name + "'");
}

const char* scheme_name(Scheme s) { return s == Scheme::ETD1 ? "etd1" : "etd2"; }

SolverConfig solver_from(const Config& cfg) {
  SolverConfig sc;
  sc.dt = cfg.get_double_or("solver.dt", sc.dt);
  sc.scheme = scheme_from(cfg);
  sc.picard_tol = cfg.get_double_or("solver.picard_tol", sc.picard_tol);
  sc.picard_max_iter =
      static_cast<int>(cfg.get_int_or("solver.picard_max_iter", sc.picard_max_iter));
  sc.picard_p = cfg.get_double_or("solver.picard_p", sc.picard_p);
  sc.picard_sigma = cfg.get_double_or("solver.picard_sigma", sc.picard_sigma);
  sc.store_stride =
      static_cast<int>(cfg.get_int_or("solver.store_stride", sc.store_stride));
  return sc;
}

std::vector<std::pair<double, double>> besov_series(const Trajectory& traj,
                                                    const NormSpec& spec,
                                                    const DyadicPartition& part,
                                                    bool* warn = nullptr) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    NormReport rep = besov_report(traj.samples[i], spec, part);
    if (warn) *warn = *warn || rep.truncation_warning;
    out.emplace_back(traj.time(i), rep.value);
  }
  return out;
}

// --- individual commands -------------------------------------------------

JobOutcome norms_job(Config& cfg, const std::string& out_dir) {
  const PartitionKind kind = partition_from(cfg);
  SpectralField u = [&]() -> SpectralField {
    if (cfg.has("field.snapshot")) {
      const std::string path = cfg.get_string("field.snapshot");
      return read_snapshot(path, cfg.get_double_or("grid.dealias", 2.0 / 3.0));
    }
    const Grid grid = grid_from(cfg);
    const int components =
        static_cast<int>(cfg.get_int_or("field.components", grid.dim()));
    const EnsembleSpec ens = ensemble_from(cfg, "field");
    return random_field(grid, components, ens, cfg.get_uint64_or("field.seed", 1));
  }();

  NormSpec spec;
  spec.p = cfg.get_double_or("norm.p", 2.0);
  spec.sigma = cfg.get_double_or("norm.sigma", 1.0);
  spec.s = cfg.get_double_or("norm.s", 0.0);
  spec.r = cfg.get_double_or("norm.r", kInf);
  cfg.require_all_consumed();

  const DyadicPartition part = make_partition(u.grid(), kind);
  const NormReport rep = besov_report(u, spec, part);
  const std::vector<double> blocks = part.block_l2_all(u);

  json j = report_base(cfg, "norms");
  j["grid"] = grid_json(u.grid());
  j["report"] = norm_report_json(rep);
  j["status"] = "ok";

  std::string csv = "j,block_l2\n";
  for (std::size_t i = 0; i < blocks.size(); ++i)
    csv += std::to_string(part.j_min() + static_cast<int>(i)) + "," + fmt(blocks[i]) + "\n";

  Artifacts art;
  art.add_json("norms.json", j);
  art.add("shells.csv", csv);
  art.flush(out_dir);
  return {kExitOk, "", {{"value", fmt(rep.value)}}};
}

JobOutcome solve_ivp_job(Config& cfg, const std::string& out_dir) {
  const Grid grid = grid_from(cfg);
  SolverConfig sc = solver_from(cfg);
  const double t0 = cfg.get_double_or("time.t0", 0.0);
  const double t1 = cfg.get_double("time.t1");

  SpectralField a = [&]() -> SpectralField {
    if (!cfg.has("a.seed")) return SpectralField(grid, grid.dim());
    const EnsembleSpec ens = ensemble_from(cfg, "a");
    return random_field(grid, grid.dim(), ens, cfg.get_uint64_or("a.seed", 1));
  }();

  ForceFn force;
  if (cfg.has("force.seed")) {
    const EnsembleSpec ens = ensemble_from(cfg, "force");
    SpectralField f0 = random_field(grid, grid.dim(), ens, cfg.get_uint64_or("force.seed", 1));
    force = [f0](double) { return f0; };
  }

  NormSpec series_spec;
  series_spec.p = cfg.get_double_or("series.p", 2.0);
  series_spec.sigma = cfg.get_double_or("series.sigma", 1.0);
  series_spec.s = cfg.get_double_or("series.s", 0.0);
  const bool want_snapshot = cfg.get_bool_or("output.snapshot", false);
  cfg.require_all_consumed();

  const Trajectory traj = solve_ivp(a, force, t0, t1, sc);
  const DyadicPartition part = make_partition(grid, PartitionKind::Smooth);
  bool warn = false;
  const auto series = besov_series(traj, series_spec, part, &warn);

  json j = report_base(cfg, "solve-ivp");
  j["grid"] = grid_json(grid);
  j["scheme"] = scheme_name(sc.scheme);
  j["dt"] = json_num(sc.dt);
  j["dt_stored"] = json_num(traj.dt);
  j["stored_samples"] = traj.size();
  j["start_norm"] = json_num(series.front().second);
  j["end_norm"] = json_num(series.back().second);
  j["series_file"] = "series.csv";
  j["truncation_warning"] = warn;
  j["status"] = "ok";

  Artifacts art;
  art.add_json("solve_ivp.json", j);
  art.add("series.csv", series_csv(series, "besov"));
  art.flush(out_dir);
  if (want_snapshot)
    write_snapshot(traj.samples.back(),
                   (std::filesystem::path(out_dir) / "final.bnsf").string());
  return {kExitOk,
          "",
          {{"start_norm", fmt(series.front().second)},
           {"end_norm", fmt(series.back().second)}}};
}

PeriodicForce periodic_force_from(Config& cfg, const Grid& grid, double period,
                                  int samples, double default_amplitude) {
  if (!cfg.has("force.seed")) {
    SpectralField zero(grid, grid.dim());
    return constant_force(zero, period);
  }
  const EnsembleSpec ens = ensemble_from(cfg, "force", default_amplitude);
  const double wobble = cfg.get_double_or("force.wobble", 0.0);
  return random_periodic_force(grid, period, samples, ens, wobble,
                               cfg.get_uint64_or("force.seed", 1));
}

JobOutcome solve_periodic_job(Config& cfg, const std::string& out_dir) {
  const Grid grid = grid_from(cfg);
  SolverConfig sc = solver_from(cfg);
  sc.period = cfg.get_double_or("periodic.period", sc.period);
  sc.samples_per_period =
      static_cast<int>(cfg.get_int_or("periodic.samples", sc.samples_per_period));
  PeriodicForce f = periodic_force_from(cfg, grid, sc.period, sc.samples_per_period, 1.0);
  const bool want_snapshot = cfg.get_bool_or("output.snapshot", false);
  cfg.require_all_consumed();

  const PeriodicSolveResult res = solve_periodic(f, sc);

  NormSpec series_spec;
  series_spec.p = sc.picard_p;
  series_spec.sigma = sc.picard_sigma;
  series_spec.s = grid.dim() / sc.picard_p - 1.0;
  const DyadicPartition part = make_partition(grid, PartitionKind::Smooth);
  bool warn = false;
  const auto series = besov_series(res.solution, series_spec, part, &warn);

  json j = report_base(cfg, "solve-periodic");
  j["grid"] = grid_json(grid);
  j["scheme"] = "picard";
  j["dt"] = json_num(res.solution.dt);
  j["iterations"] = res.iterations;
  j["contraction_ratios"] = json_vec(res.contraction_ratios);
  j["final_difference"] = json_num(res.final_difference);
  j["fixed_point_residual"] = json_num(res.fixed_point_residual);
  j["periodicity_defect"] = json_num(res.periodicity_defect);
  j["solution_norm"] = json_num(res.solution_norm);
  j["force_norm"] = json_num(res.force_norm);
  j["apriori_ratio"] = json_num(res.apriori_ratio);
  json ns = json::array();
  for (const auto& [t, v] : series) ns.push_back(json::array({json_num(t), json_num(v)}));
  j["norm_series"] = ns;
  j["truncation_warning"] = warn;
  j["status"] = "converged";

  Artifacts art;
  art.add_json("periodic.json", j);
  art.add("series.csv", series_csv(series, "besov"));
  art.flush(out_dir);
  if (want_snapshot)
    write_snapshot(res.solution.samples.front(),
                   (std::filesystem::path(out_dir) / "periodic_state.bnsf").string());
  return {kExitOk,
          "",
          {{"iterations", std::to_string(res.iterations)},
           {"solution_norm", fmt(res.solution_norm)},
           {"apriori_ratio", fmt(res.apriori_ratio)}}};
}

JobOutcome stability_job(Config& cfg, const std::string& out_dir) {
  const Grid grid = grid_from(cfg);
  SolverConfig sc = solver_from(cfg);
  sc.period = cfg.get_double_or("periodic.period", sc.period);
  sc.samples_per_period =
      static_cast<int>(cfg.get_int_or("periodic.samples", sc.samples_per_period));
  PeriodicForce f = periodic_force_from(cfg, grid, sc.period, sc.samples_per_period, 0.05);

  const EnsembleSpec w0_ens = ensemble_from(cfg, "w0", 0.05);
  SpectralField w0 =
      random_field(grid, grid.dim(), w0_ens, cfg.get_uint64_or("w0.seed", 7));
  if (w0.max_abs() == 0.0)
    throw InvalidParameter("w0.amplitude: perturbation must be nonzero");

  const double horizon = cfg.get_double_or("stability.horizon", 50.0);
  NormSpec decay;
  decay.p = cfg.get_double_or("stability.q", 2.0);
  decay.sigma = cfg.get_double_or("stability.sigma", 1.0);
  decay.s = grid.dim() / decay.p - 1.0;
  cfg.require_all_consumed();

  const PeriodicSolveResult background = solve_periodic(f, sc);
  const PerturbationResult res =
      solve_perturbation(w0, background.solution, sc, horizon, decay);

  const double w0_norm = res.series.front().second;
  const double final_norm = res.series.back().second;
  // Start of the longest nonincreasing tail, for the eventual-monotonicity
  // claim; roundoff-level upticks do not break the tail.
  std::size_t tail = res.series.size() - 1;
  while (tail > 0 &&
         res.series[tail].second <= res.series[tail - 1].second * (1.0 + 1e-12))
    --tail;

  json j = report_base(cfg, "stability");
  j["grid"] = grid_json(grid);
  j["scheme"] = scheme_name(sc.scheme);
  j["dt"] = json_num(sc.dt);
  j["horizon"] = json_num(horizon);
  j["w0_norm"] = json_num(w0_norm);
  j["final_norm"] = json_num(final_norm);
  j["decay_ratio"] = json_num(w0_norm > 0.0 ? final_norm / w0_norm : 0.0);
  j["monotone_from_t"] = json_num(res.series[tail].first);
  j["background"] = {{"iterations", background.iterations},
                     {"solution_norm", json_num(background.solution_norm)}};
  j["series_file"] = "series.csv";
  j["status"] = "ok";

  Artifacts art;
  art.add_json("stability.json", j);
  art.add("series.csv", series_csv(res.series, "besov"));
  art.flush(out_dir);
  return {kExitOk,
          "",
          {{"decay_ratio", fmt(w0_norm > 0.0 ? final_norm / w0_norm : 0.0)},
           {"monotone_from_t", fmt(res.series[tail].first)}}};
}

JobOutcome counterexample_job(Config& cfg, const std::string& out_dir) {
  const Grid grid = grid_from(cfg);
  CounterexampleParams P;
  P.delta = cfg.get_double_or("experiment.delta", P.delta);
  P.eta = cfg.get_double_or("experiment.eta", P.eta);
  P.mfreq = cfg.get_double_or("experiment.M", P.mfreq);
  P.period = cfg.get_double_or("experiment.T", P.period);
  P.t0 = cfg.get_double_or("experiment.t0", P.t0);
  P.delta_cap = cfg.get_double_or("experiment.delta_cap", P.delta_cap);
  P.epsilon0 = cfg.get_double_or("thresholds.epsilon0", P.epsilon0);
  if (cfg.has("h.amplitude")) {
    const double amp = cfg.get_double("h.amplitude");
    const int samples = static_cast<int>(cfg.get_int_or("h.samples", 17));
    P.h = make_oscillating_h(grid, P.period, samples, amp,
                             cfg.get_uint64_or("h.seed", 11));
  }

  SpectralField a = [&]() -> SpectralField {
    if (!cfg.has("a.seed")) return SpectralField(grid, 2);
    const EnsembleSpec ens = ensemble_from(cfg, "a", 0.01);
    return random_field(grid, 2, ens, cfg.get_uint64_or("a.seed", 1));
  }();

  SolverConfig sc = solver_from(cfg);
  const bool want_lower_bound = cfg.get_bool_or("experiment.lower_bound", true);
  cfg.require_all_consumed();

  const ExperimentReport rep = run_growth_experiment(P, a, sc);

  json j = report_base(cfg, "counterexample");
  j["grid"] = grid_json(grid);
  j["params"] = {{"delta", json_num(rep.delta)},   {"eta", json_num(rep.eta)},
                 {"M", json_num(rep.mfreq)},       {"T", json_num(rep.period)},
                 {"t0", json_num(rep.t0)},         {"epsilon0", json_num(P.epsilon0)}};
  j["k"] = rep.k;
  j["horizon"] = json_num(rep.horizon);
  j["norms"] = {{"start", json_num(rep.start_norm)},
                {"end", json_num(rep.end_norm)},
                {"ratio", json_num(rep.ratio)}};
  j["decomposition"] = {{"first_iterate_norm", json_num(rep.first_iterate_norm)},
                        {"second_iterate_norm", json_num(rep.second_iterate_norm)},
                        {"expansion_residual", json_num(rep.expansion_residual)},
                        {"endpoint_gap", json_num(rep.endpoint_gap)}};
  j["flags"] = {{"non_periodic_certified", rep.non_periodic_certified},
                {"growth_target_met", rep.growth_target_met},
                {"m_below_asymptotic_regime", rep.m_below_asymptotic_regime},
                {"initial_norm_exceeds_epsilon0", rep.initial_norm_exceeds_epsilon0},
                {"truncation_warning", rep.truncation_warning}};
  j["series_file"] = "series.csv";
  j["status"] = "ok";

  JobOutcome outcome{kExitOk,
                     "",
                     {{"k", std::to_string(rep.k)},
                      {"start_norm", fmt(rep.start_norm)},
                      {"end_norm", fmt(rep.end_norm)},
                      {"ratio", fmt(rep.ratio)}}};

  if (want_lower_bound) {
    const DyadicPartition part = make_partition(grid, PartitionKind::Smooth);
    const LowerBoundReport lb = lower_bound_blocks(P, grid, part);
    json shells = json::array();
    for (int s : lb.shells) shells.push_back(s);
    j["lower_bound"] = {{"shells", shells},
                        {"total", json_vec(lb.total)},
                        {"m2_part", json_vec(lb.m2_part)},
                        {"remainder", json_vec(lb.remainder)},
                        {"sum_total", json_num(lb.sum_total)},
                        {"aggregate", json_num(lb.aggregate)},
                        {"nominal_shells", lb.nominal_shells},
                        {"truncated", lb.truncated}};
    double m2_min = std::numeric_limits<double>::infinity();
    double rem_max = 0.0;
    for (double x : lb.m2_part) m2_min = std::min(m2_min, x);
    for (double x : lb.remainder) rem_max = std::max(rem_max, x);
    outcome.summary["m2_part_min"] = fmt(m2_min);
    outcome.summary["remainder_max"] = fmt(rem_max);
  }

  Artifacts art;
  art.add_json("counterexample.json", j);
  art.add("series.csv", series_csv(rep.series, "besov"));
  art.flush(out_dir);
  return outcome;
}

JobOutcome estimates_job(Config& cfg, const std::string& out_dir) {
  const Grid grid = grid_from(cfg);
  const std::string which = cfg.get_string_or("estimates.check", "all");
  const int trials = static_cast<int>(cfg.get_int_or("estimates.trials", 30));
  const std::uint64_t seed = cfg.get_uint64_or("estimates.seed", 1);
  const double interval = cfg.get_double_or("estimates.interval", 1.0);
  const int time_samples = static_cast<int>(cfg.get_int_or("estimates.time_samples", 33));
  const EnsembleSpec ens = ensemble_from(cfg, "estimates.ensemble");
  const bool all = which == "all";

  std::vector<RatioReport> reports;
  if (all || which == "max-reg-heat" || which == "max-reg-duhamel") {
    MaxRegSpec ms;
    ms.p = cfg.get_double_or("maxreg.p", 2.0);
    ms.sigma = cfg.get_double_or("maxreg.sigma", 1.0);
    ms.s = cfg.get_double_or("maxreg.s", 0.0);
    ms.r = cfg.get_double_or("maxreg.r", kInf);
    ms.r1 = cfg.get_double_or("maxreg.r1", 1.0);
    ms.interval = interval;
    ms.time_samples = time_samples;
    ms.ensemble = ens;
    if (all || which == "max-reg-heat") {
      ms.duhamel = false;
      reports.push_back(check_max_reg(grid, ms, trials, seed));
    }
    if (all || which == "max-reg-duhamel") {
      ms.duhamel = true;
      reports.push_back(check_max_reg(grid, ms, trials, seed));
    }
  }
  if (all || which == "bilinear") {
    BilinearSpec bs;
    bs.p = cfg.get_double_or("bilinear.p", 2.0);
    bs.q = cfg.get_double_or("bilinear.q", 2.0);
    bs.sigma = cfg.get_double_or("bilinear.sigma", 1.0);
    bs.r = cfg.get_double_or("bilinear.r", 4.0);
    bs.r1 = cfg.get_double_or("bilinear.r1", kInf);
    bs.interval = interval;
    bs.time_samples = time_samples;
    bs.ensemble = ens;
    reports.push_back(check_bilinear(grid, bs, trials, seed));
  }
  if (all || which == "triple-norm") {
    const std::vector<double> deltas = cfg.has("triple.deltas")
                                           ? cfg.get_double_list("triple.deltas")
                                           : std::vector<double>{0.25, 0.2, 0.15};
    for (double d : deltas)
      reports.push_back(
          check_triple_norm_bilinear(grid, d, interval, time_samples, ens, trials, seed));
  }
  if (all || which == "uniqueness") {
    auto [plain, weighted] =
        check_uniqueness_bilinears(grid, interval, time_samples, ens, trials, seed);
    reports.push_back(std::move(plain));
    reports.push_back(std::move(weighted));
  }
  if (reports.empty())
    throw InvalidParameter("estimates.check: unknown check '" + which + "'");
  cfg.require_all_consumed();

  json j = report_base(cfg, "estimates");
  j["grid"] = grid_json(grid);
  json arr = json::array();
  for (const RatioReport& r : reports) arr.push_back(ratio_report_json(r));
  j["reports"] = arr;
  j["status"] = "ok";

  std::string csv = "inequality_id,delta,trial,ratio\n";
  JobOutcome outcome;
  for (const RatioReport& r : reports) {
    const std::string dtag = std::isnan(r.delta) ? "" : fmt(r.delta);
    for (std::size_t i = 0; i < r.ratios.size(); ++i)
      csv += r.inequality_id + "," + dtag + "," + std::to_string(i) + "," +
             fmt(r.ratios[i]) + "\n";
    std::string key = "max_ratio." + r.inequality_id;
    if (!dtag.empty()) key += "@" + dtag;
    outcome.summary[key] = fmt(r.max_ratio);
  }

  Artifacts art;
  art.add_json("estimates.json", j);
  art.add("ratios.csv", csv);
  art.flush(out_dir);
  return outcome;
}

// --- dispatch and the sweep runner ---------------------------------------

void write_error_json(const std::string& out_dir, const Config& cfg,
                      const std::string& type, const std::string& message,
                      json extra) {
  try {
    json j;
    j["version"] = kVersion;
    j["config"] = config_json(cfg);
    extra["type"] = type;
    extra["message"] = message;
    j["error"] = extra;
    Artifacts art;
    art.add_json("error.json", j);
    art.flush(out_dir);
  } catch (...) {
    // Reporting the original failure matters more than this file.
  }
}

JobOutcome run_dispatch(Config cfg) {
  std::string out_dir = ".";
  try {
    out_dir = cfg.get_string_or("output.dir", ".");
    const std::string cmd = cfg.get_string("command");
    if (cmd == "norms") return norms_job(cfg, out_dir);
    if (cmd == "solve-ivp") return solve_ivp_job(cfg, out_dir);
    if (cmd == "solve-periodic") return solve_periodic_job(cfg, out_dir);
    if (cmd == "stability") return stability_job(cfg, out_dir);
    if (cmd == "counterexample") return counterexample_job(cfg, out_dir);
    if (cmd == "estimates") return estimates_job(cfg, out_dir);
    throw InvalidParameter("command: unknown command '" + cmd + "'");
  } catch (const BlowupDetected& e) {
    write_error_json(out_dir, cfg, "BlowupDetected", e.what(), {{"t", json_num(e.t)}});
    return {kExitBlowup, e.what(), {}};
  } catch (const NoContraction& e) {
    write_error_json(out_dir, cfg, "NoContraction", e.what(),
                     {{"contraction_ratios", json_vec(e.ratios)}});
    return {kExitNoContraction, e.what(), {}};
  } catch (const EmptyBlockRange& e) {
    write_error_json(out_dir, cfg, "EmptyBlockRange", e.what(),
                     {{"required_box_length", json_num(e.required_box_length)}});
    return {kExitEmptyBlockRange, e.what(), {}};
  } catch (const Error& e) {
    return {kExitConfig, e.what(), {}};
  } catch (const std::exception& e) {
    return {kExitOther, e.what(), {}};
  }
}

std::string run_dir_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "run-%03zu", i);
  return buf;
}

JobOutcome run_sweep(Config& cfg, int parallel_jobs) {
  const std::string out_dir = cfg.get_string_or("output.dir", ".");
  const std::string sub = cfg.get_string("sweep.command");
  if (sub == "sweep") throw InvalidParameter("sweep.command: cannot nest sweeps");
  const std::vector<std::string> keys = cfg.get_string_list("sweep.keys");
  const std::int64_t cap = cfg.get_int_or("sweep.cap", 64);

  std::vector<std::vector<std::string>> values;
  std::size_t total = 1;
  for (const std::string& key : keys) {
    values.push_back(cfg.get_string_list(key));
    total *= values.back().size();
  }
  if (static_cast<std::int64_t>(total) > cap)
    throw InvalidParameter("sweep.cap: " + std::to_string(total) +
                           " runs exceed the cap of " + std::to_string(cap));

  // Base config: everything except the sweep block; swept keys and the
  // output directory are re-set per run.
  std::vector<Config> runs;
  runs.reserve(total);
  std::vector<std::size_t> odo(keys.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    Config c;
    for (const auto& [key, value] : cfg.entries())
      if (key.rfind("sweep.", 0) != 0 && key != "command") c.set(key, value);
    c.set("command", sub);
    for (std::size_t k = 0; k < keys.size(); ++k) c.set(keys[k], values[k][odo[k]]);
    c.set("output.dir",
          (std::filesystem::path(out_dir) / run_dir_name(i)).string());
    runs.push_back(std::move(c));
    for (std::size_t k = keys.size(); k-- > 0;) {
      if (++odo[k] < values[k].size()) break;
      odo[k] = 0;
    }
  }

  std::vector<JobOutcome> outcomes(total);
  const int workers =
      std::max(1, std::min<int>(parallel_jobs, static_cast<int>(total)));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      outcomes[i] = run_dispatch(std::move(runs[i]));
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  // Summary CSV: swept keys, exit code, then the union of summary scalars.
  std::vector<std::string> summary_cols;
  for (const JobOutcome& o : outcomes)
    for (const auto& [k, v] : o.summary)
      if (std::find(summary_cols.begin(), summary_cols.end(), k) == summary_cols.end())
        summary_cols.push_back(k);
  std::sort(summary_cols.begin(), summary_cols.end());

  std::string csv = "run";
  for (const std::string& k : keys) csv += "," + k;
  csv += ",exit_code";
  for (const std::string& k : summary_cols) csv += "," + k;
  csv += "\n";
  std::size_t failures = 0;
  json fail_list = json::array();
  for (std::size_t i = 0; i < total; ++i) {
    csv += run_dir_name(i);
    std::size_t rem = i;
    std::vector<std::size_t> idx(keys.size(), 0);
    for (std::size_t k = keys.size(); k-- > 0;) {
      idx[k] = rem % values[k].size();
      rem /= values[k].size();
    }
    for (std::size_t k = 0; k < keys.size(); ++k) csv += "," + values[k][idx[k]];
    csv += "," + std::to_string(outcomes[i].exit_code);
    for (const std::string& k : summary_cols) {
      auto it = outcomes[i].summary.find(k);
      csv += ",";
      if (it != outcomes[i].summary.end()) csv += it->second;
    }
    csv += "\n";
    if (outcomes[i].exit_code != kExitOk) {
      ++failures;
      fail_list.push_back({{"run", run_dir_name(i)},
                           {"exit_code", outcomes[i].exit_code},
                           {"message", outcomes[i].message}});
    }
  }

  json j = report_base(cfg, "sweep");
  j["runs"] = total;
  j["failures"] = fail_list;
  j["summary_file"] = "summary.csv";
  j["status"] = failures == 0 ? "ok" : "partial";

  Artifacts art;
  art.add_json("sweep.json", j);
  art.add("summary.csv", csv);
  art.flush(out_dir);

  JobOutcome out;
  out.summary["runs"] = std::to_string(total);
  out.summary["failures"] = std::to_string(failures);
  if (failures > 0) {
    out.exit_code = kExitOther;
    out.message = std::to_string(failures) + " of " + std::to_string(total) +
                  " sweep runs failed";
  }
  return out;
}

}  // namespace

JobOutcome run_job(Config cfg, int parallel_jobs) {
  const auto it = cfg.entries().find("command");
  if (it != cfg.entries().end() && it->second == "sweep") {
    try {
      return run_sweep(cfg, parallel_jobs);
    } catch (const Error& e) {
      return {kExitConfig, e.what(), {}};
    } catch (const std::exception& e) {
      return {kExitOther, e.what(), {}};
    }
  }
  return run_dispatch(std::move(cfg));
}

}  // namespace nsbox::jobs
