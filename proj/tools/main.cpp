#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "incompat/oracle.hpp"
#include "incompat/serialize.hpp"

namespace {

using namespace incompat;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

void emit(const std::string& path, const Json& j) { write_output(path, dump_fixed(j, 2)); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run_validate(const std::string& in, const std::string& type, const std::string& out) {
  const Json j = read_json(in);
  Json rep;
  rep["type"] = type;
  if (type == "measurement_set") {
    const MeasurementSet m = measurement_set_from_json(j);
    double worst_psd = 0.0, worst_comp = 0.0;
    for (int x = 0; x < m.settings(); ++x) {
      worst_psd = std::max(worst_psd, m.povm(x).worst_psd_residual());
      worst_comp = std::max(worst_comp, m.povm(x).completeness_residual());
    }
    rep["dim"] = m.dim();
    rep["settings"] = m.settings();
    rep["outcomes"] = m.outcomes();
    rep["worst_psd_residual"] = worst_psd;
    rep["worst_completeness_residual"] = worst_comp;
  } else if (type == "game") {
    const DiscriminationGame g = game_from_json(j);
    rep["dim"] = g.dim();
    rep["ensembles"] = g.size();
  } else if (type == "assemblage") {
    const Assemblage a = assemblage_from_json(j);
    rep["dim"] = a.dim();
    rep["worst_psd_residual"] = a.worst_psd_residual();
    rep["no_signalling_residual"] = a.no_signalling_residual();
  } else if (type == "kernel") {
    kernel_from_json(j);
  } else {
    throw ValidationError("unknown --type '" + type + "'");
  }
  rep["ok"] = true;
  emit(out, rep);
  return 0;
}

int run_roi(const std::string& in, const std::string& out, bool oracle,
            const SolverSettings& st, std::uint64_t seed) {
  const MeasurementSet m = measurement_set_from_json(read_json(in));
  const RoiResult r = roi(m, st);
  Json j = to_json(r);
  if (oracle) {
    Json jo;
    jo["brute_jm"] = brute_jm(m, 60, seed);
    j["oracle"] = std::move(jo);
  }
  emit(out, j);
  return 0;
}

int run_build_game(const std::string& in, const std::string& out) {
  const RoiResult r = roi_result_from_json(read_json(in));
  emit(out, to_json(optimal_game_from_dual(r.dual)));
  return 0;
}

int run_play(const std::string& game_path, const std::string& mset_path, const std::string& out,
             bool oracle, const SolverSettings& st, std::uint64_t seed) {
  const DiscriminationGame g = game_from_json(read_json(game_path));
  const MeasurementSet m = measurement_set_from_json(read_json(mset_path));
  const double pg = p_guess(g, m);
  const double pc = p_guess_compatible(g, st).first;
  Json j;
  j["p_guess"] = pg;
  j["p_guess_compatible"] = pc;
  j["advantage"] = pg / pc;
  if (oracle) {
    Json jo;
    jo["brute_pguess"] = brute_pguess(g, m);
    jo["brute_compatible"] = brute_compatible(g, 20, seed);
    j["oracle"] = std::move(jo);
  }
  emit(out, j);
  return 0;
}

int run_simulable(const std::string& from, const std::string& to, const std::string& out,
                  const SolverSettings& st) {
  const MeasurementSet m = measurement_set_from_json(read_json(from));
  const MeasurementSet target = measurement_set_from_json(read_json(to));
  const SimulabilityResult res = is_simulable(m, target, st);
  Json j;
  j["simulable"] = res.simulable;
  if (res.simulable) {
    j["kernel"] = to_json(*res.kernel);
  } else {
    j["separating_game"] = to_json(separating_game(m, target, st));
  }
  emit(out, j);
  return 0;
}

int run_steer(const std::string& state_path, const std::string& mset_path,
              const std::string& out, const SolverSettings& st) {
  const DensityOperator rho(hermitian_from_json(read_json(state_path)));
  const MeasurementSet m = measurement_set_from_json(read_json(mset_path));
  const Assemblage a = assemblage_from(rho, m);
  const bool lhs = lhs_feasibility(a, st);
  const double src = consistent_steering_robustness(a, st);
  const double ir = roi(m, st).value;
  Json j;
  j["lhs"] = lhs;
  j["src_value"] = src;
  j["roi_value"] = ir;
  j["gap"] = ir - src;
  emit(out, j);
  return 0;
}

int run_sweep(const std::string& in, const std::string& param, double lo, double hi, int steps,
              int jobs, const std::string& out, const SolverSettings& st) {
  if (param != "eta") throw ValidationError("sweep: unsupported --param '" + param + "'");
  if (steps < 1) throw ValidationError("sweep: --steps must be >= 1");
  const MeasurementSet m = measurement_set_from_json(read_json(in));
  const MeasurementSet noise = trivial_set(m.dim(), m.settings(), m.outcomes());

  struct Row {
    double eta = 0, value = 0, gap = 0;
    std::string status = "optimal";
  };
  std::vector<Row> rows(steps);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= steps) return;
      Row& row = rows[i];
      row.eta = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
      try {
        const RoiResult r = roi(mix(m, noise, row.eta), st);
        row.value = r.value;
        row.gap = r.gap;
      } catch (const SolverFailure&) {
        row.status = "numerical_failure";
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "param,value,gap,status\n";
  for (const Row& r : rows)
    csv << fmt(r.eta) << "," << fmt(r.value) << "," << fmt(r.gap) << "," << r.status << "\n";
  write_output(out, csv.str());
  return 0;
}

int run_audit(std::uint64_t seed, int pairs, int games, const std::string& out) {
  Rng root(seed);
  bool all_ok = true;
  Json j;
  j["seed"] = seed;

  Json jp = Json::array();
  for (int i = 0; i < pairs; ++i) {
    const int d = 2 + (i % 2);
    const MeasurementSet m = random_measurement_set(d, 2, 2, root.next_u64());
    Rng kr = root.fork();
    const SimulationKernel k = random_kernel(2, 2, 2, 2, kr);
    const MeasurementSet target = apply_simulation(m, k);
    const MonotoneReport rep = monotone_audit(m, target, games, root.next_u64());
    Json je;
    je["dim"] = d;
    je["simulable"] = rep.simulable;
    je["ok"] = rep.ok;
    je["games"] = rep.games_checked;
    je["min_pguess_slack"] = rep.min_pguess_slack;
    je["roi_source"] = rep.roi_source;
    je["roi_target"] = rep.roi_target;
    if (!rep.ok && rep.game) je["offending_game"] = to_json(*rep.game);
    all_ok = all_ok && rep.ok;
    jp.push_back(std::move(je));
  }
  j["simulable_pairs"] = std::move(jp);

  {
    const MeasurementSet z({qubit_mub_pair().povm(0)});
    const MonotoneReport rep = monotone_audit(z, qubit_mub_pair(), games, root.next_u64());
    Json je;
    je["simulable"] = rep.simulable;
    je["ok"] = rep.ok;
    je["separating_gap"] = rep.separating_gap;
    if (rep.game) je["separating_game"] = to_json(*rep.game);
    all_ok = all_ok && rep.ok && !rep.simulable;
    j["non_simulable_pair"] = std::move(je);
  }
  {
    const RoiResult r = roi(qubit_mub_pair());
    Json je;
    je["value"] = r.value;
    je["gap"] = r.gap;
    j["mub_anchor"] = std::move(je);
  }
  j["all_ok"] = all_ok;
  emit(out, j);
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompatibility robustness of POVM sets: SDP certification, state-discrimination "
               "games, simulability, and consistent steering robustness."};
  app.require_subcommand(1);

  SolverSettings st = roi_solver_settings();
  std::uint64_t seed = 1;
  app.add_option("--eps-gap", st.eps_gap, "relative duality-gap tolerance")
      ->envname("INCOMPAT_EPS_GAP");
  app.add_option("--eps-feas", st.eps_feas, "equality residual tolerance")
      ->envname("INCOMPAT_EPS_FEAS");
  app.add_option("--eps-psd", st.eps_psd, "PSD slack tolerance")->envname("INCOMPAT_EPS_PSD");
  app.add_option("--max-iters", st.max_iters, "interior-point iteration cap")
      ->envname("INCOMPAT_MAX_ITERS");
  app.add_option("--seed", seed, "seed for every random draw");

  std::string in, out, type = "measurement_set";
  auto* c_validate = app.add_subcommand("validate", "check invariants, report worst residuals");
  c_validate->add_option("--in", in)->required();
  c_validate->add_option("--type", type, "measurement_set|game|assemblage|kernel");
  c_validate->add_option("--out", out);

  bool oracle = false;
  auto* c_roi = app.add_subcommand("roi", "robustness of incompatibility with certificates");
  c_roi->add_option("--in", in)->required();
  c_roi->add_option("--out", out);
  c_roi->add_flag("--oracle", oracle, "also run the brute-force joint-measurability search");

  auto* c_build = app.add_subcommand("build-game", "optimal game from a roi result");
  c_build->add_option("--in", in)->required();
  c_build->add_option("--out", out);

  std::string game_path, mset_path;
  auto* c_play = app.add_subcommand("play", "evaluate a discrimination game");
  c_play->add_option("--game", game_path)->required();
  c_play->add_option("--mset", mset_path)->required();
  c_play->add_option("--out", out);
  c_play->add_flag("--oracle", oracle, "also run the brute-force references");

  std::string from_path, to_path;
  auto* c_sim = app.add_subcommand("simulable", "decide measurement simulability");
  c_sim->add_option("--from", from_path)->required();
  c_sim->add_option("--to", to_path)->required();
  c_sim->add_option("--out", out);

  std::string state_path;
  auto* c_steer = app.add_subcommand("steer", "consistent steering robustness of an assemblage");
  c_steer->add_option("--state", state_path)->required();
  c_steer->add_option("--mset", mset_path)->required();
  c_steer->add_option("--out", out);

  std::string param = "eta";
  double lo = 0.0, hi = 1.0;
  int steps = 21, jobs = 1;
  auto* c_sweep = app.add_subcommand("sweep", "RoI under noise mixing, CSV output");
  c_sweep->add_option("--in", in)->required();
  c_sweep->add_option("--param", param, "swept parameter (eta)");
  c_sweep->add_option("--min", lo);
  c_sweep->add_option("--max", hi);
  c_sweep->add_option("--steps", steps);
  c_sweep->add_option("--jobs", jobs, "concurrent solves");
  c_sweep->add_option("--out", out);

  int pairs = 4, games = 25;
  auto* c_audit = app.add_subcommand("audit", "monotone battery over seeded random instances");
  c_audit->add_option("--pairs", pairs);
  c_audit->add_option("--games", games);
  c_audit->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) return run_validate(in, type, out);
    if (c_roi->parsed()) return run_roi(in, out, oracle, st, seed);
    if (c_build->parsed()) return run_build_game(in, out);
    if (c_play->parsed()) return run_play(game_path, mset_path, out, oracle, st, seed);
    if (c_sim->parsed()) return run_simulable(from_path, to_path, out, st);
    if (c_steer->parsed()) return run_steer(state_path, mset_path, out, st);
    if (c_sweep->parsed()) return run_sweep(in, param, lo, hi, steps, jobs, out, st);
    if (c_audit->parsed()) return run_audit(seed, pairs, games, out);
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
