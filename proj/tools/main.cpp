// Command-line front end: measure distances, Monte Carlo tables, tail fits,
// and (coupled) jump-diffusion simulation, with JSON/CSV outputs that are
// byte-identical across reruns with the same seed and inputs.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levytrans/csv.hpp"
#include "levytrans/distance.hpp"
#include "levytrans/errors.hpp"
#include "levytrans/jumpsde.hpp"
#include "levytrans/measures.hpp"
#include "levytrans/rng.hpp"
#include "levytrans/study.hpp"
#include "levytrans/timeseries.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw levytrans::IoError("cannot open \"" + path + "\" for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw levytrans::ValidationError("\"" + path + "\": " + e.what());
  }
}

void ensure_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    throw levytrans::IoError("cannot create output directory \"" + out +
                             "\": " + ec.message());
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Config file values fill in whatever the command line left untouched.
template <typename T>
void merge_key(const CLI::Option* opt, const json& section, const char* key, T& target) {
  if (opt != nullptr && opt->count() > 0) return;
  if (section.is_object() && section.contains(key)) {
    try {
      target = section.at(key).get<T>();
    } catch (const json::exception& e) {
      throw levytrans::ValidationError(std::string("config key \"") + key +
                                       "\": " + e.what());
    }
  }
}

json section_of(const json& root, const char* name) {
  if (root.is_object() && root.contains(name) && root.at(name).is_object()) {
    return root.at(name);
  }
  return json::object();
}

struct GlobalArgs {
  std::uint64_t seed = 20240817;
  unsigned threads = 0;  // 0 = all hardware threads
  std::string out = ".";
  std::string config_path;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  json config = json::object();

  void finalize() {
    if (!config_path.empty()) config = load_json_file(config_path);
    merge_key(seed_opt, config, "seed", seed);
    merge_key(threads_opt, config, "threads", threads);
    merge_key(out_opt, config, "out", out);
    ensure_dir(out);
  }

  void echo_effective(const char* command, json section) const {
    json eff{{"command", command},
             {"seed", seed},
             {"threads", threads},
             {"out", out}};
    eff[command] = std::move(section);
    levytrans::write_text_file(join(out, "effective_config.json"), eff.dump(2) + "\n");
  }
};

double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// ---------------------------------------------------------------------------
// distance
// ---------------------------------------------------------------------------

struct DistanceArgs {
  std::string path_a, path_b;
  double p = 1.0;
  double tol = 1e-10;
  bool oracle = false;
  bool normalized = false;
  double eps = 0.0;

  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* oracle_opt = nullptr;
  CLI::Option* normalized_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
};

int cmd_distance(GlobalArgs& g, DistanceArgs& a) {
  g.finalize();
  const json sec = section_of(g.config, "distance");
  merge_key(a.a_opt, sec, "a", a.path_a);
  merge_key(a.b_opt, sec, "b", a.path_b);
  merge_key(a.p_opt, sec, "p", a.p);
  merge_key(a.tol_opt, sec, "tol", a.tol);
  merge_key(a.oracle_opt, sec, "oracle", a.oracle);
  merge_key(a.normalized_opt, sec, "normalized", a.normalized);
  merge_key(a.eps_opt, sec, "eps", a.eps);
  if (a.path_a.empty() || a.path_b.empty()) {
    throw levytrans::ValidationError("distance needs two measure files (--a, --b)");
  }

  const levytrans::MeasureSpec ma = levytrans::measure_from_json(load_json_file(a.path_a));
  const levytrans::MeasureSpec mb = levytrans::measure_from_json(load_json_file(a.path_b));
  levytrans::DistanceResult r = levytrans::distance_auto(ma, mb, a.p, a.tol, a.oracle);
  if (a.normalized) {
    if (!(a.eps > 0.0)) {
      throw levytrans::ValidationError("--normalized needs a positive --eps scale");
    }
    r = levytrans::normalize(r, a.eps);
  }

  g.echo_effective("distance", json{{"a", a.path_a},
                                    {"b", a.path_b},
                                    {"p", a.p},
                                    {"tol", a.tol},
                                    {"oracle", a.oracle},
                                    {"normalized", a.normalized},
                                    {"eps", a.eps}});
  const json out = levytrans::distance_to_json(r);
  levytrans::write_text_file(join(g.out, "distance.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

struct TableArgs {
  std::size_t n = 100;
  std::size_t reps = 100;
  double alpha_min = 1.0, alpha_max = 10.0, alpha_step = 1.0;
  double eps_min = 0.5, eps_max = 1.0, eps_step = 0.1;
  double tol = 1e-9;

  CLI::Option* n_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* amin_opt = nullptr;
  CLI::Option* amax_opt = nullptr;
  CLI::Option* astep_opt = nullptr;
  CLI::Option* emin_opt = nullptr;
  CLI::Option* emax_opt = nullptr;
  CLI::Option* estep_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
};

int cmd_table(GlobalArgs& g, TableArgs& a) {
  g.finalize();
  const json sec = section_of(g.config, "table");
  merge_key(a.n_opt, sec, "n", a.n);
  merge_key(a.reps_opt, sec, "reps", a.reps);
  merge_key(a.amin_opt, sec, "alpha_min", a.alpha_min);
  merge_key(a.amax_opt, sec, "alpha_max", a.alpha_max);
  merge_key(a.astep_opt, sec, "alpha_step", a.alpha_step);
  merge_key(a.emin_opt, sec, "eps_min", a.eps_min);
  merge_key(a.emax_opt, sec, "eps_max", a.eps_max);
  merge_key(a.estep_opt, sec, "eps_step", a.eps_step);
  merge_key(a.tol_opt, sec, "tol", a.tol);

  levytrans::StudyGrid grid;
  grid.alphas = levytrans::linear_grid(a.alpha_min, a.alpha_max, a.alpha_step);
  grid.epsilons = levytrans::linear_grid(a.eps_min, a.eps_max, a.eps_step);
  grid.n = a.n;
  grid.replicates = a.reps;
  grid.quadrature_tol = a.tol;

  const levytrans::StudyResult res = levytrans::run_study(grid, g.seed, g.threads);

  g.echo_effective("table", json{{"n", a.n},
                                 {"reps", a.reps},
                                 {"alpha_min", a.alpha_min},
                                 {"alpha_max", a.alpha_max},
                                 {"alpha_step", a.alpha_step},
                                 {"eps_min", a.eps_min},
                                 {"eps_max", a.eps_max},
                                 {"eps_step", a.eps_step},
                                 {"tol", a.tol}});
  levytrans::write_text_file(join(g.out, "means.csv"), levytrans::matrix_csv(res, false));
  levytrans::write_text_file(join(g.out, "sds.csv"), levytrans::matrix_csv(res, true));
  levytrans::write_text_file(join(g.out, "study.json"),
                             levytrans::study_to_json(res).dump(2) + "\n");
  std::cout << "wrote " << grid.alphas.size() << "x" << grid.epsilons.size()
            << " mean/sd matrices to " << g.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
  std::string input;
  levytrans::RegimeConfig cfg;
  levytrans::FitGrid grid;

  CLI::Option* input_opt = nullptr;
  CLI::Option* sstar_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* epsp_opt = nullptr;
  CLI::Option* epsm_opt = nullptr;
  CLI::Option* band_opt = nullptr;
  CLI::Option* amin_opt = nullptr;
  CLI::Option* amax_opt = nullptr;
  CLI::Option* astep_opt = nullptr;
};

int cmd_fit(GlobalArgs& g, FitArgs& a) {
  g.finalize();
  const json sec = section_of(g.config, "fit");
  merge_key(a.input_opt, sec, "input", a.input);
  merge_key(a.sstar_opt, sec, "s_star", a.cfg.s_star);
  merge_key(a.delta_opt, sec, "delta", a.cfg.delta);
  merge_key(a.epsp_opt, sec, "eps_plus", a.cfg.eps_plus);
  merge_key(a.epsm_opt, sec, "eps_minus", a.cfg.eps_minus);
  merge_key(a.band_opt, sec, "exclude_band", a.cfg.exclude_band);
  merge_key(a.amin_opt, sec, "alpha_min", a.grid.lo);
  merge_key(a.amax_opt, sec, "alpha_max", a.grid.hi);
  merge_key(a.astep_opt, sec, "alpha_step", a.grid.step);
  if (a.input.empty()) {
    throw levytrans::ValidationError("fit needs an input series (--input)");
  }

  const levytrans::SeriesData series = levytrans::read_series_csv(a.input);
  const levytrans::JumpCells cells = levytrans::extract_jumps(series.value, a.cfg);

  g.echo_effective("fit", json{{"input", a.input},
                               {"s_star", a.cfg.s_star},
                               {"delta", a.cfg.delta},
                               {"eps_plus", a.cfg.eps_plus},
                               {"eps_minus", a.cfg.eps_minus},
                               {"exclude_band", a.cfg.exclude_band},
                               {"alpha_min", a.grid.lo},
                               {"alpha_max", a.grid.hi},
                               {"alpha_step", a.grid.step}});

  json summary;
  summary["cells"] = json::object();
  std::vector<std::pair<double, std::size_t>> pos_fits, neg_fits;
  for (levytrans::Regime r : {levytrans::Regime::Warm, levytrans::Regime::Cold}) {
    for (levytrans::JumpSign s :
         {levytrans::JumpSign::Positive, levytrans::JumpSign::Negative}) {
      const std::string name =
          std::string(levytrans::regime_name(r)) + "_" + levytrans::sign_name(s);
      const std::vector<double>& cell = cells.at(r, s);
      if (cell.empty()) {
        std::cerr << "warning: no jumps in cell " << name << "; nothing to fit\n";
        summary["cells"][name] = json{{"n", 0}};
        continue;
      }
      const double eps =
          s == levytrans::JumpSign::Positive ? a.cfg.eps_plus : a.cfg.eps_minus;
      const levytrans::FitReport rep = levytrans::fit_alpha(cell, eps, a.grid);
      levytrans::write_text_file(join(g.out, "fit_" + name + ".json"),
                                 levytrans::fit_to_json(rep).dump(2) + "\n");
      levytrans::write_text_file(join(g.out, "curve_" + name + ".csv"),
                                 levytrans::fit_curve_csv(rep));
      summary["cells"][name] = json{{"alpha_hat", rep.alpha_hat},
                                    {"min_objective", rep.min_objective},
                                    {"n", rep.n},
                                    {"eps", rep.eps}};
      (s == levytrans::JumpSign::Positive ? pos_fits : neg_fits)
          .emplace_back(rep.alpha_hat, rep.n);
    }
  }
  if (!pos_fits.empty()) {
    summary["weighted_exponent_pos"] = levytrans::weighted_exponent(pos_fits);
  }
  if (!neg_fits.empty()) {
    summary["weighted_exponent_neg"] = levytrans::weighted_exponent(neg_fits);
  }
  levytrans::write_text_file(join(g.out, "fit_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate / couple
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string spec_path;
  double horizon = 1.0;
  double dt = 1e-3;

  CLI::Option* spec_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
};

int cmd_simulate(GlobalArgs& g, SimulateArgs& a) {
  g.finalize();
  const json sec = section_of(g.config, "simulate");
  merge_key(a.spec_opt, sec, "spec", a.spec_path);
  merge_key(a.horizon_opt, sec, "horizon", a.horizon);
  merge_key(a.dt_opt, sec, "dt", a.dt);
  if (a.spec_path.empty()) {
    throw levytrans::ValidationError("simulate needs a model file (--spec)");
  }

  const levytrans::JumpDiffusionSpec spec =
      levytrans::sde_from_json(load_json_file(a.spec_path));
  levytrans::RngStream rng = levytrans::stream_for(g.seed, "simulate", 0);
  const levytrans::Path path = levytrans::simulate(spec, a.horizon, a.dt, rng);

  g.echo_effective("simulate",
                   json{{"spec", a.spec_path}, {"horizon", a.horizon}, {"dt", a.dt}});
  levytrans::write_text_file(join(g.out, "path.csv"), levytrans::path_csv(path));
  const json summary{{"jump_count", path.jump_count},
                     {"final_value", path.value.back()},
                     {"horizon", a.horizon},
                     {"dt", a.dt},
                     {"seed", g.seed}};
  levytrans::write_text_file(join(g.out, "simulate_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct CoupleArgs {
  std::string spec_a_path, spec_b_path;
  double horizon = 1.0;
  double dt = 1e-3;
  std::size_t replicates = 100;
  bool bound = false;

  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* bound_opt = nullptr;
};

int cmd_couple(GlobalArgs& g, CoupleArgs& a) {
  g.finalize();
  const json sec = section_of(g.config, "couple");
  merge_key(a.a_opt, sec, "spec_a", a.spec_a_path);
  merge_key(a.b_opt, sec, "spec_b", a.spec_b_path);
  merge_key(a.horizon_opt, sec, "horizon", a.horizon);
  merge_key(a.dt_opt, sec, "dt", a.dt);
  merge_key(a.reps_opt, sec, "replicates", a.replicates);
  merge_key(a.bound_opt, sec, "bound", a.bound);
  if (a.spec_a_path.empty() || a.spec_b_path.empty()) {
    throw levytrans::ValidationError("couple needs two model files (--spec-a, --spec-b)");
  }
  if (a.replicates == 0) {
    throw levytrans::ValidationError("couple needs at least one replicate");
  }

  const levytrans::JumpDiffusionSpec sa =
      levytrans::sde_from_json(load_json_file(a.spec_a_path));
  const levytrans::JumpDiffusionSpec sb =
      levytrans::sde_from_json(load_json_file(a.spec_b_path));

  std::vector<double> sups;
  sups.reserve(a.replicates);
  for (std::size_t rep = 0; rep < a.replicates; ++rep) {
    levytrans::RngStream rng = levytrans::stream_for(g.seed, "couple", rep);
    sups.push_back(levytrans::simulate_coupled(sa, sb, a.horizon, a.dt, rng).sup_rho);
  }
  double mean = 0.0;
  for (double s : sups) mean += s;
  mean /= static_cast<double>(sups.size());
  const double se = sample_sd(sups, mean) / std::sqrt(static_cast<double>(sups.size()));

  g.echo_effective("couple", json{{"spec_a", a.spec_a_path},
                                  {"spec_b", a.spec_b_path},
                                  {"horizon", a.horizon},
                                  {"dt", a.dt},
                                  {"replicates", a.replicates},
                                  {"bound", a.bound}});
  json summary{{"replicates", a.replicates},
               {"mean_sup_rho", mean},
               {"stderr", se},
               {"horizon", a.horizon},
               {"dt", a.dt},
               {"seed", g.seed}};
  if (a.bound) {
    summary["bound"] =
        levytrans::bound_to_json(levytrans::bound_t1(sa, sb, sa.x0, sb.x0));
  }
  levytrans::write_text_file(join(g.out, "couple_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Heavy-tail transportation toolkit: measure distances, Monte Carlo "
      "tables, exponent fits, and coupled jump-diffusion simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  g.seed_opt = app.add_option("--seed", g.seed, "Master seed for all randomness");
  g.threads_opt = app.add_option("--threads", g.threads,
                                 "Worker thread cap (0 = all hardware threads)");
  g.out_opt = app.add_option("--out", g.out, "Output directory");
  app.add_option("--config", g.config_path,
                 "JSON config file; explicit flags take precedence");

  DistanceArgs da;
  CLI::App* distance = app.add_subcommand(
      "distance", "Transportation distance between two measure files");
  da.a_opt = distance->add_option("--a", da.path_a, "First measure (JSON file)");
  da.b_opt = distance->add_option("--b", da.path_b, "Second measure (JSON file)");
  da.p_opt = distance->add_option("--p", da.p, "Order of the distance");
  da.tol_opt = distance->add_option("--tol", da.tol, "Quadrature tolerance");
  da.oracle_opt = distance->add_flag("--oracle", da.oracle,
                                     "Force the quadrature oracle even when a "
                                     "closed form applies");
  da.normalized_opt =
      distance->add_flag("--normalized", da.normalized,
                         "Scale an order-1 distance by the jump threshold");
  da.eps_opt = distance->add_option("--eps", da.eps, "Jump threshold for --normalized");

  TableArgs ta;
  CLI::App* table = app.add_subcommand(
      "table", "Monte Carlo mean/sd matrices of the normalized distance");
  ta.n_opt = table->add_option("--n", ta.n, "Sample size per replicate");
  ta.reps_opt = table->add_option("--reps", ta.reps, "Replicates per cell");
  ta.amin_opt = table->add_option("--alpha-min", ta.alpha_min, "Smallest tail exponent");
  ta.amax_opt = table->add_option("--alpha-max", ta.alpha_max, "Largest tail exponent");
  ta.astep_opt = table->add_option("--alpha-step", ta.alpha_step, "Tail exponent step");
  ta.emin_opt = table->add_option("--eps-min", ta.eps_min, "Smallest jump threshold");
  ta.emax_opt = table->add_option("--eps-max", ta.eps_max, "Largest jump threshold");
  ta.estep_opt = table->add_option("--eps-step", ta.eps_step, "Jump threshold step");
  ta.tol_opt = table->add_option("--tol", ta.tol, "Quadrature tolerance");

  FitArgs fa;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit per-regime tail exponents to a time series of increments");
  fa.input_opt = fit->add_option("--input", fa.input, "Series CSV ([time,]value)");
  fa.sstar_opt = fit->add_option("--s-star", fa.cfg.s_star, "Regime threshold state");
  fa.delta_opt = fit->add_option("--delta", fa.cfg.delta, "Interpolation band half-width");
  fa.epsp_opt = fit->add_option("--eps-plus", fa.cfg.eps_plus,
                                "Positive jump threshold");
  fa.epsm_opt = fit->add_option("--eps-minus", fa.cfg.eps_minus,
                                "Negative jump threshold");
  fa.band_opt = fit->add_flag("--exclude-band", fa.cfg.exclude_band,
                              "Drop increments whose pre-state is inside the band");
  fa.amin_opt = fit->add_option("--alpha-min", fa.grid.lo, "Smallest candidate exponent");
  fa.amax_opt = fit->add_option("--alpha-max", fa.grid.hi, "Largest candidate exponent");
  fa.astep_opt = fit->add_option("--alpha-step", fa.grid.step, "Exponent grid step");

  SimulateArgs sa;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Simulate one path of a state-dependent jump diffusion");
  sa.spec_opt = simulate->add_option("--spec", sa.spec_path, "Model (JSON file)");
  sa.horizon_opt = simulate->add_option("--horizon", sa.horizon, "Time horizon");
  sa.dt_opt = simulate->add_option("--dt", sa.dt, "Drift step resolution");

  CoupleArgs ca;
  CLI::App* couple = app.add_subcommand(
      "couple", "Synchronously coupled paths of two models on shared jump marks");
  ca.a_opt = couple->add_option("--spec-a", ca.spec_a_path, "First model (JSON file)");
  ca.b_opt = couple->add_option("--spec-b", ca.spec_b_path, "Second model (JSON file)");
  ca.horizon_opt = couple->add_option("--horizon", ca.horizon, "Time horizon");
  ca.dt_opt = couple->add_option("--dt", ca.dt, "Drift step resolution");
  ca.reps_opt = couple->add_option("--replicates", ca.replicates, "Replicate count");
  ca.bound_opt = couple->add_flag("--bound", ca.bound,
                                  "Attach the first-order perturbation bound");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }
    if (distance->parsed()) return cmd_distance(g, da);
    if (table->parsed()) return cmd_table(g, ta);
    if (fit->parsed()) return cmd_fit(g, fa);
    if (simulate->parsed()) return cmd_simulate(g, sa);
    if (couple->parsed()) return cmd_couple(g, ca);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const levytrans::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const levytrans::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const levytrans::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
