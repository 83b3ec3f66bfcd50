// surfimp: simulate, mask, impute, evaluate and plot 1-D surface profiles.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "surfimp/baselines.hpp"
#include "surfimp/errors.hpp"
#include "surfimp/experiments.hpp"
#include "surfimp/gsm.hpp"
#include "surfimp/io.hpp"
#include "surfimp/plot.hpp"
#include "surfimp/sm_fit.hpp"
#include "surfimp/synthesis.hpp"

using namespace surfimp;

namespace {

constexpr int kDomainError = 1;

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? path.substr(0, dot) : path) + suffix;
}

void dump_trace(const FitFailure& e, const std::string& path) {
  std::ofstream os(path);
  os << "iteration,objective\n";
  for (std::size_t i = 0; i < e.objective().size(); ++i) os << i << ',' << format_number(e.objective()[i]) << '\n';
  std::cerr << "fit failed: " << e.what() << "\nobjective trace written to " << path << "\nlast parameters:";
  for (double v : e.last_params()) std::cerr << ' ' << format_number(v);
  std::cerr << '\n';
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string kind;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const KeyValueDoc doc = a.config.empty() ? KeyValueDoc{} : KeyValueDoc::load(a.config);
  Profile p;
  if (a.kind == "turned") {
    TurnedSimConfig c = turned_config_from(doc);
    c.seed = a.seed;
    p = simulate_turned(c);
  } else {
    ChirpConfig c = chirp_config_from(doc);
    c.seed = a.seed;
    p = simulate_chirp(c);
  }
  write_profile_csv(p, a.out);
  std::cout << "wrote " << p.size() << " points to " << a.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct MaskArgs {
  std::string method;
  std::string in;
  std::string out;
  std::size_t count = 5;
  double volume_threshold = 0.0;
  std::optional<double> threshold;
  std::optional<double> fraction;
};

int run_mask(const MaskArgs& a) {
  const Profile p = read_profile_csv(a.in);
  Profile m;
  if (a.method == "dales") {
    m = mask_smallest_width_dales(p, a.count, a.volume_threshold);
  } else {
    if (a.threshold.has_value() == a.fraction.has_value()) {
      throw InvalidArgument("gradient masking needs exactly one of --threshold or --fraction");
    }
    const double t = a.threshold ? *a.threshold : slope_quantile_threshold(p, 0, p.size(), *a.fraction);
    m = mask_gradient(p, t);
  }
  write_profile_csv(m, a.out);
  std::cout << "masked " << m.invalid_count() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ImputeArgs {
  std::string model;
  std::string in;
  std::string out;
  std::string posterior;
  std::optional<std::uint64_t> seed;
  std::optional<double> init_rsm;
  std::optional<double> init_rq;
  std::size_t components = 5;
  std::size_t restarts = 3;
  std::size_t max_iterations = 500;
  double step_size = 0.01;
  std::optional<double> wavelength_start;
  std::optional<double> wavelength_end;
  std::size_t representatives = 100;
  std::optional<double> frequency_lengthscale_fraction;
  std::string load_model;
  std::string save_model;
  std::size_t window = 5;
  std::size_t max_passes = 0;
  double power = 2.0;
  std::optional<double> radius;
};

OptConfig opt_from(const ImputeArgs& a) {
  OptConfig o;
  o.max_iterations = a.max_iterations;
  o.step_size = a.step_size;
  o.seed = *a.seed;
  return o;
}

ImputationResult impute_gp(const Profile& p, const ImputeArgs& a) {
  if (a.model == "sm") {
    SmFitConfig c;
    c.components = a.components;
    c.init_rsm = a.init_rsm;
    if (a.init_rq) c.init_variance = *a.init_rq * *a.init_rq;
    c.fit.restarts = a.restarts;
    c.fit.opt = opt_from(a);
    const auto fit = fit_sm(p, c);
    std::cout << "log likelihood " << format_number(fit.log_likelihood) << " (" << to_string(fit.trace.reason) << ")\n";
    return impute(p, fit.model, *a.seed);
  }
  if (a.model == "se") {
    SeFitConfig c;
    c.fit.restarts = a.restarts;
    c.fit.opt = opt_from(a);
    const auto fit = fit_se(p, c);
    std::cout << "log likelihood " << format_number(fit.log_likelihood) << " (" << to_string(fit.trace.reason) << ")\n";
    return impute(p, fit.model, *a.seed);
  }
  GsmModel model;
  if (!a.load_model.empty()) {
    model = load_gsm(a.load_model);
  } else {
    if (!a.wavelength_start || !a.wavelength_end) {
      throw InvalidArgument("gsm needs --wavelength-start and --wavelength-end, or --load-model");
    }
    GsmInitConfig ic;
    ic.representatives = a.representatives;
    ic.wavelength_start = *a.wavelength_start;
    ic.wavelength_end = *a.wavelength_end;
    ic.frequency_lengthscale_fraction = a.frequency_lengthscale_fraction;
    const auto fit = fit_gsm(p, gsm_initial_model(p, ic), opt_from(a));
    std::cout << "log posterior " << format_number(fit.log_posterior) << " (" << to_string(fit.trace.reason) << ")\n";
    model = fit.model;
  }
  if (!a.save_model.empty()) save_gsm(model, a.save_model);
  return impute(p, model, *a.seed);
}

int run_impute(const ImputeArgs& a) {
  const Profile p = read_profile_csv(a.in);
  if (p.fully_valid()) throw NothingToImputeError();
  const bool gp = a.model == "sm" || a.model == "se" || a.model == "gsm";
  if (gp && !a.seed) throw CLI::RequiredError("--seed (model " + a.model + ")");

  if (!gp) {
    Profile out;
    if (a.model == "mean") out = impute_constant(p, Statistic::mean);
    if (a.model == "median") out = impute_constant(p, Statistic::median);
    if (a.model == "nn") out = impute_nn_mean(p);
    if (a.model == "medfilt") out = impute_median_filter(p, a.window, a.max_passes ? a.max_passes : p.size());
    if (a.model == "idw") out = impute_idw(p, a.power, a.radius);
    write_profile_csv(out, a.out);
    std::cout << "imputed " << p.invalid_count() << " points\n";
    return 0;
  }

  const std::string trace_path = sibling_path(a.out, "_trace.csv");
  try {
    const ImputationResult r = impute_gp(p, a);
    const std::string post = a.posterior.empty() ? sibling_path(a.out, "_posterior.csv") : a.posterior;
    write_profile_csv(r.profile, a.out);
    write_posterior_csv(posterior_rows(r, p.grid()), post);
    std::cout << "imputed " << r.indices.size() << " points; posterior written to " << post << '\n';
  } catch (const FitFailure& e) {
    dump_trace(e, trace_path);
    return kDomainError;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string truth;
  std::string imputed;
  std::string masked;
  std::string posterior;
  std::string out;
};

int run_eval(const EvalArgs& a) {
  const Profile truth = read_profile_csv(a.truth);
  const Profile imputed = read_profile_csv(a.imputed);
  const Profile masked = read_profile_csv(a.masked);
  std::optional<std::vector<PosteriorRow>> rows;
  if (!a.posterior.empty()) rows = read_posterior_csv(a.posterior);
  const EvalReport r = evaluate(truth, imputed, masked, rows ? &*rows : nullptr);
  std::cout << format_eval(r);
  if (!a.out.empty()) {
    std::ofstream os(a.out);
    write_eval_csv(r, os);
    if (!os) throw InvalidArgument("failed writing '" + a.out + "'");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string measured;
  std::string truth;
  std::string imputed;
  std::string posterior;
  std::string title;
  std::string out;
};

int run_plot(const PlotArgs& a) {
  PlotInput in;
  in.measured = read_profile_csv(a.measured);
  if (!a.truth.empty()) in.truth = read_profile_csv(a.truth);
  if (!a.imputed.empty()) in.imputed = read_profile_csv(a.imputed);
  if (!a.posterior.empty()) in.posterior = read_posterior_csv(a.posterior);
  in.title = a.title;
  write_svg(in, a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_experiment(const ExperimentArgs& a) {
  const KeyValueDoc doc = a.config.empty() ? KeyValueDoc{} : KeyValueDoc::load(a.config);
  const std::string prefix = a.out_dir.empty() ? std::string() : a.out_dir + "/" + a.kind + "_";
  if (a.kind == "turned") {
    const auto r = run_turned_experiment(TurnedExperimentConfig::from_document(doc), a.seed);
    std::printf("masked %zu of %zu\ncoverage %.4f\nmean rmse %.4f um (nn %.4f um)\nimputed Rsm %.5f mm\ntime %.1f s\n",
                r.sample_report.n_masked, r.sample_report.n_total, r.sample_report.coverage.value_or(0.0), r.mean_rmse,
                r.nn_rmse, r.imputed_rsm, r.seconds);
    if (!prefix.empty()) {
      write_profile_csv(r.truth, prefix + "truth.csv");
      write_profile_csv(r.masked, prefix + "masked.csv");
      write_profile_csv(r.imputation.profile, prefix + "imputed.csv");
      write_posterior_csv(posterior_rows(r.imputation, r.truth.grid()), prefix + "posterior.csv");
    }
    return 0;
  }
  const auto r = run_chirp_experiment(ChirpExperimentConfig::from_document(doc), a.seed);
  std::printf("masked %zu of %zu (%.2f of the first third)\ngsm rmse %.4f um\n", r.masked.invalid_count(),
              r.masked.size(), r.first_third_masked, r.gsm_rmse);
  for (const auto& [name, v] : r.baseline_rmse) std::printf("%s rmse %.4f um\n", name.c_str(), v);
  std::printf("frequency within tolerance %.4f\ntime %.1f s\n", r.frequency_within_tolerance, r.seconds);
  if (!prefix.empty()) {
    write_profile_csv(r.truth, prefix + "truth.csv");
    write_profile_csv(r.masked, prefix + "masked.csv");
    save_gsm(r.fit.model, prefix + "model.txt");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian process imputation of missing points in 1-D surface profiles"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SimulateArgs sim;
  auto* cs = app.add_subcommand("simulate", "Write a synthetic profile");
  cs->add_option("kind", sim.kind)->required()->check(CLI::IsMember({"turned", "chirp"}));
  cs->add_option("--config", sim.config, "key = value simulation settings")->check(CLI::ExistingFile);
  cs->add_option("--seed", sim.seed)->required();
  cs->add_option("--out", sim.out)->required();

  MaskArgs mask;
  auto* cm = app.add_subcommand("mask", "Mark points of a profile as missing");
  cm->add_option("method", mask.method)->required()->check(CLI::IsMember({"dales", "gradient"}));
  cm->add_option("--in", mask.in)->required()->check(CLI::ExistingFile);
  cm->add_option("--out", mask.out)->required();
  cm->add_option("--count", mask.count, "dales: number of narrowest dales")->capture_default_str();
  cm->add_option("--volume-threshold", mask.volume_threshold, "dales: pruning volume, um*mm")->capture_default_str();
  cm->add_option("--threshold", mask.threshold, "gradient: slope limit, um/mm");
  cm->add_option("--fraction", mask.fraction, "gradient: share of points to mask")->check(CLI::Range(0.0, 1.0));

  ImputeArgs imp;
  auto* ci = app.add_subcommand("impute", "Fill the missing points of a profile");
  ci->add_option("model", imp.model)
      ->required()
      ->check(CLI::IsMember({"sm", "gsm", "se", "mean", "median", "nn", "medfilt", "idw"}));
  ci->add_option("--in", imp.in)->required()->check(CLI::ExistingFile);
  ci->add_option("--out", imp.out)->required();
  ci->add_option("--posterior", imp.posterior, "posterior CSV (default: <out>_posterior.csv)");
  ci->add_option("--seed", imp.seed, "required for sm, se and gsm");
  ci->add_option("--init-rsm", imp.init_rsm, "sm: starting spacing, mm");
  ci->add_option("--init-rq", imp.init_rq, "sm: starting Rq, um");
  ci->add_option("--components", imp.components)->capture_default_str();
  ci->add_option("--restarts", imp.restarts)->capture_default_str();
  ci->add_option("--max-iterations", imp.max_iterations)->capture_default_str();
  ci->add_option("--step-size", imp.step_size)->capture_default_str();
  ci->add_option("--wavelength-start", imp.wavelength_start, "gsm: expected wavelength at the first point, mm");
  ci->add_option("--wavelength-end", imp.wavelength_end, "gsm: expected wavelength at the last point, mm");
  ci->add_option("--representatives", imp.representatives)->capture_default_str();
  ci->add_option("--frequency-lengthscale", imp.frequency_lengthscale_fraction,
                 "gsm: frequency latent lengthscale as a fraction of the extent");
  ci->add_option("--load-model", imp.load_model, "gsm: skip fitting and use a saved model")->check(CLI::ExistingFile);
  ci->add_option("--save-model", imp.save_model, "gsm: write the fitted model");
  ci->add_option("--window", imp.window, "medfilt: odd window length")->capture_default_str();
  ci->add_option("--max-passes", imp.max_passes, "medfilt: 0 means the profile length");
  ci->add_option("--power", imp.power, "idw")->capture_default_str();
  ci->add_option("--radius", imp.radius, "idw: search radius, mm");

  EvalArgs ev;
  auto* ce = app.add_subcommand("eval", "Score an imputed profile against the truth");
  ce->add_option("--truth", ev.truth)->required()->check(CLI::ExistingFile);
  ce->add_option("--imputed", ev.imputed)->required()->check(CLI::ExistingFile);
  ce->add_option("--masked", ev.masked)->required()->check(CLI::ExistingFile);
  ce->add_option("--posterior", ev.posterior)->check(CLI::ExistingFile);
  ce->add_option("--out", ev.out, "metrics CSV");

  PlotArgs pl;
  auto* cp = app.add_subcommand("plot", "Render profiles as SVG");
  cp->add_option("--measured", pl.measured)->required()->check(CLI::ExistingFile);
  cp->add_option("--truth", pl.truth)->check(CLI::ExistingFile);
  cp->add_option("--imputed", pl.imputed)->check(CLI::ExistingFile);
  cp->add_option("--posterior", pl.posterior)->check(CLI::ExistingFile);
  cp->add_option("--title", pl.title);
  cp->add_option("--out", pl.out)->required();

  ExperimentArgs ex;
  auto* cx = app.add_subcommand("experiment", "Run a synthetic end-to-end study");
  cx->add_option("kind", ex.kind)->required()->check(CLI::IsMember({"turned", "chirp"}));
  cx->add_option("--config", ex.config)->check(CLI::ExistingFile);
  cx->add_option("--seed", ex.seed)->required();
  cx->add_option("--out-dir", ex.out_dir)->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (cs->parsed()) return run_simulate(sim);
    if (cm->parsed()) return run_mask(mask);
    if (ci->parsed()) return run_impute(imp);
    if (ce->parsed()) return run_eval(ev);
    if (cp->parsed()) return run_plot(pl);
    return run_experiment(ex);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
}
