#include "surfimp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "surfimp/baselines.hpp"
#include "surfimp/errors.hpp"

namespace surfimp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Grid1D grid_from(const KeyValueDoc& doc, const Grid1D& fallback) {
  return Grid1D(doc.number_or("x0", fallback.x0()), doc.number_or("dx", fallback.dx()),
                doc.count_or("n", fallback.size()));
}

const std::vector<std::string_view> kTurnedKeys{"variance", "shape", "period", "noise_variance", "noise_corr",
                                                "x0",       "dx",    "n"};
const std::vector<std::string_view> kChirpKeys{"amplitude", "k_max", "noise_variance", "noise_corr", "x0", "dx", "n"};

TurnedSimConfig read_turned(const KeyValueDoc& doc, TurnedSimConfig c) {
  c.variance = doc.number_or("variance", c.variance);
  c.shape = doc.number_or("shape", c.shape);
  c.period = doc.number_or("period", c.period);
  c.noise_variance = doc.number_or("noise_variance", c.noise_variance);
  c.noise_corr = doc.number_or("noise_corr", c.noise_corr);
  c.grid = grid_from(doc, c.grid);
  c.validate();
  return c;
}

ChirpConfig read_chirp(const KeyValueDoc& doc, ChirpConfig c) {
  c.amplitude = doc.number_or("amplitude", c.amplitude);
  c.k_max = doc.count_or("k_max", c.k_max);
  c.noise_variance = doc.number_or("noise_variance", c.noise_variance);
  c.noise_corr = doc.number_or("noise_corr", c.noise_corr);
  c.grid = grid_from(doc, c.grid);
  c.validate();
  return c;
}

void read_opt(const KeyValueDoc& doc, OptConfig& o) {
  o.max_iterations = doc.count_or("max_iterations", o.max_iterations);
  o.step_size = doc.number_or("step_size", o.step_size);
  o.validate();
}

std::vector<std::string_view> joined(std::vector<std::string_view> a, std::initializer_list<std::string_view> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TurnedSimConfig turned_config_from(const KeyValueDoc& doc) {
  doc.require_known(kTurnedKeys);
  return read_turned(doc, {});
}

ChirpConfig chirp_config_from(const KeyValueDoc& doc) {
  doc.require_known(kChirpKeys);
  return read_chirp(doc, {});
}

double slope_quantile_threshold(const Profile& p, std::size_t begin, std::size_t end, double fraction) {
  if (begin >= end || end > p.size()) throw InvalidArgument("slope window is empty or out of range");
  if (!(fraction > 0.0) || !(fraction < 1.0)) throw InvalidArgument("masked fraction must lie in (0, 1)");
  const auto s = slope_magnitude(p);
  std::vector<double> w(s.begin() + static_cast<std::ptrdiff_t>(begin), s.begin() + static_cast<std::ptrdiff_t>(end));
  std::sort(w.begin(), w.end());
  const auto k = static_cast<std::size_t>((1.0 - fraction) * static_cast<double>(w.size()));
  return w[std::min(k, w.size() - 1)];
}

double masked_rmse(const Profile& truth, const Profile& masked, const std::vector<double>& z) {
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (masked.is_valid(i)) continue;
    const double d = z[i] - truth.z()[i];
    se += d * d;
    ++n;
  }
  if (n == 0) throw NothingToImputeError();
  return std::sqrt(se / static_cast<double>(n));
}

std::size_t longest_missing_run(const Profile& p) {
  std::size_t best = 0;
  std::size_t cur = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cur = p.is_valid(i) ? 0 : cur + 1;
    best = std::max(best, cur);
  }
  return best;
}

// ---------------------------------------------------------------------------

TurnedExperimentConfig::TurnedExperimentConfig() {
  fit.restarts = 3;
  fit.opt.max_iterations = 250;
  fit.opt.step_size = 0.05;
}

TurnedExperimentConfig TurnedExperimentConfig::from_document(const KeyValueDoc& doc) {
  doc.require_known(joined(kTurnedKeys, {"dales", "dale_volume_threshold", "components", "init_rsm", "init_variance",
                                         "restarts", "max_iterations", "step_size"}));
  TurnedExperimentConfig c;
  c.sim = read_turned(doc, c.sim);
  c.dales = doc.count_or("dales", c.dales);
  c.dale_volume_threshold = doc.number_or("dale_volume_threshold", c.dale_volume_threshold);
  c.components = doc.count_or("components", c.components);
  if (doc.has("init_rsm")) c.init_rsm = doc.number("init_rsm");
  if (doc.has("init_variance")) c.init_variance = doc.number("init_variance");
  c.fit.restarts = doc.count_or("restarts", c.fit.restarts);
  read_opt(doc, c.fit.opt);
  return c;
}

TurnedExperimentResult run_turned_experiment(const TurnedExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = Clock::now();
  TurnedExperimentResult r;
  TurnedSimConfig sim = cfg.sim;
  sim.seed = seed;
  r.truth = simulate_turned(sim);
  r.masked = mask_smallest_width_dales(r.truth, cfg.dales, cfg.dale_volume_threshold);

  SmFitConfig fc;
  fc.components = cfg.components;
  fc.init_rsm = cfg.init_rsm.value_or(sim.period);
  fc.init_variance = cfg.init_variance.value_or(sim.variance + sim.noise_variance);
  fc.fit = cfg.fit;
  fc.fit.opt.seed = seed;
  r.fit = fit_sm(r.masked, fc);
  r.imputation = impute(r.masked, r.fit.model, seed);

  const auto rows = posterior_rows(r.imputation, r.truth.grid());
  r.sample_report = evaluate(r.truth, r.imputation.profile, r.masked, &rows);
  std::vector<double> zmean = r.truth.z();
  for (std::size_t k = 0; k < r.imputation.indices.size(); ++k) zmean[r.imputation.indices[k]] = r.imputation.mean[k];
  r.mean_rmse = masked_rmse(r.truth, r.masked, zmean);
  r.nn_rmse = masked_rmse(r.truth, r.masked, impute_nn_mean(r.masked).z());
  r.imputed_rsm = rsm(r.imputation.profile);
  r.seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

ChirpExperimentConfig::ChirpExperimentConfig() {
  sim.grid = Grid1D(0.0, 1.25e-4, 1000);
  init.representatives = 100;
  init.frequency_lengthscale_fraction = 0.024;
  opt.max_iterations = 800;
  opt.step_size = 0.01;
}

ChirpExperimentConfig ChirpExperimentConfig::from_document(const KeyValueDoc& doc) {
  doc.require_known(joined(kChirpKeys, {"masked_fraction", "representatives", "latent_lengthscale_fraction",
                                        "frequency_lengthscale_fraction", "max_iterations", "step_size",
                                        "median_window", "frequency_tolerance"}));
  ChirpExperimentConfig c;
  c.sim = read_chirp(doc, c.sim);
  c.masked_fraction = doc.number_or("masked_fraction", c.masked_fraction);
  c.init.representatives = doc.count_or("representatives", c.init.representatives);
  c.init.latent_lengthscale_fraction = doc.number_or("latent_lengthscale_fraction", c.init.latent_lengthscale_fraction);
  c.init.frequency_lengthscale_fraction =
      doc.number_or("frequency_lengthscale_fraction", *c.init.frequency_lengthscale_fraction);
  read_opt(doc, c.opt);
  c.median_window = doc.count_or("median_window", c.median_window);
  c.frequency_tolerance = doc.number_or("frequency_tolerance", c.frequency_tolerance);
  return c;
}

ChirpExperimentResult run_chirp_experiment(const ChirpExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = Clock::now();
  ChirpExperimentResult r;
  ChirpConfig sim = cfg.sim;
  sim.seed = seed;
  r.truth = simulate_chirp(sim);
  const auto wavelengths = chirp_wavelengths(sim);

  const std::size_t third = r.truth.size() / 3;
  r.slope_threshold = slope_quantile_threshold(r.truth, 0, third, cfg.masked_fraction);
  r.masked = mask_gradient(r.truth, r.slope_threshold);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < third; ++i) hit += r.masked.is_valid(i) ? 0 : 1;
  r.first_third_masked = static_cast<double>(hit) / static_cast<double>(third);

  GsmInitConfig ic = cfg.init;
  ic.wavelength_start = wavelengths.front();
  ic.wavelength_end = wavelengths.back();
  const GsmModel start = gsm_initial_model(r.masked, ic);
  OptConfig oc = cfg.opt;
  oc.seed = seed;
  r.fit = fit_gsm(r.masked, start, oc);

  const double offset = valid_mean(r.masked);
  const SurfaceDataset ds = split_dataset(r.masked).centered(offset);
  const PosteriorGaussian post = gsm_posterior(ds, r.fit.model, ds.xm, false);
  std::vector<double> zg = r.truth.z();
  for (std::size_t k = 0; k < ds.im.size(); ++k) zg[ds.im[k]] = post.mean(static_cast<Eigen::Index>(k)) + offset;
  r.gsm_rmse = masked_rmse(r.truth, r.masked, zg);

  const double radius = static_cast<double>(longest_missing_run(r.masked) + 1) * r.truth.grid().dx();
  r.baseline_rmse["mean"] = masked_rmse(r.truth, r.masked, impute_constant(r.masked, Statistic::mean).z());
  r.baseline_rmse["nn"] = masked_rmse(r.truth, r.masked, impute_nn_mean(r.masked).z());
  r.baseline_rmse["medfilt"] =
      masked_rmse(r.truth, r.masked, impute_median_filter(r.masked, cfg.median_window, r.truth.size()).z());
  r.baseline_rmse["idw"] = masked_rmse(r.truth, r.masked, impute_idw(r.masked, 2.0, radius).z());

  const auto f = latent_eval(r.fit.model.frequency, ds.xm, r.fit.model.nyquist);
  std::size_t ok = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double truth_f = 1.0 / wavelengths[ds.im[k]];
    if (std::abs(f[k] - truth_f) <= cfg.frequency_tolerance * truth_f) ++ok;
  }
  r.frequency_within_tolerance = static_cast<double>(ok) / static_cast<double>(f.size());
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace surfimp
