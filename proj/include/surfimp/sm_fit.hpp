#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "surfimp/gp.hpp"
#include "surfimp/optimizer.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

/// Q-component SM start: the first component at f = 1/spacing with weight
/// `variance`, the others at the harmonics m/spacing (m = 2..Q) with weight
/// variance/(10Q). Every component gets v = (0.05 f)^2.
SMParams sm_initial_params(double spacing, double variance, std::size_t components = 5);

struct StationaryFitConfig {
  std::size_t restarts = 3;      // the given start plus restarts-1 perturbed copies
  double perturbation = 0.2;     // uniform half-width added to each log-parameter
  OptConfig opt;
};

struct StationaryFitResult {
  StationaryModel model;
  double log_likelihood = 0.0;
  OptTrace trace;                       // trace of the winning restart
  std::size_t best_restart = 0;
  std::vector<double> restart_values;   // best objective per restart, NaN if it failed to start
};

/// Maximizes the marginal log likelihood of the mean-removed valid data over
/// all log-parameters of `start`. Restarts whose start point is not finite are
/// skipped; FitFailure is raised if none produced a finite objective.
StationaryFitResult fit_stationary(const SurfaceDataset& centered, const StationaryModel& start,
                                   const StationaryFitConfig& cfg = {});

struct SmFitConfig {
  std::size_t components = 5;
  std::optional<double> init_rsm;       // defaults to rsm() of the valid data
  std::optional<double> init_variance;  // defaults to rq()^2 of the valid data
  double noise_fraction = 0.01;         // initial white-noise variance relative to init_variance
  StationaryFitConfig fit;
};

/// Fits an SM kernel with white noise to the valid part of `p`.
StationaryFitResult fit_sm(const Profile& p, const SmFitConfig& cfg = {});

struct SeFitConfig {
  std::optional<double> init_lengthscale;  // defaults to 5 grid steps
  double noise_fraction = 0.01;
  StationaryFitConfig fit;
};

/// Ordinary-kriging style SE fit, used as a simple GP reference model.
StationaryFitResult fit_se(const Profile& p, const SeFitConfig& cfg = {});

}  // namespace surfimp
