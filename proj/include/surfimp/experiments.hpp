#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surfimp/gp.hpp"
#include "surfimp/gsm.hpp"
#include "surfimp/io.hpp"
#include "surfimp/keyvalue.hpp"
#include "surfimp/sm_fit.hpp"
#include "surfimp/synthesis.hpp"

namespace surfimp {

/// Turned profile: simulate, mask the narrowest dales, fit SM, impute by
/// posterior sampling and compare against nearest-neighbor filling.
struct TurnedExperimentConfig {
  TurnedSimConfig sim;
  std::size_t dales = 5;
  double dale_volume_threshold = 0.03;  // um*mm
  std::size_t components = 5;
  std::optional<double> init_rsm;       // defaults to the simulated period
  std::optional<double> init_variance;  // defaults to signal plus noise variance
  StationaryFitConfig fit;

  TurnedExperimentConfig();
  static TurnedExperimentConfig from_document(const KeyValueDoc& doc);
};

struct TurnedExperimentResult {
  Profile truth;
  Profile masked;
  ImputationResult imputation;
  StationaryFitResult fit;
  EvalReport sample_report;   // imputed draw vs truth, with interval coverage
  double mean_rmse = 0.0;     // posterior mean vs truth at masked points
  double nn_rmse = 0.0;
  double imputed_rsm = 0.0;
  double seconds = 0.0;
};

TurnedExperimentResult run_turned_experiment(const TurnedExperimentConfig& cfg, std::uint64_t seed);

/// Chirp profile: simulate, mask steep flanks, fit a one-component GSM from a
/// wavelength ramp and compare its posterior mean against every baseline.
struct ChirpExperimentConfig {
  ChirpConfig sim;
  double masked_fraction = 0.45;        // target share of the first third above the slope threshold
  GsmInitConfig init;                   // wavelength ramp filled in from the simulated profile ends
  OptConfig opt;
  std::size_t median_window = 5;
  double frequency_tolerance = 0.25;    // relative, for the latent frequency check

  ChirpExperimentConfig();
  static ChirpExperimentConfig from_document(const KeyValueDoc& doc);
};

struct ChirpExperimentResult {
  Profile truth;
  Profile masked;
  GsmFitResult fit;
  double slope_threshold = 0.0;
  double first_third_masked = 0.0;
  double gsm_rmse = 0.0;                        // posterior mean
  std::map<std::string, double> baseline_rmse;  // mean, nn, medfilt, idw
  double frequency_within_tolerance = 0.0;      // share of masked points
  double seconds = 0.0;
};

ChirpExperimentResult run_chirp_experiment(const ChirpExperimentConfig& cfg, std::uint64_t seed);

/// Config documents for the simulators; unknown keys are errors.
TurnedSimConfig turned_config_from(const KeyValueDoc& doc);
ChirpConfig chirp_config_from(const KeyValueDoc& doc);

/// Slope threshold that leaves `fraction` of the points in [begin, end) above it.
double slope_quantile_threshold(const Profile& p, std::size_t begin, std::size_t end, double fraction);

/// RMSE over the points that are missing in `masked`.
double masked_rmse(const Profile& truth, const Profile& masked, const std::vector<double>& z);

/// Length of the longest run of missing points.
std::size_t longest_missing_run(const Profile& p);

}  // namespace surfimp
