#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surfimp/gp.hpp"
#include "surfimp/keyvalue.hpp"
#include "surfimp/kernels.hpp"
#include "surfimp/optimizer.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

enum class LatentTransform { log, logit_scaled };

/// A latent function: an SE-prior GP over the representative locations,
/// interpolated elsewhere by its noise-free posterior mean and then mapped to
/// positive values by `transform`.
struct LatentFunctionSpec {
  std::vector<double> locations;        // x_L, mm, strictly increasing
  std::vector<double> representatives;  // unconstrained values at x_L
  double variance = 1.0;                // SE prior variance
  double lengthscale = 1.0;             // SE prior lengthscale, mm
  double mean = 0.0;                    // constant prior mean
  LatentTransform transform = LatentTransform::log;

  std::size_t size() const { return locations.size(); }
  void validate() const;
};

/// One-component generalized spectral mixture with white measurement noise.
struct GsmModel {
  LatentFunctionSpec weight;
  LatentFunctionSpec lengthscale;
  LatentFunctionSpec frequency;  // logit-scaled, bounded by `nyquist`
  double noise_variance = 1e-2;  // um^2
  double nyquist = 1.0;          // 1/mm

  void validate() const;
  const LatentFunctionSpec& latent(LatentKind kind) const;
  LatentFunctionSpec& latent(LatentKind kind);

  /// 3P + 7 unconstrained parameters:
  /// [v_w, v_lambda, v_f, log noise, log var_w, log len_w, log var_lambda,
  ///  log len_lambda, log var_f, log len_f]. The prior means stay fixed.
  std::size_t num_params() const;
  std::vector<double> raw_params() const;
  GsmModel with_raw_params(std::span<const double> raw) const;
};

/// Jitter added to the latent prior covariance, relative to its variance.
inline constexpr double kLatentJitter = 1e-8;

/// Cholesky factor of the jittered latent prior on x_L for one set of latent
/// hyperparameters.
class WhiteningState {
 public:
  explicit WhiteningState(const LatentFunctionSpec& spec);

  const Eigen::MatrixXd& lower() const { return lower_; }
  bool current_for(const LatentFunctionSpec& spec) const;

 private:
  std::vector<double> locations_;
  double variance_;
  double lengthscale_;
  Eigen::MatrixXd lower_;
};

/// v = L^{-1}(u - mean) and back. Both throw ContractViolation when `state`
/// was built for different hyperparameters or locations.
std::vector<double> whiten(std::span<const double> representatives, const LatentFunctionSpec& spec,
                           const WhiteningState& state);
std::vector<double> unwhiten(std::span<const double> v, const LatentFunctionSpec& spec, const WhiteningState& state);

/// Posterior mean of the unconstrained latent at xs.
std::vector<double> latent_mean(const LatentFunctionSpec& spec, std::span<const double> xs);

/// latent_mean followed by the transform; `nyquist` is the upper bound of the
/// logit-scaled transform and ignored for log latents.
std::vector<double> latent_eval(const LatentFunctionSpec& spec, std::span<const double> xs, double nyquist);

PointwiseLatents gsm_latents(const GsmModel& model, std::span<const double> xs);

Eigen::MatrixXd gsm_build_cov(const GsmModel& model, std::span<const double> xs);
Eigen::MatrixXd gsm_build_cov(const GsmModel& model, std::span<const double> xs, std::span<const double> ys);

/// Sum over the three latents of the standard-normal log density of their
/// whitened representatives.
double latent_log_prior(const GsmModel& model);

/// log N(za | 0, K + noise I) + latent_log_prior.
double log_posterior(const GsmModel& model, const SurfaceDataset& centered);

struct GsmEvaluation {
  double value = 0.0;
  std::vector<double> gradient;  // over GsmModel::raw_params()
  double jitter = 0.0;
};
GsmEvaluation log_posterior_with_gradient(const GsmModel& model, const SurfaceDataset& centered);

/// The optimizer's objective: the log posterior of like.with_raw_params(raw),
/// evaluated from the whitened parameters directly.
GsmEvaluation log_posterior_at(const GsmModel& like, std::span<const double> raw, const SurfaceDataset& centered,
                               bool with_gradient);

struct GsmFitResult {
  GsmModel model;
  double log_posterior = 0.0;
  OptTrace trace;
};

/// Maximizes the log posterior from `init` on the mean-removed valid data.
/// Throws FitFailure carrying the last finite iterate when the objective
/// stops being finite.
GsmFitResult fit_gsm(const Profile& p, const GsmModel& init, const OptConfig& cfg);

PosteriorGaussian gsm_posterior(const SurfaceDataset& centered, const GsmModel& model, std::span<const double> xm,
                                bool include_noise = false);
ImputationResult impute(const Profile& p, const GsmModel& model, std::uint64_t seed);

/// Starting point for a fit on `p`: P evenly spaced representatives over the
/// profile extent, weight mean log Rq, lengthscale mean log of the median of
/// the expected wavelengths, and frequency representatives following a
/// wavelength ramp that is linear in x between the two given end values (mm).
struct GsmInitConfig {
  std::size_t representatives = 100;
  double wavelength_start = 0.0;
  double wavelength_end = 0.0;
  double latent_variance = 1.0;
  double latent_lengthscale_fraction = 0.2;  // of the profile extent
  std::optional<double> frequency_lengthscale_fraction;  // frequency latent only; defaults to the above
  double noise_fraction = 0.01;              // of Rq^2
};
GsmModel gsm_initial_model(const Profile& p, const GsmInitConfig& cfg);

KeyValueDoc to_document(const GsmModel& model);
GsmModel gsm_from_document(const KeyValueDoc& doc);
void save_gsm(const GsmModel& model, const std::string& path);
GsmModel load_gsm(const std::string& path);
std::string to_string(LatentTransform t);

}  // namespace surfimp
