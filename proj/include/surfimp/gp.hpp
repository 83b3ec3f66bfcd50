#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "surfimp/kernels.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

/// Cholesky factor of a symmetric matrix plus the diagonal jitter that had to
/// be added for the factorization to succeed.
class FactorizedSystem {
 public:
  FactorizedSystem(Eigen::LLT<Eigen::MatrixXd> llt, double jitter) : llt_(std::move(llt)), jitter_(jitter) {}

  double jitter() const { return jitter_; }
  Eigen::Index size() const { return llt_.rows(); }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }
  /// L^{-1} b
  Eigen::MatrixXd solve_lower(Eigen::MatrixXd b) const;
  double log_det() const;
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_;
};

/// Jitter ladder relative to mean(diag(A)).
inline constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4};

/// Factorizes A + j*I, climbing the jitter ladder until the factorization
/// succeeds. Throws NotPositiveDefiniteError past the last rung.
FactorizedSystem chol_jittered(const Eigen::MatrixXd& a);

/// A stationary covariance plus an additive Gaussian noise model.
struct StationaryModel {
  Kernel kernel;
  NoiseParams noise;

  std::size_t num_params() const;
  std::vector<double> raw_params() const;
  StationaryModel with_raw_params(std::span<const double> raw) const;
};

/// Value of log N(z | 0, A) together with W = (alpha alpha^T - A^{-1}) / 2, so
/// that dJ/dtheta = sum_ij W_ij dA_ij/dtheta.
struct GaussianLogDensity {
  double value = 0.0;
  double jitter = 0.0;
  Eigen::MatrixXd weight;
};

double gaussian_log_density(const Eigen::MatrixXd& a, const Eigen::VectorXd& z, double* jitter = nullptr);
GaussianLogDensity gaussian_log_density_with_weight(const Eigen::MatrixXd& a, const Eigen::VectorXd& z);

Eigen::MatrixXd training_cov(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise);

double log_marginal_likelihood(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise);

/// Gradient over [kernel log-params..., noise log-params...].
std::vector<double> mll_gradient(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise);

struct MllEvaluation {
  double value = 0.0;
  std::vector<double> gradient;
  double jitter = 0.0;
};
MllEvaluation mll_value_and_gradient(const SurfaceDataset& ds, const StationaryModel& model);

struct PosteriorGaussian {
  std::vector<double> xm;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double jitter = 0.0;  // jitter used to factor the training covariance
};

/// Conditions the zero-mean GP on (xa, za). With include_noise the noise
/// covariance at xm is added, giving the distribution of measured heights
/// rather than of the noise-free signal.
PosteriorGaussian posterior(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise,
                            std::span<const double> xm, bool include_noise = false);

/// Conditioning from precomputed blocks: K_aa + Omega, K_ma and K_mm (+ Omega_mm).
PosteriorGaussian condition(const Eigen::MatrixXd& train_cov, const Eigen::MatrixXd& cross_cov,
                            Eigen::MatrixXd test_cov, std::span<const double> za, std::vector<double> xm);

/// `count` draws (one per row) of mean + L*eps with L = chol_jittered(cov).
Eigen::MatrixXd sample_posterior(const PosteriorGaussian& p, std::uint64_t seed, std::size_t count);

inline constexpr double kZ975 = 1.959963984540054;

struct ImputationResult {
  Profile profile;                // imputed copy, fully valid
  std::vector<std::size_t> indices;  // imputed grid indices
  std::vector<double> sample;     // the draw written into the profile
  std::vector<double> mean;       // posterior mean (height scale restored)
  std::vector<double> lo95;
  std::vector<double> hi95;
  double jitter = 0.0;
};

/// Produces the predictive distribution at the missing points of a
/// mean-removed dataset.
using PosteriorProvider = std::function<PosteriorGaussian(const SurfaceDataset& centered)>;

ImputationResult impute_with(const Profile& p, const PosteriorProvider& provider, std::uint64_t seed);
ImputationResult impute(const Profile& p, const StationaryModel& model, std::uint64_t seed);

}  // namespace surfimp
