#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace surfimp {

// Heights are in um and abscissae in mm throughout; variances are um^2.

struct SEParams {
  double variance = 1.0;
  double lengthscale = 1.0;
};

/// Periodic (exp-sine-squared) covariance used for turned-profile simulation.
struct PeriodicParams {
  double variance = 1.0;
  double shape = 1.0;
  double period = 1.0;
};

struct SMComponent {
  double weight = 1.0;         // um^2
  double frequency = 0.0;      // 1/mm
  double freq_variance = 0.0;  // 1/mm^2
};

struct SMParams {
  std::vector<SMComponent> components;
};

enum class NoiseKind { white, colored };

struct NoiseParams {
  NoiseKind kind = NoiseKind::white;
  double variance = 0.0;
  double corr_length = 1.0;  // only used when colored
};

using KernelParams = std::variant<SEParams, PeriodicParams, SMParams, NoiseParams>;

double k_se(double x, double y, const SEParams& p);
double k_periodic(double x, double y, const PeriodicParams& p);
double k_sm(double tau, const SMParams& p);
/// White noise is sigma^2 on coincident locations; distinct grid points never coincide.
double k_noise(double xi, double xj, const NoiseParams& p);

/// Stationary covariance function with parameters held in log space for
/// optimization. Gradients are always with respect to the log-parameters.
class Kernel {
 public:
  Kernel() : Kernel(SEParams{}) {}
  explicit Kernel(KernelParams params);

  const KernelParams& params() const { return params_; }
  std::string name() const;

  double operator()(double x, double y) const { return at_lag(x - y); }
  double at_lag(double tau) const;

  std::size_t num_params() const;
  std::vector<std::string> param_names() const;
  std::vector<double> raw_params() const;
  Kernel with_raw_params(std::span<const double> raw) const;

  /// d k(tau) / d raw_p for all p, written into `out` (size num_params()).
  void grad_at_lag(double tau, std::span<double> out) const;

 private:
  KernelParams params_;
};

Kernel noise_kernel(const NoiseParams& noise);

/// Element-wise covariance matrix; symmetric (exactly) when ys is omitted.
Eigen::MatrixXd build_cov(const Kernel& k, std::span<const double> xs,
                          std::optional<std::span<const double>> ys = std::nullopt);

/// dK/d(raw parameter `param_index`) on xs.
Eigen::MatrixXd kernel_grad(const Kernel& k, std::span<const double> xs, std::size_t param_index);

/// sum_ij W_ij dK_ij/d raw_p for every parameter p. W is treated as a full
/// (not necessarily symmetric) weight matrix over xs x xs.
std::vector<double> contract_grad(const Kernel& k, std::span<const double> xs, const Eigen::MatrixXd& w);

// ---- non-stationary pieces ------------------------------------------------

double k_gibbs(double x, double y, double lx, double ly);

struct LatentPoint {
  double weight = 1.0;       // w(x), um
  double lengthscale = 1.0;  // lambda(x), mm
  double frequency = 0.0;    // f(x), 1/mm
};

double k_gsm(double x, double y, const LatentPoint& a, const LatentPoint& b);

/// Latent functions evaluated at a set of locations (aligned vectors).
struct PointwiseLatents {
  std::vector<double> weight;
  std::vector<double> lengthscale;
  std::vector<double> frequency;

  std::size_t size() const { return weight.size(); }
  LatentPoint at(std::size_t i) const { return {weight[i], lengthscale[i], frequency[i]}; }
  void validate(std::size_t expected, double nyquist) const;
};

Eigen::MatrixXd gibbs_cov(std::span<const double> xs, std::span<const double> lengthscales);

Eigen::MatrixXd gsm_cov(std::span<const double> xs, const PointwiseLatents& lx);
Eigen::MatrixXd gsm_cov(std::span<const double> xs, const PointwiseLatents& lx, std::span<const double> ys,
                        const PointwiseLatents& ly);

enum class LatentKind { weight = 0, lengthscale = 1, frequency = 2 };

/// dK/d log(latent `kind` at point `index`) for the GSM matrix on xs.
Eigen::MatrixXd gsm_grad(std::span<const double> xs, const PointwiseLatents& lx, LatentKind kind,
                         std::size_t index);

/// Per-point contractions g_h[i] = sum_ab W_ab dK_ab / d log h(x_i) for the
/// three latents, with W symmetric.
struct GsmPointGrad {
  std::vector<double> weight;
  std::vector<double> lengthscale;
  std::vector<double> frequency;
};
GsmPointGrad gsm_contract_grad(std::span<const double> xs, const PointwiseLatents& lx, const Eigen::MatrixXd& w);

}  // namespace surfimp
