#include "surfimp/gp.hpp"

#include <cmath>
#include <numbers>

#include "surfimp/errors.hpp"
#include "surfimp/random.hpp"

namespace surfimp {

Eigen::MatrixXd FactorizedSystem::solve_lower(Eigen::MatrixXd b) const {
  llt_.matrixL().solveInPlace(b);
  return b;
}

double FactorizedSystem::log_det() const {
  const auto& m = llt_.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(m(i, i));
  return 2.0 * acc;
}

Eigen::MatrixXd FactorizedSystem::inverse() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(n, n);
  llt_.matrixL().solveInPlace(linv);
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);
  inv.selfadjointView<Eigen::Lower>().rankUpdate(linv.transpose());
  inv.triangularView<Eigen::StrictlyUpper>() = inv.transpose();
  return inv;
}

FactorizedSystem chol_jittered(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidArgument("chol_jittered needs a non-empty square matrix");
  const double mean_diag = a.diagonal().mean();
  const double scale = mean_diag > 0.0 ? mean_diag : 1e-300;
  for (double rung : kJitterLadder) {
    const double jitter = rung * scale;
    Eigen::MatrixXd m = a;
    if (jitter > 0.0) m.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return FactorizedSystem(std::move(llt), jitter);
  }
  throw NotPositiveDefiniteError("matrix is not positive definite even with maximum jitter (n=" +
                                 std::to_string(a.rows()) + ")");
}

std::size_t StationaryModel::num_params() const {
  return kernel.num_params() + noise_kernel(noise).num_params();
}

std::vector<double> StationaryModel::raw_params() const {
  auto raw = kernel.raw_params();
  const auto nraw = noise_kernel(noise).raw_params();
  raw.insert(raw.end(), nraw.begin(), nraw.end());
  return raw;
}

StationaryModel StationaryModel::with_raw_params(std::span<const double> raw) const {
  if (raw.size() != num_params()) throw InvalidArgument("raw parameter vector has the wrong length");
  const std::size_t nk = kernel.num_params();
  StationaryModel out;
  out.kernel = kernel.with_raw_params(raw.subspan(0, nk));
  out.noise = std::get<NoiseParams>(noise_kernel(noise).with_raw_params(raw.subspan(nk)).params());
  return out;
}

double gaussian_log_density(const Eigen::MatrixXd& a, const Eigen::VectorXd& z, double* jitter) {
  const auto fac = chol_jittered(a);
  if (jitter) *jitter = fac.jitter();
  const Eigen::VectorXd alpha = fac.solve(z);
  const double n = static_cast<double>(z.size());
  return -0.5 * z.dot(alpha) - 0.5 * fac.log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

GaussianLogDensity gaussian_log_density_with_weight(const Eigen::MatrixXd& a, const Eigen::VectorXd& z) {
  const auto fac = chol_jittered(a);
  const Eigen::VectorXd alpha = fac.solve(z);
  const double n = static_cast<double>(z.size());
  GaussianLogDensity out;
  out.jitter = fac.jitter();
  out.value = -0.5 * z.dot(alpha) - 0.5 * fac.log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
  out.weight = fac.inverse();
  out.weight *= -0.5;
  out.weight.noalias() += 0.5 * alpha * alpha.transpose();
  return out;
}

Eigen::MatrixXd training_cov(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise) {
  if (ds.xa.empty()) throw EmptyDatasetError();
  Eigen::MatrixXd a = build_cov(kernel, ds.xa);
  if (noise.kind == NoiseKind::white) {
    a.diagonal().array() += noise.variance;
  } else if (noise.variance > 0.0) {
    a += build_cov(noise_kernel(noise), ds.xa);
  }
  return a;
}

namespace {

Eigen::VectorXd as_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double log_marginal_likelihood(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise) {
  return gaussian_log_density(training_cov(ds, kernel, noise), as_vector(ds.za));
}

MllEvaluation mll_value_and_gradient(const SurfaceDataset& ds, const StationaryModel& model) {
  const auto terms = gaussian_log_density_with_weight(training_cov(ds, model.kernel, model.noise), as_vector(ds.za));
  MllEvaluation out;
  out.value = terms.value;
  out.jitter = terms.jitter;
  out.gradient = contract_grad(model.kernel, ds.xa, terms.weight);
  if (model.noise.kind == NoiseKind::white) {
    out.gradient.push_back(model.noise.variance * terms.weight.trace());
  } else {
    const auto g = contract_grad(noise_kernel(model.noise), ds.xa, terms.weight);
    out.gradient.insert(out.gradient.end(), g.begin(), g.end());
  }
  return out;
}

std::vector<double> mll_gradient(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise) {
  return mll_value_and_gradient(ds, StationaryModel{kernel, noise}).gradient;
}

PosteriorGaussian condition(const Eigen::MatrixXd& train_cov, const Eigen::MatrixXd& cross_cov,
                            Eigen::MatrixXd test_cov, std::span<const double> za, std::vector<double> xm) {
  const auto fac = chol_jittered(train_cov);
  PosteriorGaussian out;
  out.xm = std::move(xm);
  out.jitter = fac.jitter();
  out.mean = cross_cov * fac.solve(as_vector(za));
  const Eigen::MatrixXd v = fac.solve_lower(cross_cov.transpose());
  test_cov.noalias() -= v.transpose() * v;
  out.cov = 0.5 * (test_cov + test_cov.transpose());
  return out;
}

PosteriorGaussian posterior(const SurfaceDataset& ds, const Kernel& kernel, const NoiseParams& noise,
                            std::span<const double> xm, bool include_noise) {
  if (ds.xa.empty()) throw EmptyDatasetError();
  if (xm.empty()) throw InvalidArgument("posterior needs at least one prediction location");
  Eigen::MatrixXd test = build_cov(kernel, xm);
  if (include_noise) {
    if (noise.kind == NoiseKind::white) {
      test.diagonal().array() += noise.variance;
    } else if (noise.variance > 0.0) {
      test += build_cov(noise_kernel(noise), xm);
    }
  }
  Eigen::MatrixXd cross = build_cov(kernel, xm, ds.xa);
  if (noise.kind == NoiseKind::colored && noise.variance > 0.0 && include_noise) {
    // Colored noise is correlated between measured and predicted heights.
    cross += build_cov(noise_kernel(noise), xm, ds.xa);
  }
  return condition(training_cov(ds, kernel, noise), cross, std::move(test), ds.za,
                   std::vector<double>(xm.begin(), xm.end()));
}

Eigen::MatrixXd sample_posterior(const PosteriorGaussian& p, std::uint64_t seed, std::size_t count) {
  const Eigen::Index m = p.mean.size();
  if (p.cov.rows() != m || p.cov.cols() != m) throw InvalidArgument("posterior mean and covariance disagree");
  const auto fac = chol_jittered(p.cov);
  const Eigen::MatrixXd l = fac.lower();
  NormalGenerator normal(seed);
  Eigen::MatrixXd draws(static_cast<Eigen::Index>(count), m);
  Eigen::VectorXd eps(m);
  for (std::size_t r = 0; r < count; ++r) {
    for (Eigen::Index i = 0; i < m; ++i) eps(i) = normal();
    draws.row(static_cast<Eigen::Index>(r)) = (p.mean + l.triangularView<Eigen::Lower>() * eps).transpose();
  }
  return draws;
}

ImputationResult impute_with(const Profile& p, const PosteriorProvider& provider, std::uint64_t seed) {
  if (p.valid_count() < 2) throw InsufficientDataError("imputation needs at least two valid points");
  if (p.invalid_count() == 0) throw NothingToImputeError();

  const double offset = valid_mean(p);
  const SurfaceDataset centered = split_dataset(p).centered(offset);
  const PosteriorGaussian post = provider(centered);
  const Eigen::MatrixXd draw = sample_posterior(post, seed, 1);

  ImputationResult out;
  out.indices = centered.im;
  out.jitter = post.jitter;
  const std::size_t m = centered.im.size();
  out.sample.resize(m);
  out.mean.resize(m);
  out.lo95.resize(m);
  out.hi95.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double sd = std::sqrt(std::max(post.cov(kk, kk), 0.0));
    out.sample[k] = draw(0, kk) + offset;
    out.mean[k] = post.mean(kk) + offset;
    out.lo95[k] = out.mean[k] - kZ975 * sd;
    out.hi95[k] = out.mean[k] + kZ975 * sd;
  }
  out.profile = p.with_filled(out.indices, out.sample);
  return out;
}

ImputationResult impute(const Profile& p, const StationaryModel& model, std::uint64_t seed) {
  return impute_with(
      p,
      [&](const SurfaceDataset& ds) { return posterior(ds, model.kernel, model.noise, ds.xm, /*include_noise=*/true); },
      seed);
}

}  // namespace surfimp
