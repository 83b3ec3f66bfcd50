#include "surfimp/sm_fit.hpp"

#include <cmath>
#include <limits>

#include "surfimp/errors.hpp"
#include "surfimp/random.hpp"

namespace surfimp {

SMParams sm_initial_params(double spacing, double variance, std::size_t components) {
  if (!(spacing > 0.0) || !(variance > 0.0)) throw InvalidArgument("SM initialization needs positive spacing and variance");
  if (components == 0) throw InvalidArgument("SM kernel needs at least one component");
  SMParams p;
  const double q = static_cast<double>(components);
  for (std::size_t m = 1; m <= components; ++m) {
    const double f = static_cast<double>(m) / spacing;
    const double w = m == 1 ? variance : variance / (10.0 * q);
    p.components.push_back({w, f, (0.05 * f) * (0.05 * f)});
  }
  return p;
}

StationaryFitResult fit_stationary(const SurfaceDataset& centered, const StationaryModel& start,
                                   const StationaryFitConfig& cfg) {
  if (centered.n_valid() < 2) throw InsufficientDataError("fitting needs at least two valid points");
  if (cfg.restarts == 0) throw InvalidArgument("at least one restart is required");
  cfg.opt.validate();

  auto objective = [&](std::span<const double> raw, std::span<double> grad) {
    try {
      const auto eval = mll_value_and_gradient(centered, start.with_raw_params(raw));
      std::copy(eval.gradient.begin(), eval.gradient.end(), grad.begin());
      return eval.value;
    } catch (const NotPositiveDefiniteError&) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  const auto x0 = start.raw_params();
  NormalGenerator rng(cfg.opt.seed);
  StationaryFitResult out;
  std::optional<OptResult> best;
  std::vector<double> last_params = x0;
  std::vector<double> last_trace;

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::vector<double> xr = x0;
    if (r > 0) {
      for (double& v : xr) v += cfg.perturbation * (2.0 * rng.uniform() - 1.0);
    }
    try {
      auto res = maximize(objective, xr, cfg.opt);
      out.restart_values.push_back(res.value);
      last_params = res.x;
      last_trace = res.trace.objective;
      if (!best || res.value > best->value) {
        best = std::move(res);
        out.best_restart = r;
      }
    } catch (const InvalidStartError&) {
      out.restart_values.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (!best) throw FitFailure("marginal likelihood was not finite at any start point", last_params, last_trace);

  out.model = start.with_raw_params(best->x);
  out.log_likelihood = best->value;
  out.trace = std::move(best->trace);
  return out;
}

StationaryFitResult fit_sm(const Profile& p, const SmFitConfig& cfg) {
  const double offset = valid_mean(p);
  const SurfaceDataset ds = split_dataset(p).centered(offset);
  const double spacing = cfg.init_rsm ? *cfg.init_rsm : rsm(p);
  double variance = 0.0;
  if (cfg.init_variance) {
    variance = *cfg.init_variance;
  } else {
    const double r = rq(p);
    variance = r * r;
  }
  if (!(variance > 0.0)) throw InvalidArgument("profile has zero height variance");
  StationaryModel start{Kernel(sm_initial_params(spacing, variance, cfg.components)),
                        NoiseParams{NoiseKind::white, cfg.noise_fraction * variance, 1.0}};
  return fit_stationary(ds, start, cfg.fit);
}

StationaryFitResult fit_se(const Profile& p, const SeFitConfig& cfg) {
  const double offset = valid_mean(p);
  const SurfaceDataset ds = split_dataset(p).centered(offset);
  const double r = rq(p);
  if (!(r > 0.0)) throw InvalidArgument("profile has zero height variance");
  const double ls = cfg.init_lengthscale ? *cfg.init_lengthscale : 5.0 * p.grid().dx();
  StationaryModel start{Kernel(SEParams{r * r, ls}), NoiseParams{NoiseKind::white, cfg.noise_fraction * r * r, 1.0}};
  return fit_stationary(ds, start, cfg.fit);
}

}  // namespace surfimp
