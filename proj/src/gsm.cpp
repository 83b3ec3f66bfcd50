#include "surfimp/gsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "surfimp/baselines.hpp"
#include "surfimp/errors.hpp"
#include "surfimp/keyvalue.hpp"

namespace surfimp {

namespace {

constexpr LatentKind kLatents[] = {LatentKind::weight, LatentKind::lengthscale, LatentKind::frequency};

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double transform(double u, LatentTransform t, double nyquist) {
  if (t == LatentTransform::log) return std::exp(u);
  // The sigmoid rounds to 1 for large u; keep the bound strict.
  return std::min(nyquist * sigmoid(u), std::nextafter(nyquist, 0.0));
}

// d log(transform(u)) / du
double log_slope(double u, LatentTransform t) { return t == LatentTransform::log ? 1.0 : sigmoid(-u); }

Eigen::MatrixXd se_cov(std::span<const double> xs, std::span<const double> ys, double variance, double lengthscale) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double t = (xs[i] - ys[j]) / lengthscale;
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = variance * std::exp(-0.5 * t * t);
    }
  }
  return k;
}

// Elementwise (x - y)^2 / lengthscale^2, the factor relating dK/dlog(lengthscale) to K.
Eigen::MatrixXd scaled_sq_lag(std::span<const double> xs, std::span<const double> ys, double lengthscale) {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double t = (xs[i] - ys[j]) / lengthscale;
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t * t;
    }
  }
  return r;
}

Eigen::MatrixXd latent_prior_factor(const LatentFunctionSpec& spec) {
  Eigen::MatrixXd k = se_cov(spec.locations, spec.locations, spec.variance, spec.lengthscale);
  k.diagonal().array() += kLatentJitter * spec.variance;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("latent prior covariance is not positive definite");
  return llt.matrixL();
}

Eigen::VectorXd centered_representatives(const LatentFunctionSpec& spec) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i) d(static_cast<Eigen::Index>(i)) = spec.representatives[i] - spec.mean;
  return d;
}

// One latent evaluated at a set of query points, with the pieces the
// gradient needs.
struct LatentSystem {
  Eigen::MatrixXd lower;  // L, P x P
  Eigen::MatrixXd cross;  // K(xs, x_L), n x P
  Eigen::MatrixXd b;      // cross * L^{-T}
  Eigen::VectorXd v;      // whitened representatives
  Eigen::VectorXd u;      // unconstrained latent at xs

  // With `whitened` given, the representatives in `spec` are ignored.
  LatentSystem(const LatentFunctionSpec& spec, std::span<const double> xs, std::span<const double> whitened = {}) {
    spec.validate();
    lower = latent_prior_factor(spec);
    if (whitened.empty()) {
      v = lower.triangularView<Eigen::Lower>().solve(centered_representatives(spec));
    } else {
      v = Eigen::Map<const Eigen::VectorXd>(whitened.data(), static_cast<Eigen::Index>(whitened.size()));
    }
    cross = se_cov(xs, spec.locations, spec.variance, spec.lengthscale);
    b = lower.triangularView<Eigen::Lower>().solve(cross.transpose()).transpose();
    u = (b * v).array() + spec.mean;
  }
};

std::vector<double> transformed(const LatentSystem& s, LatentTransform t, double nyquist) {
  std::vector<double> out(static_cast<std::size_t>(s.u.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = transform(s.u(static_cast<Eigen::Index>(i)), t, nyquist);
  return out;
}

PointwiseLatents latents_from(const GsmModel& m, const LatentSystem& w, const LatentSystem& l, const LatentSystem& f) {
  return {transformed(w, m.weight.transform, m.nyquist), transformed(l, m.lengthscale.transform, m.nyquist),
          transformed(f, m.frequency.transform, m.nyquist)};
}

double standard_normal_log_density(const Eigen::VectorXd& v) {
  return -0.5 * v.squaredNorm() - 0.5 * static_cast<double>(v.size()) * std::log(2.0 * std::numbers::pi);
}

// Copies `like` with the noise and latent SE hyperparameters taken from raw.
GsmModel with_hyperparameters(const GsmModel& like, std::span<const double> raw) {
  GsmModel out = like;
  std::size_t pos = like.num_params() - 7;
  out.noise_variance = std::exp(raw[pos++]);
  for (const auto kind : kLatents) {
    out.latent(kind).variance = std::exp(raw[pos++]);
    out.latent(kind).lengthscale = std::exp(raw[pos++]);
  }
  return out;
}

void check_state(const LatentFunctionSpec& spec, const WhiteningState& state) {
  if (!state.current_for(spec)) {
    throw ContractViolation("whitening state is stale for the latent hyperparameters");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void LatentFunctionSpec::validate() const {
  if (locations.size() < 2) throw InvalidArgument("a latent function needs at least two representatives");
  if (representatives.size() != locations.size()) {
    throw InvalidArgument("latent representatives do not match their locations");
  }
  for (std::size_t i = 1; i < locations.size(); ++i) {
    if (!(locations[i] > locations[i - 1])) throw InvalidArgument("latent locations must be strictly increasing");
  }
  if (!(variance > 0.0) || !(lengthscale > 0.0) || !std::isfinite(variance) || !std::isfinite(lengthscale)) {
    throw InvalidArgument("latent SE hyperparameters must be positive");
  }
  if (!std::isfinite(mean)) throw InvalidArgument("latent mean must be finite");
}

void GsmModel::validate() const {
  weight.validate();
  lengthscale.validate();
  frequency.validate();
  if (weight.transform != LatentTransform::log || lengthscale.transform != LatentTransform::log) {
    throw InvalidArgument("weight and lengthscale latents use the log transform");
  }
  if (frequency.transform != LatentTransform::logit_scaled) {
    throw InvalidArgument("the frequency latent uses the logit-scaled transform");
  }
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) throw InvalidArgument("noise variance must be positive");
  if (!(nyquist > 0.0) || !std::isfinite(nyquist)) throw InvalidArgument("Nyquist frequency must be positive");
}

const LatentFunctionSpec& GsmModel::latent(LatentKind kind) const {
  switch (kind) {
    case LatentKind::weight:
      return weight;
    case LatentKind::lengthscale:
      return lengthscale;
    case LatentKind::frequency:
      break;
  }
  return frequency;
}

LatentFunctionSpec& GsmModel::latent(LatentKind kind) {
  return const_cast<LatentFunctionSpec&>(static_cast<const GsmModel&>(*this).latent(kind));
}

std::size_t GsmModel::num_params() const { return weight.size() + lengthscale.size() + frequency.size() + 7; }

std::vector<double> GsmModel::raw_params() const {
  std::vector<double> out;
  out.reserve(num_params());
  for (const auto kind : kLatents) {
    const auto& spec = latent(kind);
    const auto v = whiten(spec.representatives, spec, WhiteningState(spec));
    out.insert(out.end(), v.begin(), v.end());
  }
  out.push_back(std::log(noise_variance));
  for (const auto kind : kLatents) {
    out.push_back(std::log(latent(kind).variance));
    out.push_back(std::log(latent(kind).lengthscale));
  }
  return out;
}

GsmModel GsmModel::with_raw_params(std::span<const double> raw) const {
  if (raw.size() != num_params()) throw InvalidArgument("GSM parameter vector has the wrong length");
  GsmModel out = with_hyperparameters(*this, raw);
  std::size_t pos = 0;
  for (const auto kind : kLatents) {
    auto& spec = out.latent(kind);
    spec.representatives = unwhiten(raw.subspan(pos, spec.size()), spec, WhiteningState(spec));
    pos += spec.size();
  }
  return out;
}

// ---------------------------------------------------------------------------

WhiteningState::WhiteningState(const LatentFunctionSpec& spec)
    : locations_(spec.locations), variance_(spec.variance), lengthscale_(spec.lengthscale) {
  if (!(variance_ > 0.0) || !(lengthscale_ > 0.0)) throw InvalidArgument("latent SE hyperparameters must be positive");
  if (locations_.size() < 2) throw InvalidArgument("a latent function needs at least two representatives");
  lower_ = latent_prior_factor(spec);
}

bool WhiteningState::current_for(const LatentFunctionSpec& spec) const {
  return spec.variance == variance_ && spec.lengthscale == lengthscale_ && spec.locations == locations_;
}

std::vector<double> whiten(std::span<const double> representatives, const LatentFunctionSpec& spec,
                           const WhiteningState& state) {
  check_state(spec, state);
  if (representatives.size() != spec.size()) throw InvalidArgument("representative count does not match the latent");
  Eigen::VectorXd d(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i) d(static_cast<Eigen::Index>(i)) = representatives[i] - spec.mean;
  const Eigen::VectorXd v = state.lower().triangularView<Eigen::Lower>().solve(d);
  return {v.data(), v.data() + v.size()};
}

std::vector<double> unwhiten(std::span<const double> v, const LatentFunctionSpec& spec, const WhiteningState& state) {
  check_state(spec, state);
  if (v.size() != spec.size()) throw InvalidArgument("whitened vector does not match the latent");
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
  const Eigen::VectorXd u = (state.lower().triangularView<Eigen::Lower>() * vv).array() + spec.mean;
  return {u.data(), u.data() + u.size()};
}

std::vector<double> latent_mean(const LatentFunctionSpec& spec, std::span<const double> xs) {
  const LatentSystem s(spec, xs);
  return {s.u.data(), s.u.data() + s.u.size()};
}

std::vector<double> latent_eval(const LatentFunctionSpec& spec, std::span<const double> xs, double nyquist) {
  if (spec.transform == LatentTransform::logit_scaled && !(nyquist > 0.0)) {
    throw InvalidArgument("the logit-scaled transform needs a positive upper bound");
  }
  return transformed(LatentSystem(spec, xs), spec.transform, nyquist);
}

PointwiseLatents gsm_latents(const GsmModel& model, std::span<const double> xs) {
  model.validate();
  return {latent_eval(model.weight, xs, model.nyquist), latent_eval(model.lengthscale, xs, model.nyquist),
          latent_eval(model.frequency, xs, model.nyquist)};
}

Eigen::MatrixXd gsm_build_cov(const GsmModel& model, std::span<const double> xs) {
  return gsm_cov(xs, gsm_latents(model, xs));
}

Eigen::MatrixXd gsm_build_cov(const GsmModel& model, std::span<const double> xs, std::span<const double> ys) {
  return gsm_cov(xs, gsm_latents(model, xs), ys, gsm_latents(model, ys));
}

double latent_log_prior(const GsmModel& model) {
  double acc = 0.0;
  for (const auto kind : kLatents) {
    const auto& spec = model.latent(kind);
    const auto v = whiten(spec.representatives, spec, WhiteningState(spec));
    acc += standard_normal_log_density(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return acc;
}

double log_posterior(const GsmModel& model, const SurfaceDataset& centered) {
  if (centered.xa.empty()) throw EmptyDatasetError();
  Eigen::MatrixXd a = gsm_build_cov(model, centered.xa);
  a.diagonal().array() += model.noise_variance;
  const Eigen::Map<const Eigen::VectorXd> z(centered.za.data(), static_cast<Eigen::Index>(centered.za.size()));
  return gaussian_log_density(a, z) + latent_log_prior(model);
}

GsmEvaluation log_posterior_with_gradient(const GsmModel& model, const SurfaceDataset& centered) {
  return log_posterior_at(model, model.raw_params(), centered, true);
}

GsmEvaluation log_posterior_at(const GsmModel& like, std::span<const double> raw, const SurfaceDataset& centered,
                               bool with_gradient) {
  if (raw.size() != like.num_params()) throw InvalidArgument("GSM parameter vector has the wrong length");
  const GsmModel model = with_hyperparameters(like, raw);
  model.validate();
  if (centered.xa.empty()) throw EmptyDatasetError();
  const std::span<const double> xs = centered.xa;
  const std::size_t pw = model.weight.size();
  const std::size_t pl = model.lengthscale.size();
  const LatentSystem sys[3] = {LatentSystem(model.weight, xs, raw.subspan(0, pw)),
                               LatentSystem(model.lengthscale, xs, raw.subspan(pw, pl)),
                               LatentSystem(model.frequency, xs, raw.subspan(pw + pl, model.frequency.size()))};
  const PointwiseLatents lx = latents_from(model, sys[0], sys[1], sys[2]);
  lx.validate(xs.size(), model.nyquist);

  Eigen::MatrixXd a = gsm_cov(xs, lx);
  a.diagonal().array() += model.noise_variance;
  const Eigen::Map<const Eigen::VectorXd> z(centered.za.data(), static_cast<Eigen::Index>(centered.za.size()));
  GsmEvaluation out;
  if (!with_gradient) {
    out.value = gaussian_log_density(a, z, &out.jitter);
    for (const auto& s : sys) out.value += standard_normal_log_density(s.v);
    return out;
  }
  const auto dens = gaussian_log_density_with_weight(a, z);
  const GsmPointGrad pg = gsm_contract_grad(xs, lx, dens.weight);
  const std::vector<double>* point_grads[3] = {&pg.weight, &pg.lengthscale, &pg.frequency};

  out.jitter = dens.jitter;
  out.value = dens.value;
  out.gradient.assign(model.num_params(), 0.0);
  const std::size_t hyper_base = model.num_params() - 7;
  out.gradient[hyper_base] = model.noise_variance * dens.weight.trace();

  std::size_t pos = 0;
  for (std::size_t h = 0; h < 3; ++h) {
    const auto& spec = model.latent(kLatents[h]);
    const LatentSystem& s = sys[h];
    out.value += standard_normal_log_density(s.v);

    // Gradient with respect to the unconstrained latent at each data point.
    Eigen::VectorXd gu(s.u.size());
    for (Eigen::Index i = 0; i < gu.size(); ++i) {
      gu(i) = (*point_grads[h])[static_cast<std::size_t>(i)] * log_slope(s.u(i), spec.transform);
    }

    const Eigen::VectorXd gv = s.b.transpose() * gu - s.v;
    std::copy(gv.data(), gv.data() + gv.size(), out.gradient.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += spec.size();

    // Holding v fixed, scaling the prior variance scales u - mean by sqrt.
    out.gradient[hyper_base + 1 + 2 * h] = 0.5 * gu.dot((s.u.array() - spec.mean).matrix());

    // Lengthscale: u - mean = K_*L a with a = L^{-T} v, and L moves with K_LL.
    const Eigen::VectorXd av = s.lower.transpose().triangularView<Eigen::Upper>().solve(s.v);
    const Eigen::MatrixXd d_cross = s.cross.cwiseProduct(scaled_sq_lag(xs, spec.locations, spec.lengthscale));
    const Eigen::MatrixXd k_ll = se_cov(spec.locations, spec.locations, spec.variance, spec.lengthscale);
    const Eigen::MatrixXd d_kll = k_ll.cwiseProduct(scaled_sq_lag(spec.locations, spec.locations, spec.lengthscale));
    Eigen::MatrixXd m = s.lower.triangularView<Eigen::Lower>().solve(d_kll);
    m = s.lower.triangularView<Eigen::Lower>().solve(m.transpose()).transpose();
    Eigen::MatrixXd phi = m.triangularView<Eigen::Lower>();
    phi.diagonal() *= 0.5;
    const Eigen::VectorXd du = d_cross * av - s.b * (phi.transpose() * s.v);
    out.gradient[hyper_base + 2 + 2 * h] = gu.dot(du);
  }
  return out;
}

GsmFitResult fit_gsm(const Profile& p, const GsmModel& init, const OptConfig& cfg) {
  if (p.valid_count() < 2) throw InsufficientDataError("fitting needs at least two valid points");
  init.validate();
  cfg.validate();
  const SurfaceDataset ds = split_dataset(p).centered(valid_mean(p));

  auto objective = [&](std::span<const double> raw, std::span<double> grad) {
    try {
      const auto eval = log_posterior_at(init, raw, ds, true);
      std::copy(eval.gradient.begin(), eval.gradient.end(), grad.begin());
      return eval.value;
    } catch (const NotPositiveDefiniteError&) {
    } catch (const InvalidArgument&) {
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    return std::numeric_limits<double>::quiet_NaN();
  };

  OptResult res;
  try {
    res = maximize(objective, init.raw_params(), cfg);
  } catch (const InvalidStartError& e) {
    throw FitFailure(e.what(), init.raw_params(), {});
  }
  if (res.trace.reason == Termination::non_finite) {
    throw FitFailure("log posterior became non-finite after " + std::to_string(res.trace.objective.size()) +
                         " evaluations",
                     res.x, res.trace.objective);
  }
  GsmFitResult out;
  out.model = init.with_raw_params(res.x);
  out.log_posterior = res.value;
  out.trace = std::move(res.trace);
  return out;
}

PosteriorGaussian gsm_posterior(const SurfaceDataset& centered, const GsmModel& model, std::span<const double> xm,
                                bool include_noise) {
  if (centered.xa.empty()) throw EmptyDatasetError();
  if (xm.empty()) throw InvalidArgument("posterior needs at least one prediction location");
  const auto la = gsm_latents(model, centered.xa);
  const auto lm = gsm_latents(model, xm);
  Eigen::MatrixXd train = gsm_cov(centered.xa, la);
  train.diagonal().array() += model.noise_variance;
  Eigen::MatrixXd test = gsm_cov(xm, lm);
  if (include_noise) test.diagonal().array() += model.noise_variance;
  return condition(train, gsm_cov(xm, lm, centered.xa, la), std::move(test), centered.za,
                   std::vector<double>(xm.begin(), xm.end()));
}

ImputationResult impute(const Profile& p, const GsmModel& model, std::uint64_t seed) {
  return impute_with(
      p, [&](const SurfaceDataset& ds) { return gsm_posterior(ds, model, ds.xm, /*include_noise=*/true); }, seed);
}

// ---------------------------------------------------------------------------

GsmModel gsm_initial_model(const Profile& p, const GsmInitConfig& cfg) {
  if (cfg.representatives < 2) throw InvalidArgument("need at least two representatives");
  if (!(cfg.wavelength_start > 0.0) || !(cfg.wavelength_end > 0.0)) {
    throw InvalidArgument("expected wavelengths must be positive");
  }
  if (!(cfg.latent_variance > 0.0) || !(cfg.latent_lengthscale_fraction > 0.0) || !(cfg.noise_fraction > 0.0) ||
      !(cfg.frequency_lengthscale_fraction.value_or(1.0) > 0.0)) {
    throw InvalidArgument("latent prior settings must be positive");
  }
  const double r = rq(p);
  if (!(r > 0.0)) throw InvalidArgument("profile has zero height variance");

  const Grid1D& g = p.grid();
  const double x0 = g.point(0);
  const double x1 = g.point(g.size() - 1);
  const double extent = x1 - x0;
  if (!(extent > 0.0)) throw InvalidArgument("profile needs at least two grid points");

  GsmModel m;
  m.nyquist = 1.0 / (2.0 * g.dx());
  m.noise_variance = cfg.noise_fraction * r * r;

  const std::size_t n = cfg.representatives;
  std::vector<double> xl(n);
  std::vector<double> ramp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    xl[i] = x0 + t * extent;
    ramp[i] = cfg.wavelength_start + t * (cfg.wavelength_end - cfg.wavelength_start);
  }

  auto base = [&](LatentTransform tr, double mean) {
    LatentFunctionSpec s;
    s.locations = xl;
    s.representatives.assign(n, mean);
    s.variance = cfg.latent_variance;
    s.lengthscale = cfg.latent_lengthscale_fraction * extent;
    s.mean = mean;
    s.transform = tr;
    return s;
  };

  m.weight = base(LatentTransform::log, std::log(r));
  m.lengthscale = base(LatentTransform::log, std::log(median_of(ramp)));

  double mean_freq = 0.0;
  for (double l : ramp) mean_freq += 1.0 / l;
  mean_freq /= static_cast<double>(n);
  if (!(mean_freq < m.nyquist)) throw InvalidArgument("expected frequencies exceed the Nyquist frequency");
  m.frequency = base(LatentTransform::logit_scaled, logit(mean_freq / m.nyquist));
  for (std::size_t i = 0; i < n; ++i) m.frequency.representatives[i] = logit(1.0 / (ramp[i] * m.nyquist));
  if (cfg.frequency_lengthscale_fraction) m.frequency.lengthscale = *cfg.frequency_lengthscale_fraction * extent;
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------

std::string to_string(LatentTransform t) { return t == LatentTransform::log ? "log" : "logit_scaled"; }

namespace {

const char* latent_key(LatentKind kind) {
  switch (kind) {
    case LatentKind::weight:
      return "weight";
    case LatentKind::lengthscale:
      return "lengthscale";
    case LatentKind::frequency:
      break;
  }
  return "frequency";
}

LatentTransform parse_transform(const KeyValueDoc& doc, const std::string& key) {
  const auto& v = doc.text(key);
  if (v == "log") return LatentTransform::log;
  if (v == "logit_scaled") return LatentTransform::logit_scaled;
  throw ParseError("unknown transform '" + v + "'", doc.line_of(key), key);
}

}  // namespace

KeyValueDoc to_document(const GsmModel& model) {
  KeyValueDoc doc;
  doc.set("model", std::string("gsm"));
  doc.set("noise_variance", model.noise_variance);
  doc.set("nyquist", model.nyquist);
  for (const auto kind : kLatents) {
    const auto& s = model.latent(kind);
    const std::string k = latent_key(kind);
    doc.set(k + ".transform", to_string(s.transform));
    doc.set(k + ".mean", s.mean);
    doc.set(k + ".variance", s.variance);
    doc.set(k + ".lengthscale", s.lengthscale);
    doc.set(k + ".locations", s.locations);
    doc.set(k + ".representatives", s.representatives);
  }
  return doc;
}

GsmModel gsm_from_document(const KeyValueDoc& doc) {
  std::vector<std::string> names = {"model", "noise_variance", "nyquist"};
  for (const auto kind : kLatents) {
    for (const char* field : {".transform", ".mean", ".variance", ".lengthscale", ".locations", ".representatives"}) {
      names.push_back(std::string(latent_key(kind)) + field);
    }
  }
  doc.require_known(std::vector<std::string_view>(names.begin(), names.end()));
  if (doc.text("model") != "gsm") throw ParseError("not a GSM model document", doc.line_of("model"), "model");

  GsmModel m;
  m.noise_variance = doc.number("noise_variance");
  m.nyquist = doc.number("nyquist");
  for (const auto kind : kLatents) {
    auto& s = m.latent(kind);
    const std::string k = latent_key(kind);
    s.transform = parse_transform(doc, k + ".transform");
    s.mean = doc.number(k + ".mean");
    s.variance = doc.number(k + ".variance");
    s.lengthscale = doc.number(k + ".lengthscale");
    s.locations = doc.numbers(k + ".locations");
    s.representatives = doc.numbers(k + ".representatives");
  }
  m.validate();
  return m;
}

void save_gsm(const GsmModel& model, const std::string& path) { to_document(model).save(path); }

GsmModel load_gsm(const std::string& path) { return gsm_from_document(KeyValueDoc::load(path)); }

}  // namespace surfimp
