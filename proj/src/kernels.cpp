#include "surfimp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "surfimp/errors.hpp"

namespace surfimp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

void validate(const KernelParams& params) {
  std::visit(overloaded{
                 [](const SEParams& p) {
                   require_positive(p.variance, "SE variance");
                   require_positive(p.lengthscale, "SE lengthscale");
                 },
                 [](const PeriodicParams& p) {
                   require_positive(p.variance, "periodic variance");
                   require_positive(p.shape, "periodic shape");
                   require_positive(p.period, "periodic period");
                 },
                 [](const SMParams& p) {
                   if (p.components.empty()) throw InvalidArgument("SM kernel needs at least one component");
                   for (const auto& c : p.components) {
                     require_positive(c.weight, "SM weight");
                     if (!(c.frequency >= 0.0) || !(c.freq_variance >= 0.0)) {
                       throw InvalidArgument("SM frequency and frequency variance must be non-negative");
                     }
                   }
                 },
                 [](const NoiseParams& p) {
                   if (!(p.variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
                   if (p.kind == NoiseKind::colored) require_positive(p.corr_length, "noise correlation length");
                 },
             },
             params);
}

// Integer lag layout for points that sit on a common uniform grid. Stationary
// kernels are then evaluated once per distinct lag.
struct LagLayout {
  double h = 0.0;
  std::vector<long> mx;
  std::vector<long> my;
  long max_lag = 0;
};

double min_positive_step(std::span<const double> xs) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double d = std::abs(xs[i] - xs[i - 1]);
    if (d > 0.0) h = std::min(h, d);
  }
  return h;
}

std::optional<LagLayout> lag_layout(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() * ys.size() < 1024) return std::nullopt;
  const double h = std::min(min_positive_step(xs), min_positive_step(ys));
  if (!std::isfinite(h)) return std::nullopt;
  double origin = std::numeric_limits<double>::infinity();
  for (double x : xs) origin = std::min(origin, x);
  for (double y : ys) origin = std::min(origin, y);

  LagLayout out;
  out.h = h;
  long lo = 0;
  long hi = 0;
  auto index_all = [&](std::span<const double> pts, std::vector<long>& m) {
    m.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double r = (pts[i] - origin) / h;
      const double k = std::round(r);
      if (std::abs(r - k) > 1e-6) return false;
      m[i] = static_cast<long>(k);
      hi = std::max(hi, m[i]);
    }
    return true;
  };
  if (!index_all(xs, out.mx) || !index_all(ys, out.my)) return std::nullopt;
  out.max_lag = hi - lo;
  if (static_cast<std::size_t>(out.max_lag) > 8 * (xs.size() + ys.size()) + 4096) return std::nullopt;
  return out;
}

}  // namespace

double k_se(double x, double y, const SEParams& p) {
  const double t = (x - y) / p.lengthscale;
  return p.variance * std::exp(-0.5 * t * t);
}

double k_periodic(double x, double y, const PeriodicParams& p) {
  const double s = std::sin(kPi * (x - y) / p.period);
  return p.variance * std::exp(-0.5 * s * s / (p.shape * p.shape));
}

double k_sm(double tau, const SMParams& p) {
  double acc = 0.0;
  for (const auto& c : p.components) {
    acc += c.weight * std::cos(2.0 * kPi * tau * c.frequency) *
           std::exp(-2.0 * kPi * kPi * tau * tau * c.freq_variance);
  }
  return acc;
}

double k_noise(double xi, double xj, const NoiseParams& p) {
  if (p.kind == NoiseKind::white) return xi == xj ? p.variance : 0.0;
  const double t = (xi - xj) / p.corr_length;
  return p.variance * std::exp(-0.5 * t * t);
}

Kernel::Kernel(KernelParams params) : params_(std::move(params)) { validate(params_); }

Kernel noise_kernel(const NoiseParams& noise) { return Kernel(noise); }

std::string Kernel::name() const {
  return std::visit(overloaded{
                        [](const SEParams&) -> std::string { return "se"; },
                        [](const PeriodicParams&) -> std::string { return "periodic"; },
                        [](const SMParams&) -> std::string { return "sm"; },
                        [](const NoiseParams& p) -> std::string {
                          return p.kind == NoiseKind::white ? "white_noise" : "colored_noise";
                        },
                    },
                    params_);
}

double Kernel::at_lag(double tau) const {
  return std::visit(overloaded{
                        [&](const SEParams& p) { return k_se(tau, 0.0, p); },
                        [&](const PeriodicParams& p) { return k_periodic(tau, 0.0, p); },
                        [&](const SMParams& p) { return k_sm(tau, p); },
                        [&](const NoiseParams& p) { return k_noise(tau, 0.0, p); },
                    },
                    params_);
}

std::size_t Kernel::num_params() const {
  return std::visit(overloaded{
                        [](const SEParams&) -> std::size_t { return 2; },
                        [](const PeriodicParams&) -> std::size_t { return 3; },
                        [](const SMParams& p) -> std::size_t { return 3 * p.components.size(); },
                        [](const NoiseParams& p) -> std::size_t { return p.kind == NoiseKind::white ? 1 : 2; },
                    },
                    params_);
}

std::vector<std::string> Kernel::param_names() const {
  return std::visit(overloaded{
                        [](const SEParams&) -> std::vector<std::string> { return {"log_variance", "log_lengthscale"}; },
                        [](const PeriodicParams&) -> std::vector<std::string> {
                          return {"log_variance", "log_shape", "log_period"};
                        },
                        [](const SMParams& p) {
                          std::vector<std::string> names;
                          for (std::size_t k = 0; k < p.components.size(); ++k) {
                            const auto s = std::to_string(k);
                            names.push_back("log_weight_" + s);
                            names.push_back("log_frequency_" + s);
                            names.push_back("log_freq_variance_" + s);
                          }
                          return names;
                        },
                        [](const NoiseParams& p) -> std::vector<std::string> {
                          if (p.kind == NoiseKind::white) return {"log_noise_variance"};
                          return {"log_noise_variance", "log_noise_corr_length"};
                        },
                    },
                    params_);
}

std::vector<double> Kernel::raw_params() const {
  return std::visit(overloaded{
                        [](const SEParams& p) -> std::vector<double> {
                          return {safe_log(p.variance), safe_log(p.lengthscale)};
                        },
                        [](const PeriodicParams& p) -> std::vector<double> {
                          return {safe_log(p.variance), safe_log(p.shape), safe_log(p.period)};
                        },
                        [](const SMParams& p) {
                          std::vector<double> raw;
                          for (const auto& c : p.components) {
                            raw.push_back(safe_log(c.weight));
                            raw.push_back(std::log(std::max(c.frequency, kLogFloor)));
                            raw.push_back(std::log(std::max(c.freq_variance, kLogFloor)));
                          }
                          return raw;
                        },
                        [](const NoiseParams& p) -> std::vector<double> {
                          if (p.kind == NoiseKind::white) return {safe_log(p.variance)};
                          return {safe_log(p.variance), safe_log(p.corr_length)};
                        },
                    },
                    params_);
}

Kernel Kernel::with_raw_params(std::span<const double> raw) const {
  if (raw.size() != num_params()) throw InvalidArgument("raw parameter vector has the wrong length");
  return std::visit(overloaded{
                        [&](const SEParams&) { return Kernel(SEParams{std::exp(raw[0]), std::exp(raw[1])}); },
                        [&](const PeriodicParams&) {
                          return Kernel(PeriodicParams{std::exp(raw[0]), std::exp(raw[1]), std::exp(raw[2])});
                        },
                        [&](const SMParams& p) {
                          SMParams out;
                          for (std::size_t k = 0; k < p.components.size(); ++k) {
                            out.components.push_back(
                                {std::exp(raw[3 * k]), std::exp(raw[3 * k + 1]), std::exp(raw[3 * k + 2])});
                          }
                          return Kernel(out);
                        },
                        [&](const NoiseParams& p) {
                          NoiseParams out = p;
                          out.variance = std::exp(raw[0]);
                          if (p.kind == NoiseKind::colored) out.corr_length = std::exp(raw[1]);
                          return Kernel(out);
                        },
                    },
                    params_);
}

void Kernel::grad_at_lag(double tau, std::span<double> out) const {
  if (out.size() != num_params()) throw InvalidArgument("gradient buffer has the wrong length");
  std::visit(overloaded{
                 [&](const SEParams& p) {
                   const double t2 = tau * tau / (p.lengthscale * p.lengthscale);
                   const double k = p.variance * std::exp(-0.5 * t2);
                   out[0] = k;
                   out[1] = k * t2;
                 },
                 [&](const PeriodicParams& p) {
                   const double a = kPi * tau / p.period;
                   const double s = std::sin(a);
                   const double th2 = p.shape * p.shape;
                   const double k = p.variance * std::exp(-0.5 * s * s / th2);
                   out[0] = k;
                   out[1] = k * s * s / th2;
                   out[2] = k * a * std::sin(2.0 * a) / (2.0 * th2);
                 },
                 [&](const SMParams& p) {
                   for (std::size_t k = 0; k < p.components.size(); ++k) {
                     const auto& c = p.components[k];
                     const double arg = 2.0 * kPi * tau * c.frequency;
                     const double decay_rate = 2.0 * kPi * kPi * tau * tau;
                     const double e = std::exp(-decay_rate * c.freq_variance);
                     const double term = c.weight * std::cos(arg) * e;
                     out[3 * k] = term;
                     out[3 * k + 1] = -c.weight * e * std::sin(arg) * arg;
                     out[3 * k + 2] = -term * decay_rate * std::max(c.freq_variance, kLogFloor);
                   }
                 },
                 [&](const NoiseParams& p) {
                   if (p.kind == NoiseKind::white) {
                     out[0] = tau == 0.0 ? p.variance : 0.0;
                     return;
                   }
                   const double t2 = tau * tau / (p.corr_length * p.corr_length);
                   const double k = p.variance * std::exp(-0.5 * t2);
                   out[0] = k;
                   out[1] = k * t2;
                 },
             },
             params_);
}

Eigen::MatrixXd build_cov(const Kernel& k, std::span<const double> xs, std::optional<std::span<const double>> ys) {
  if (xs.empty()) throw InvalidArgument("build_cov needs at least one location");
  const bool symmetric = !ys.has_value();
  const std::span<const double> cols = symmetric ? xs : *ys;
  const auto nr = static_cast<Eigen::Index>(xs.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd out(nr, nc);

  if (auto layout = lag_layout(xs, cols)) {
    std::vector<double> table(static_cast<std::size_t>(layout->max_lag) + 1);
    for (std::size_t d = 0; d < table.size(); ++d) table[d] = k.at_lag(static_cast<double>(d) * layout->h);
    for (Eigen::Index j = 0; j < nc; ++j) {
      const long mj = layout->my[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < nr; ++i) {
        out(i, j) = table[static_cast<std::size_t>(std::labs(layout->mx[static_cast<std::size_t>(i)] - mj))];
      }
    }
    return out;
  }

  if (symmetric) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      for (Eigen::Index i = j; i < nr; ++i) {
        const double v = k(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]);
        out(i, j) = v;
        out(j, i) = v;
      }
    }
  } else {
    for (Eigen::Index j = 0; j < nc; ++j) {
      for (Eigen::Index i = 0; i < nr; ++i) {
        out(i, j) = k(xs[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      }
    }
  }
  return out;
}

Eigen::MatrixXd kernel_grad(const Kernel& k, std::span<const double> xs, std::size_t param_index) {
  const std::size_t np = k.num_params();
  if (param_index >= np) {
    throw InvalidArgument("unknown parameter index " + std::to_string(param_index) + " for kernel " + k.name());
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
  std::vector<double> g(np);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      k.grad_at_lag(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)], g);
      out(i, j) = g[param_index];
      out(j, i) = g[param_index];
    }
  }
  return out;
}

std::vector<double> contract_grad(const Kernel& k, std::span<const double> xs, const Eigen::MatrixXd& w) {
  const std::size_t np = k.num_params();
  const auto n = static_cast<Eigen::Index>(xs.size());
  if (w.rows() != n || w.cols() != n) throw InvalidArgument("weight matrix does not match the locations");
  std::vector<double> out(np, 0.0);
  std::vector<double> g(np);

  if (auto layout = lag_layout(xs, xs)) {
    std::vector<double> binned(static_cast<std::size_t>(layout->max_lag) + 1, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const long mj = layout->mx[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < n; ++i) {
        binned[static_cast<std::size_t>(std::labs(layout->mx[static_cast<std::size_t>(i)] - mj))] += w(i, j);
      }
    }
    for (std::size_t d = 0; d < binned.size(); ++d) {
      if (binned[d] == 0.0) continue;
      k.grad_at_lag(static_cast<double>(d) * layout->h, g);
      for (std::size_t p = 0; p < np; ++p) out[p] += binned[d] * g[p];
    }
    return out;
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      k.grad_at_lag(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)], g);
      for (std::size_t p = 0; p < np; ++p) out[p] += w(i, j) * g[p];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double k_gibbs(double x, double y, double lx, double ly) {
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("Gibbs lengthscales must be positive");
  const double s = lx * lx + ly * ly;
  const double d = x - y;
  return std::sqrt(2.0 * lx * ly / s) * std::exp(-d * d / s);
}

double k_gsm(double x, double y, const LatentPoint& a, const LatentPoint& b) {
  return a.weight * b.weight * k_gibbs(x, y, a.lengthscale, b.lengthscale) *
         std::cos(2.0 * kPi * (a.frequency * x - b.frequency * y));
}

void PointwiseLatents::validate(std::size_t expected, double nyquist) const {
  if (weight.size() != expected || lengthscale.size() != expected || frequency.size() != expected) {
    throw InvalidArgument("latent vectors do not match the number of locations");
  }
  for (std::size_t i = 0; i < expected; ++i) {
    if (!(weight[i] > 0.0) || !(lengthscale[i] > 0.0) || !(frequency[i] > 0.0)) {
      throw InvalidArgument("latent values must be strictly positive");
    }
    if (nyquist > 0.0 && !(frequency[i] < nyquist)) {
      throw InvalidArgument("latent frequency must stay below the Nyquist frequency");
    }
  }
}

Eigen::MatrixXd gibbs_cov(std::span<const double> xs, std::span<const double> lengthscales) {
  if (xs.size() != lengthscales.size()) throw InvalidArgument("one lengthscale per location is required");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double v = k_gibbs(xs[ui], xs[uj], lengthscales[ui], lengthscales[uj]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd gsm_cov(std::span<const double> xs, const PointwiseLatents& lx) {
  lx.validate(xs.size(), 0.0);
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    out(j, j) = lx.weight[uj] * lx.weight[uj];
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double v = k_gsm(xs[ui], xs[uj], lx.at(ui), lx.at(uj));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd gsm_cov(std::span<const double> xs, const PointwiseLatents& lx, std::span<const double> ys,
                        const PointwiseLatents& ly) {
  lx.validate(xs.size(), 0.0);
  ly.validate(ys.size(), 0.0);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k_gsm(xs[i], ys[j], lx.at(i), ly.at(j));
    }
  }
  return out;
}

namespace {

// Partial derivatives of K_ij with respect to the log-latents at point i.
struct PairPartials {
  double k;
  double dlog_weight;
  double dlog_lengthscale;
  double dlog_frequency;
};

PairPartials pair_partials_i(double xi, double xj, const LatentPoint& a, const LatentPoint& b) {
  const double s = a.lengthscale * a.lengthscale + b.lengthscale * b.lengthscale;
  const double d = xi - xj;
  const double gibbs = std::sqrt(2.0 * a.lengthscale * b.lengthscale / s) * std::exp(-d * d / s);
  const double phase = 2.0 * kPi * (a.frequency * xi - b.frequency * xj);
  const double amp = a.weight * b.weight * gibbs;
  const double k = amp * std::cos(phase);
  const double li2 = a.lengthscale * a.lengthscale;
  PairPartials p{};
  p.k = k;
  p.dlog_weight = k;
  p.dlog_lengthscale = k * (0.5 - li2 / s + 2.0 * d * d * li2 / (s * s));
  p.dlog_frequency = -amp * std::sin(phase) * 2.0 * kPi * xi * a.frequency;
  return p;
}

}  // namespace

Eigen::MatrixXd gsm_grad(std::span<const double> xs, const PointwiseLatents& lx, LatentKind kind,
                         std::size_t index) {
  lx.validate(xs.size(), 0.0);
  if (index >= xs.size()) throw InvalidArgument("latent index out of range");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const auto ii = static_cast<Eigen::Index>(index);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto p = pair_partials_i(xs[index], xs[j], lx.at(index), lx.at(j));
    double v = 0.0;
    switch (kind) {
      case LatentKind::weight:
        v = p.dlog_weight;
        break;
      case LatentKind::lengthscale:
        v = p.dlog_lengthscale;
        break;
      case LatentKind::frequency:
        v = p.dlog_frequency;
        break;
    }
    const auto jj = static_cast<Eigen::Index>(j);
    if (j == index) {
      out(ii, ii) = 2.0 * v;
    } else {
      out(ii, jj) = v;
      out(jj, ii) = v;
    }
  }
  return out;
}

GsmPointGrad gsm_contract_grad(std::span<const double> xs, const PointwiseLatents& lx, const Eigen::MatrixXd& w) {
  const std::size_t n = xs.size();
  lx.validate(n, 0.0);
  GsmPointGrad g{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double wj = lx.weight[j];
    g.weight[j] += 2.0 * w(jj, jj) * wj * wj;
    const double lj2 = lx.lengthscale[j] * lx.lengthscale[j];
    const double fx_j = lx.frequency[j] * xs[j];
    for (std::size_t i = j + 1; i < n; ++i) {
      const double wij = 2.0 * w(static_cast<Eigen::Index>(i), jj);
      const double li2 = lx.lengthscale[i] * lx.lengthscale[i];
      const double s = li2 + lj2;
      const double d = xs[i] - xs[j];
      const double d2s = d * d / s;
      const double gibbs = std::sqrt(2.0 * lx.lengthscale[i] * lx.lengthscale[j] / s) * std::exp(-d2s);
      const double phase = 2.0 * kPi * (lx.frequency[i] * xs[i] - fx_j);
      const double amp = lx.weight[i] * wj * gibbs;
      const double c = std::cos(phase);
      const double sn = std::sin(phase);
      const double k = amp * c;
      const double wk = wij * k;
      g.weight[i] += wk;
      g.weight[j] += wk;
      g.lengthscale[i] += wk * (0.5 - li2 / s + 2.0 * d2s * li2 / s);
      g.lengthscale[j] += wk * (0.5 - lj2 / s + 2.0 * d2s * lj2 / s);
      const double ws = wij * amp * sn * 2.0 * kPi;
      g.frequency[i] -= ws * xs[i] * lx.frequency[i];
      g.frequency[j] += ws * xs[j] * lx.frequency[j];
    }
  }
  return g;
}

}  // namespace surfimp
