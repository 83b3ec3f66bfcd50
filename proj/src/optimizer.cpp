#include "surfimp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "surfimp/errors.hpp"

namespace surfimp {

void OptConfig::validate() const {
  if (max_iterations == 0) throw InvalidArgument("max_iterations must be positive");
  if (!(step_size > 0.0)) throw InvalidArgument("step size must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    throw InvalidArgument("moment decays must lie in (0, 1)");
  }
  if (!(tolerance > 0.0) || tolerance_window == 0) throw InvalidArgument("convergence tolerance must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::non_finite:
      return "non_finite";
  }
  return "unknown";
}

OptResult maximize(const ObjectiveWithGradient& objective, std::vector<double> x0, const OptConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0);
  std::vector<double> grad(n, 0.0);
  std::vector<double> m(n, 0.0);
  std::vector<double> v(n, 0.0);

  double f = objective(x, grad);
  if (!std::isfinite(f)) throw InvalidStartError("objective is not finite at the starting point");

  OptResult out;
  out.x = x;
  out.value = f;
  out.trace.objective.push_back(f);
  out.trace.best.push_back(f);
  out.trace.reason = Termination::max_iterations;

  double b1t = 1.0;
  double b2t = 1.0;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    bool grad_ok = true;
    for (double g : grad) grad_ok = grad_ok && std::isfinite(g);
    if (!grad_ok) {
      out.trace.reason = Termination::non_finite;
      break;
    }
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mhat = m[i] / (1.0 - b1t);
      const double vhat = v[i] / (1.0 - b2t);
      x[i] += cfg.step_size * mhat / (std::sqrt(vhat) + 1e-8);
    }
    f = objective(x, grad);
    if (!std::isfinite(f)) {
      out.trace.reason = Termination::non_finite;
      break;
    }
    out.trace.objective.push_back(f);
    if (f > out.value) {
      out.value = f;
      out.x = x;
      out.trace.best_iteration = it;
    }
    out.trace.best.push_back(out.value);

    const auto& hist = out.trace.objective;
    if (hist.size() > cfg.tolerance_window) {
      const double prev = hist[hist.size() - 1 - cfg.tolerance_window];
      if (std::abs(f - prev) <= cfg.tolerance * std::abs(f)) {
        out.trace.reason = Termination::converged;
        break;
      }
    }
  }
  out.trace.final_params = out.x;
  return out;
}

std::vector<double> fd_gradient(const ScalarObjective& objective, std::span<const double> x, double step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double fp = objective(probe);
    probe[i] = orig - step;
    const double fm = objective(probe);
    probe[i] = orig;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("gradient vectors differ in length");
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  const double floor = 1e-4 * scale;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), floor));
  }
  return worst;
}

void write_trace_csv(const OptTrace& trace, std::ostream& os) {
  os << "iteration,objective\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.objective.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.objective[i]);
    os << i << ',' << buf << '\n';
  }
}

}  // namespace surfimp
