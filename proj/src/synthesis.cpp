#include "surfimp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "surfimp/errors.hpp"
#include "surfimp/gp.hpp"
#include "surfimp/random.hpp"

namespace surfimp {

namespace {

std::vector<double> draw(const Kernel& k, std::span<const double> xs, NormalGenerator& normal) {
  const auto fac = chol_jittered(build_cov(k, xs));
  Eigen::VectorXd eps(static_cast<Eigen::Index>(xs.size()));
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = normal();
  const Eigen::VectorXd z = fac.llt().matrixL() * eps;
  return {z.data(), z.data() + z.size()};
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

}  // namespace

void TurnedSimConfig::validate() const {
  require_positive(variance, "variance");
  require_positive(shape, "shape");
  require_positive(period, "period");
  require_positive(noise_corr, "noise correlation length");
  if (!(noise_variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
}

void ChirpConfig::validate() const {
  require_positive(amplitude, "amplitude");
  require_positive(noise_corr, "noise correlation length");
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  if (!(noise_variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
}

std::vector<double> sample_prior(const Kernel& k, std::span<const double> xs, std::uint64_t seed) {
  NormalGenerator normal(seed);
  return draw(k, xs, normal);
}

Profile simulate_turned(const TurnedSimConfig& cfg) {
  cfg.validate();
  const Grid1D& g = cfg.grid;
  const std::size_t n = g.size();
  NormalGenerator normal(cfg.seed);
  const Kernel periodic(PeriodicParams{cfg.variance, cfg.shape, cfg.period});

  // A periodic draw repeats exactly, so when the period spans a whole number
  // of grid steps only one period has to be sampled.
  std::vector<double> z;
  const double steps = cfg.period / g.dx();
  const double whole = std::round(steps);
  if (std::abs(steps - whole) < 1e-9 * steps && whole >= 1.0 && whole < static_cast<double>(n)) {
    const auto m = static_cast<std::size_t>(whole);
    const auto all = g.points();
    const auto one = draw(periodic, std::span<const double>(all.data(), m), normal);
    z.resize(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = one[i % m];
  } else {
    z = draw(periodic, g.points(), normal);
  }

  if (cfg.noise_variance > 0.0) {
    const auto noise = draw(Kernel(NoiseParams{NoiseKind::colored, cfg.noise_variance, cfg.noise_corr}), g.points(), normal);
    for (std::size_t i = 0; i < n; ++i) z[i] += noise[i];
  }
  return Profile::all_valid(g, std::move(z));
}

std::vector<double> chirp_wavelengths(const ChirpConfig& cfg) {
  cfg.validate();
  std::vector<double> lambda(cfg.k_max + 1);
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    lambda[k] = 1e-3 * std::pow(10.0, 1.0 + static_cast<double>(k) / static_cast<double>(cfg.k_max));  // um -> mm
  }
  std::vector<double> out(cfg.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = cfg.grid.point(i);
    double start = 0.0;
    std::size_t k = 0;
    while (k < cfg.k_max && x >= start + lambda[k]) {
      start += lambda[k];
      ++k;
    }
    out[i] = lambda[k];
  }
  return out;
}

std::vector<double> chirp_heights(const ChirpConfig& cfg) {
  const auto lambda = chirp_wavelengths(cfg);
  std::vector<double> z(lambda.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = 0.5 * cfg.amplitude * std::cos(2.0 * std::numbers::pi * cfg.grid.point(i) / lambda[i]);
  }
  return z;
}

Profile simulate_chirp(const ChirpConfig& cfg) {
  auto z = chirp_heights(cfg);
  if (cfg.noise_variance > 0.0) {
    const auto noise = sample_prior(Kernel(NoiseParams{NoiseKind::colored, cfg.noise_variance, cfg.noise_corr}),
                                    cfg.grid.points(), cfg.seed);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += noise[i];
  }
  return Profile::all_valid(cfg.grid, std::move(z));
}

// ---------------------------------------------------------------------------

namespace {

struct Extremum {
  std::size_t index;
  bool peak;
};

// Local extrema with flat runs collapsed to their midpoint. The profile ends
// count as peaks (pits) when they lie above (below) their inner neighbor.
std::vector<Extremum> find_extrema(const std::vector<double>& z) {
  struct Run {
    std::size_t begin, end;
    double value;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!runs.empty() && z[i] == runs.back().value) {
      runs.back().end = i;
    } else {
      runs.push_back({i, i, z[i]});
    }
  }
  std::vector<Extremum> out;
  if (runs.size() < 2) return out;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double v = runs[r].value;
    const bool has_left = r > 0;
    const bool has_right = r + 1 < runs.size();
    const bool above_left = !has_left || runs[r - 1].value < v;
    const bool above_right = !has_right || runs[r + 1].value < v;
    const bool below_left = !has_left || runs[r - 1].value > v;
    const bool below_right = !has_right || runs[r + 1].value > v;
    const std::size_t mid = (runs[r].begin + runs[r].end) / 2;
    if (above_left && above_right) {
      out.push_back({mid, true});
    } else if (below_left && below_right) {
      out.push_back({mid, false});
    }
  }
  return out;
}

double dale_volume(const std::vector<double>& z, std::size_t left, std::size_t right, double dx) {
  const double level = std::min(z[left], z[right]);
  double area = 0.0;
  for (std::size_t j = left; j < right; ++j) {
    area += 0.5 * (std::max(0.0, level - z[j]) + std::max(0.0, level - z[j + 1]));
  }
  return area * dx;
}

}  // namespace

std::vector<Dale> watershed_dales(const Profile& p, double volume_threshold) {
  if (!p.fully_valid()) throw InvalidArgument("watershed segmentation needs a fully valid profile");
  const auto& z = p.z();
  const double dx = p.grid().dx();
  const auto ext = find_extrema(z);

  std::vector<std::size_t> peaks;
  std::vector<std::size_t> pits;  // pits[i] lies between peaks[i] and peaks[i+1]
  for (std::size_t e = 0; e < ext.size(); ++e) {
    if (ext[e].peak) {
      peaks.push_back(ext[e].index);
    } else if (!peaks.empty()) {
      pits.push_back(ext[e].index);
    }
  }
  if (peaks.size() < 2) return {};
  pits.resize(peaks.size() - 1);  // drop a trailing pit that has no right peak

  while (!pits.empty()) {
    std::size_t worst = pits.size();
    double worst_volume = volume_threshold;
    for (std::size_t d = 0; d < pits.size(); ++d) {
      const double v = dale_volume(z, peaks[d], peaks[d + 1], dx);
      if (v < worst_volume) {
        worst_volume = v;
        worst = d;
      }
    }
    if (worst == pits.size()) break;

    // Remove the lower bounding peak; the dale joins its neighbor across it,
    // or the partial edge region when that peak is the outermost one.
    const bool drop_left = z[peaks[worst]] <= z[peaks[worst + 1]];
    const std::size_t peak_pos = drop_left ? worst : worst + 1;
    if (peak_pos == 0) {
      peaks.erase(peaks.begin());
      pits.erase(pits.begin());
    } else if (peak_pos == peaks.size() - 1) {
      peaks.pop_back();
      pits.pop_back();
    } else {
      const std::size_t a = pits[peak_pos - 1];
      const std::size_t b = pits[peak_pos];
      pits[peak_pos - 1] = z[b] < z[a] ? b : a;
      pits.erase(pits.begin() + static_cast<std::ptrdiff_t>(peak_pos));
      peaks.erase(peaks.begin() + static_cast<std::ptrdiff_t>(peak_pos));
    }
  }

  std::vector<Dale> out;
  for (std::size_t d = 0; d < pits.size(); ++d) {
    Dale dale;
    dale.left = peaks[d];
    dale.right = peaks[d + 1];
    dale.pit = pits[d];
    dale.width = p.x(dale.right) - p.x(dale.left);
    dale.volume = dale_volume(z, dale.left, dale.right, dx);
    out.push_back(dale);
  }
  return out;
}

Profile mask_smallest_width_dales(const Profile& p, std::size_t count, double volume_threshold) {
  if (count == 0) return p;
  auto dales = watershed_dales(p, volume_threshold);
  if (dales.size() < count) {
    throw InsufficientFeaturesError("requested " + std::to_string(count) + " dales but only " +
                                    std::to_string(dales.size()) + " were found");
  }
  std::stable_sort(dales.begin(), dales.end(), [](const Dale& a, const Dale& b) { return a.width < b.width; });
  std::vector<bool> valid = p.valid();
  for (std::size_t d = 0; d < count; ++d) {
    for (std::size_t i = dales[d].left + 1; i < dales[d].right; ++i) valid[i] = false;
  }
  return p.with_valid(std::move(valid));
}

std::vector<double> slope_magnitude(const Profile& p) {
  const std::size_t n = p.size();
  if (n < 2) throw InvalidArgument("slopes need at least two points");
  const auto& z = p.z();
  const double dx = p.grid().dx();
  std::vector<double> s(n);
  s[0] = std::abs(z[1] - z[0]) / dx;
  s[n - 1] = std::abs(z[n - 1] - z[n - 2]) / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) s[i] = std::abs(z[i + 1] - z[i - 1]) / (2.0 * dx);
  return s;
}

Profile mask_gradient(const Profile& p, double slope_threshold) {
  const auto s = slope_magnitude(p);
  std::vector<bool> valid = p.valid();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] > slope_threshold) valid[i] = false;
  }
  return p.with_valid(std::move(valid));
}

}  // namespace surfimp
