#include "surfimp/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "surfimp/errors.hpp"

namespace surfimp {

Grid1D::Grid1D(double x0, double dx, std::size_t n) : x0_(x0), dx_(dx), n_(n) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("grid spacing must be positive");
  if (n == 0) throw InvalidArgument("grid must have at least one point");
  if (!std::isfinite(x0)) throw InvalidArgument("grid origin must be finite");
}

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = point(i);
  return xs;
}

Grid1D make_grid(double x0, double dx, std::size_t n) { return Grid1D(x0, dx, n); }

bool grids_match(const Grid1D& a, const Grid1D& b) {
  if (a.size() != b.size()) return false;
  const double tol = 1e-6 * std::max(a.dx(), b.dx());
  const std::size_t last = a.size() - 1;
  return std::abs(a.point(0) - b.point(0)) <= tol && std::abs(a.point(last) - b.point(last)) <= tol;
}

Profile::Profile(Grid1D grid, std::vector<double> z, std::vector<bool> valid)
    : grid_(grid), z_(std::move(z)), valid_(std::move(valid)) {
  if (z_.size() != grid_.size() || valid_.size() != grid_.size()) {
    throw InvalidArgument("profile heights and validity must match the grid size");
  }
  for (std::size_t i = 0; i < z_.size(); ++i) {
    if (valid_[i] && !std::isfinite(z_[i])) {
      throw InvalidArgument("valid point " + std::to_string(i) + " has a non-finite height");
    }
  }
}

Profile Profile::all_valid(Grid1D grid, std::vector<double> z) {
  std::vector<bool> valid(z.size(), true);
  return Profile(grid, std::move(z), std::move(valid));
}

std::size_t Profile::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), true));
}

Profile Profile::with_valid(std::vector<bool> valid) const { return Profile(grid_, z_, std::move(valid)); }

Profile Profile::with_filled(std::span<const std::size_t> indices, std::span<const double> values) const {
  if (indices.size() != values.size()) throw InvalidArgument("fill indices and values differ in length");
  std::vector<double> z = z_;
  std::vector<bool> valid = valid_;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    z.at(indices[k]) = values[k];
    valid[indices[k]] = true;
  }
  return Profile(grid_, std::move(z), std::move(valid));
}

SurfaceDataset SurfaceDataset::centered(double offset) const {
  SurfaceDataset out = *this;
  for (double& z : out.za) z -= offset;
  return out;
}

SurfaceDataset split_dataset(const Profile& p) {
  SurfaceDataset ds;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.is_valid(i)) {
      ds.xa.push_back(p.x(i));
      ds.za.push_back(p.z()[i]);
      ds.ia.push_back(i);
    } else {
      ds.xm.push_back(p.x(i));
      ds.im.push_back(i);
    }
  }
  if (ds.xa.empty()) throw EmptyDatasetError();
  return ds;
}

Profile merge_dataset(const Grid1D& grid, const SurfaceDataset& ds) {
  std::vector<double> z(grid.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> valid(grid.size(), false);
  for (std::size_t k = 0; k < ds.ia.size(); ++k) {
    z.at(ds.ia[k]) = ds.za[k];
    valid[ds.ia[k]] = true;
  }
  return Profile(grid, std::move(z), std::move(valid));
}

double valid_mean(const Profile& p) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.is_valid(i)) {
      sum += p.z()[i];
      ++n;
    }
  }
  if (n == 0) throw EmptyDatasetError();
  return sum / static_cast<double>(n);
}

double rq(const Profile& p) {
  const double mean = valid_mean(p);
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.is_valid(i)) continue;
    const double d = p.z()[i] - mean;
    ss += d * d;
    ++n;
  }
  return std::sqrt(ss / static_cast<double>(n));
}

// Upward mean-line crossings with a +-10% Rq hysteresis band. A crossing is
// registered when the profile moves from below -h to above +h; its position is
// the interpolated zero of the last sign change in between. Gaps reset the
// detector and spacings are only taken inside one contiguous valid run.
double rsm(const Profile& p) {
  const double mean = valid_mean(p);
  const double band = 0.1 * rq(p);
  const auto& z = p.z();

  enum class Side { unknown, below, above };
  Side side = Side::unknown;
  std::size_t last_below = 0;
  double prev_crossing = 0.0;
  bool have_prev = false;
  double spacing_sum = 0.0;
  std::size_t spacings = 0;

  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.is_valid(i)) {
      side = Side::unknown;
      have_prev = false;
      continue;
    }
    const double d = z[i] - mean;
    if (d < -band) {
      side = Side::below;
      last_below = i;
    } else if (d > band) {
      if (side == Side::below) {
        std::size_t j = i;
        while (j > last_below && z[j - 1] - mean > 0.0) --j;
        // z[j-1] <= mean < z[j]
        const double d0 = z[j - 1] - mean;
        const double d1 = z[j] - mean;
        const double pos = p.x(j - 1) + p.grid().dx() * (-d0 / (d1 - d0));
        if (have_prev) {
          spacing_sum += pos - prev_crossing;
          ++spacings;
        }
        prev_crossing = pos;
        have_prev = true;
      }
      side = Side::above;
    }
  }
  if (spacings == 0) throw NoElementsError("fewer than two profile elements found for Rsm");
  return spacing_sum / static_cast<double>(spacings);
}

Profile gaussian_filter(const Profile& p, double nesting_index) {
  if (!p.fully_valid()) throw MustImputeFirstError();
  const double dx = p.grid().dx();
  if (!(nesting_index > dx)) throw InvalidArgument("nesting index must exceed the sampling spacing");

  const double alpha = std::sqrt(std::numbers::ln2 / std::numbers::pi);
  const double scale = alpha * nesting_index;
  const auto half = static_cast<std::ptrdiff_t>(std::floor(nesting_index / dx));
  std::vector<double> weights(static_cast<std::size_t>(half) + 1);
  for (std::ptrdiff_t k = 0; k <= half; ++k) {
    const double u = static_cast<double>(k) * dx / scale;
    weights[static_cast<std::size_t>(k)] = std::exp(-std::numbers::pi * u * u);
  }

  const auto n = static_cast<std::ptrdiff_t>(p.size());
  const auto& z = p.z();
  std::vector<double> out(p.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double acc = 0.0;
    double wsum = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      const double w = weights[static_cast<std::size_t>(std::abs(i - j))];
      acc += w * z[static_cast<std::size_t>(j)];
      wsum += w;
    }
    out[static_cast<std::size_t>(i)] = acc / wsum;
  }
  return Profile::all_valid(p.grid(), std::move(out));
}

Profile remove_mean(const Profile& p) {
  const double mean = valid_mean(p);
  std::vector<double> z = p.z();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (p.is_valid(i)) z[i] -= mean;
  }
  return Profile(p.grid(), std::move(z), p.valid());
}

}  // namespace surfimp
