#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace surfimp {

/// Evenly spaced abscissa x_i = x0 + i*dx, i in [0, n). Lengths in mm.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double x0, double dx, std::size_t n);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return n_; }
  double point(std::size_t i) const { return x0_ + static_cast<double>(i) * dx_; }
  std::vector<double> points() const;
  double nyquist() const { return 0.5 / dx_; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::size_t n_ = 1;
};

Grid1D make_grid(double x0, double dx, std::size_t n);

/// Same size and every abscissa within 1e-6 dx; tolerates grids recovered from text.
bool grids_match(const Grid1D& a, const Grid1D& b);

/// Heights in um on a grid; invalid (spurious) points may hold NaN.
class Profile {
 public:
  Profile() = default;
  Profile(Grid1D grid, std::vector<double> z, std::vector<bool> valid);
  static Profile all_valid(Grid1D grid, std::vector<double> z);

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return z_.size(); }
  const std::vector<double>& z() const { return z_; }
  const std::vector<bool>& valid() const { return valid_; }
  double x(std::size_t i) const { return grid_.point(i); }
  bool is_valid(std::size_t i) const { return valid_[i]; }

  std::size_t valid_count() const;
  std::size_t invalid_count() const { return size() - valid_count(); }
  bool fully_valid() const { return valid_count() == size(); }

  /// Copy with validity replaced. Heights are untouched.
  Profile with_valid(std::vector<bool> valid) const;
  /// Copy with heights replaced at the given indices and those indices marked valid.
  Profile with_filled(std::span<const std::size_t> indices, std::span<const double> values) const;

 private:
  Grid1D grid_;
  std::vector<double> z_{0.0};
  std::vector<bool> valid_{true};
};

/// Valid pairs (xa, za) and missing locations xm, with their grid indices.
struct SurfaceDataset {
  std::vector<double> xa;
  std::vector<double> za;
  std::vector<double> xm;
  std::vector<std::size_t> ia;
  std::vector<std::size_t> im;

  std::size_t n_valid() const { return xa.size(); }
  std::size_t n_missing() const { return xm.size(); }
  SurfaceDataset centered(double offset) const;
};

SurfaceDataset split_dataset(const Profile& p);
/// Inverse of split_dataset: valid heights from the dataset, NaN at missing points.
Profile merge_dataset(const Grid1D& grid, const SurfaceDataset& ds);

double valid_mean(const Profile& p);
double rq(const Profile& p);
double rsm(const Profile& p);

/// Linear Gaussian profile filter (50% transmission at the nesting index), with
/// truncated weights renormalized near the profile ends.
Profile gaussian_filter(const Profile& p, double nesting_index);

/// Subtract the valid mean from all heights (invalid entries stay NaN).
Profile remove_mean(const Profile& p);

}  // namespace surfimp
