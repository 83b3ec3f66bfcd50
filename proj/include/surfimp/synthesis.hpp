#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "surfimp/kernels.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

/// Periodic-kernel profile plus colored noise. Defaults reproduce the turned
/// profile parameters on a 2000-point grid.
struct TurnedSimConfig {
  double variance = 10.0;         // um^2
  double shape = 0.8;
  double period = 0.1;            // mm
  double noise_variance = 0.02;   // um^2
  double noise_corr = 0.001;      // mm
  Grid1D grid{0.0, 5e-4, 2000};
  std::uint64_t seed = 1;

  void validate() const;
};

/// Cosine with a wavelength that steps up after every segment,
/// lambda_k = 10^(1 + k/k_max) um, plus colored noise.
struct ChirpConfig {
  double amplitude = 5.0;          // double amplitude a, um
  std::size_t k_max = 24;
  double noise_variance = 1e-4;    // um^2
  double noise_corr = 0.02;        // mm
  Grid1D grid{0.0, 2.5e-5, 5000};
  std::uint64_t seed = 1;

  void validate() const;
};

/// A valley between two bounding peaks.
struct Dale {
  std::size_t pit = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  double width = 0.0;   // mm
  double volume = 0.0;  // um*mm
};

Profile simulate_turned(const TurnedSimConfig& cfg);
Profile simulate_chirp(const ChirpConfig& cfg);

/// Noise-free chirp heights and the local wavelength (mm) at each grid point.
std::vector<double> chirp_heights(const ChirpConfig& cfg);
std::vector<double> chirp_wavelengths(const ChirpConfig& cfg);

/// One zero-mean Gaussian draw with the kernel's covariance on xs.
std::vector<double> sample_prior(const Kernel& k, std::span<const double> xs, std::uint64_t seed);

/// Watershed dales with volume pruning; sorted by pit position.
std::vector<Dale> watershed_dales(const Profile& p, double volume_threshold = 0.0);

/// Marks the points strictly inside the `count` narrowest dales invalid.
Profile mask_smallest_width_dales(const Profile& p, std::size_t count, double volume_threshold = 0.0);

/// Marks points whose finite-difference slope magnitude (um/mm) exceeds the
/// threshold invalid. Already invalid points stay invalid.
Profile mask_gradient(const Profile& p, double slope_threshold);

/// |dz/dx| with central differences inside and one-sided differences at the ends.
std::vector<double> slope_magnitude(const Profile& p);

}  // namespace surfimp
