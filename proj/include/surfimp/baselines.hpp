#pragma once

#include <cstddef>
#include <optional>

#include "surfimp/profile.hpp"

namespace surfimp {

enum class Statistic { mean, median };

/// Every missing point gets the mean or median of the valid heights.
Profile impute_constant(const Profile& p, Statistic statistic);

/// Each missing point gets the mean of the nearest valid point on either side
/// (only one side at the profile ends), so gaps become flat plateaus.
Profile impute_nn_mean(const Profile& p);

/// Repeated median filtering over a centered odd window. Each pass fills the
/// missing points that see at least one known value, using the values known
/// at the start of the pass. Throws PartialFillError if points remain after
/// max_passes.
Profile impute_median_filter(const Profile& p, std::size_t window, std::size_t max_passes);

/// Inverse-distance weighting over valid points within `radius` (mm);
/// radius defaults to 10 grid steps. Throws CoverageError when a missing point
/// has no valid point in range.
Profile impute_idw(const Profile& p, double power = 2.0, std::optional<double> radius = std::nullopt);

double median_of(std::vector<double> values);

}  // namespace surfimp
