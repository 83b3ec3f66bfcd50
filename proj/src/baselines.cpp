#include "surfimp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "surfimp/errors.hpp"

namespace surfimp {

double median_of(std::vector<double> values) {
  if (values.empty()) throw EmptyDatasetError("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

std::vector<double> valid_heights(const Profile& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.is_valid(i)) out.push_back(p.z()[i]);
  }
  if (out.empty()) throw EmptyDatasetError();
  return out;
}

Profile filled(const Profile& p, std::vector<double> z) {
  return Profile::all_valid(p.grid(), std::move(z));
}

}  // namespace

Profile impute_constant(const Profile& p, Statistic statistic) {
  const auto values = valid_heights(p);
  const double fill = statistic == Statistic::mean ? valid_mean(p) : median_of(values);
  std::vector<double> z = p.z();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!p.is_valid(i)) z[i] = fill;
  }
  return filled(p, std::move(z));
}

Profile impute_nn_mean(const Profile& p) {
  valid_heights(p);
  const std::size_t n = p.size();
  std::vector<double> z = p.z();
  std::size_t i = 0;
  while (i < n) {
    if (p.is_valid(i)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && !p.is_valid(end)) ++end;
    double fill = 0.0;
    if (i > 0 && end < n) {
      fill = 0.5 * (p.z()[i - 1] + p.z()[end]);
    } else if (i > 0) {
      fill = p.z()[i - 1];
    } else {
      fill = p.z()[end];
    }
    for (std::size_t k = i; k < end; ++k) z[k] = fill;
    i = end;
  }
  return filled(p, std::move(z));
}

Profile impute_median_filter(const Profile& p, std::size_t window, std::size_t max_passes) {
  if (window < 3 || window % 2 == 0) throw InvalidArgument("median filter window must be odd and at least 3");
  valid_heights(p);
  const std::size_t n = p.size();
  const std::size_t half = window / 2;
  std::vector<double> z = p.z();
  std::vector<bool> known = p.valid();
  std::vector<double> neighborhood;

  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    std::vector<double> next = z;
    std::vector<bool> next_known = known;
    bool any_missing = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (known[i]) continue;
      neighborhood.clear();
      const std::size_t lo = i >= half ? i - half : 0;
      const std::size_t hi = std::min(n - 1, i + half);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (known[j]) neighborhood.push_back(z[j]);
      }
      if (neighborhood.empty()) {
        any_missing = true;
        continue;
      }
      next[i] = median_of(neighborhood);
      next_known[i] = true;
    }
    z = std::move(next);
    known = std::move(next_known);
    if (!any_missing) break;
  }

  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < n; ++i) {
    if (!known[i]) remaining.push_back(i);
  }
  if (!remaining.empty()) {
    throw PartialFillError(std::to_string(remaining.size()) + " points still missing after " +
                               std::to_string(max_passes) + " median filter passes",
                           std::move(remaining));
  }
  return filled(p, std::move(z));
}

Profile impute_idw(const Profile& p, double power, std::optional<double> radius) {
  if (!(power > 0.0)) throw InvalidArgument("IDW power must be positive");
  const double r = radius ? *radius : 10.0 * p.grid().dx();
  if (!(r > 0.0)) throw InvalidArgument("IDW radius must be positive");
  valid_heights(p);
  const std::size_t n = p.size();
  const double dx = p.grid().dx();
  const auto reach = static_cast<std::size_t>(std::floor(r / dx + 1e-9));
  const double limit = r * (1.0 + 1e-12);
  std::vector<double> z = p.z();

  for (std::size_t i = 0; i < n; ++i) {
    if (p.is_valid(i)) continue;
    const std::size_t lo = i >= reach ? i - reach : 0;
    const std::size_t hi = std::min(n - 1, i + reach);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (!p.is_valid(j)) continue;
      const double d = std::abs(p.x(i) - p.x(j));
      if (d > limit) continue;
      const double w = std::pow(d, -power);
      num += w * p.z()[j];
      den += w;
    }
    if (den == 0.0) {
      throw CoverageError("no valid point within " + std::to_string(r) + " mm of missing point " + std::to_string(i));
    }
    z[i] = num / den;
  }
  return filled(p, std::move(z));
}

}  // namespace surfimp
