#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace surfimp {

struct OptConfig {
  std::size_t max_iterations = 500;
  double step_size = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double tolerance = 1e-7;          // relative objective change ...
  std::size_t tolerance_window = 10;  // ... over this many iterations
  std::uint64_t seed = 0;           // used by callers for restart perturbations

  void validate() const;
};

enum class Termination { converged, max_iterations, non_finite };
std::string to_string(Termination t);

struct OptTrace {
  std::vector<double> objective;  // objective at each evaluated iterate, x0 first
  std::vector<double> best;       // running maximum of `objective`
  std::vector<double> final_params;
  Termination reason = Termination::max_iterations;
  std::size_t best_iteration = 0;
};

struct OptResult {
  std::vector<double> x;
  double value = 0.0;
  OptTrace trace;
};

/// Objective returning f(x) and writing df/dx into `grad`.
using ObjectiveWithGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;
using ScalarObjective = std::function<double(std::span<const double> x)>;

/// Adaptive-moment (Adam) gradient ascent. Returns the best iterate seen; a
/// non-finite objective ends the run with the last finite best.
OptResult maximize(const ObjectiveWithGradient& objective, std::vector<double> x0, const OptConfig& cfg = {});

/// Central differences per coordinate.
std::vector<double> fd_gradient(const ScalarObjective& objective, std::span<const double> x, double step = 1e-5);

/// max_i |a_i - b_i| / max(|b_i|, floor) with floor = 1e-4 * max(1, max_j |b_j|).
/// Used as the gradient agreement measure against finite differences.
double max_relative_error(std::span<const double> a, std::span<const double> b);

/// CSV with header `iteration,objective`.
void write_trace_csv(const OptTrace& trace, std::ostream& os);

}  // namespace surfimp
