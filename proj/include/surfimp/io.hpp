#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "surfimp/gp.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

/// Profile CSV: header `x_mm,z_um,valid`, one row per grid point, 17 significant
/// digits, `nan` for missing heights. Reading recovers the grid from the x
/// column and rejects uneven spacing.
void write_profile_csv(const Profile& p, std::ostream& os);
void write_profile_csv(const Profile& p, const std::string& path);
Profile read_profile_csv(std::istream& is);
Profile read_profile_csv(const std::string& path);

/// Predictive mean and central 95% interval at the imputed locations.
struct PosteriorRow {
  double x = 0.0;
  double mean = 0.0;
  double lo95 = 0.0;
  double hi95 = 0.0;
};

std::vector<PosteriorRow> posterior_rows(const ImputationResult& r, const Grid1D& grid);

/// Header `x_mm,post_mean,post_lo95,post_hi95`.
void write_posterior_csv(const std::vector<PosteriorRow>& rows, std::ostream& os);
void write_posterior_csv(const std::vector<PosteriorRow>& rows, const std::string& path);
std::vector<PosteriorRow> read_posterior_csv(std::istream& is);
std::vector<PosteriorRow> read_posterior_csv(const std::string& path);

/// Imputation error at the points that were missing in the masked input.
struct EvalReport {
  double rmse = 0.0;                    // um
  double mae = 0.0;                     // um
  std::optional<double> coverage;       // fraction of truths inside the 95% band
  double delta_rq = 0.0;                // imputed - truth, um
  double delta_rsm = 0.0;               // imputed - truth, mm; NaN if undefined
  std::size_t n_total = 0;
  std::size_t n_masked = 0;
  std::size_t n_valid = 0;
};

/// Throws GridMismatchError unless all profiles share a grid, and
/// InvalidArgument if the imputed profile still has missing points where the
/// masked input did. Posterior rows must sit on the masked locations.
EvalReport evaluate(const Profile& truth, const Profile& imputed, const Profile& masked,
                    const std::vector<PosteriorRow>* posterior = nullptr);

void write_eval_csv(const EvalReport& r, std::ostream& os);
std::string format_eval(const EvalReport& r);

}  // namespace surfimp
