#include "surfimp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "surfimp/errors.hpp"
#include "surfimp/keyvalue.hpp"

namespace surfimp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

double field_number(const std::string& s, std::size_t line) {
  try {
    return parse_number(s);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line);
  }
}

// Reads a header line and the remaining non-empty rows, each with `width` fields.
std::vector<std::vector<double>> read_table(std::istream& is, const std::string& header, std::size_t width) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  if (line != header) throw ParseError("expected header '" + header + "'", lineno);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()), lineno);
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(field_number(f, lineno));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Smallest perturbation of dx that reproduces every abscissa exactly, so a
// profile read back writes the same x column.
Grid1D recover_grid(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 1) return Grid1D(x[0], 1.0, 1);
  const double guess = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
  if (!(guess > 0.0)) throw ParseError("x column must be strictly increasing", 0);

  auto exact = [&](double dx) {
    const Grid1D g(x[0], dx, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (g.point(i) != x[i]) return false;
    }
    return true;
  };
  double lo = guess;
  double hi = guess;
  for (int k = 0; k < 16; ++k) {
    if (exact(lo)) return Grid1D(x[0], lo, n);
    if (exact(hi)) return Grid1D(x[0], hi, n);
    lo = std::nextafter(lo, 0.0);
    hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  }
  const Grid1D g(x[0], guess, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(g.point(i) - x[i]) > 1e-6 * guess) {
      throw ParseError("x column is not evenly spaced", i + 2);
    }
  }
  return g;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

}  // namespace

void write_profile_csv(const Profile& p, std::ostream& os) {
  os << "x_mm,z_um,valid\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << format_number(p.x(i)) << ',' << format_number(p.z()[i]) << ',' << (p.is_valid(i) ? 1 : 0) << '\n';
  }
}

void write_profile_csv(const Profile& p, const std::string& path) {
  with_output(path, [&](std::ostream& os) { write_profile_csv(p, os); });
}

Profile read_profile_csv(std::istream& is) {
  const auto rows = read_table(is, "x_mm,z_um,valid", 3);
  if (rows.empty()) throw EmptyDatasetError("profile file has no rows");
  std::vector<double> x, z;
  std::vector<bool> valid;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x.push_back(rows[r][0]);
    z.push_back(rows[r][1]);
    if (rows[r][2] != 0.0 && rows[r][2] != 1.0) throw ParseError("valid flag must be 0 or 1", r + 2);
    const bool v = rows[r][2] == 1.0;
    if (v && !std::isfinite(rows[r][1])) throw ParseError("valid point has a non-finite height", r + 2);
    valid.push_back(v);
  }
  return Profile(recover_grid(x), std::move(z), std::move(valid));
}

Profile read_profile_csv(const std::string& path) {
  auto in = open_input(path);
  return read_profile_csv(in);
}

std::vector<PosteriorRow> posterior_rows(const ImputationResult& r, const Grid1D& grid) {
  std::vector<PosteriorRow> out;
  for (std::size_t k = 0; k < r.indices.size(); ++k) {
    out.push_back({grid.point(r.indices[k]), r.mean[k], r.lo95[k], r.hi95[k]});
  }
  return out;
}

void write_posterior_csv(const std::vector<PosteriorRow>& rows, std::ostream& os) {
  os << "x_mm,post_mean,post_lo95,post_hi95\n";
  for (const auto& r : rows) {
    os << format_number(r.x) << ',' << format_number(r.mean) << ',' << format_number(r.lo95) << ','
       << format_number(r.hi95) << '\n';
  }
}

void write_posterior_csv(const std::vector<PosteriorRow>& rows, const std::string& path) {
  with_output(path, [&](std::ostream& os) { write_posterior_csv(rows, os); });
}

std::vector<PosteriorRow> read_posterior_csv(std::istream& is) {
  std::vector<PosteriorRow> out;
  for (const auto& r : read_table(is, "x_mm,post_mean,post_lo95,post_hi95", 4)) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

std::vector<PosteriorRow> read_posterior_csv(const std::string& path) {
  auto in = open_input(path);
  return read_posterior_csv(in);
}

// ---------------------------------------------------------------------------

EvalReport evaluate(const Profile& truth, const Profile& imputed, const Profile& masked,
                    const std::vector<PosteriorRow>* posterior) {
  if (!grids_match(truth.grid(), imputed.grid()) || !grids_match(truth.grid(), masked.grid())) {
    throw GridMismatchError("truth, imputed and masked profiles are on different grids");
  }
  if (!truth.fully_valid()) throw InvalidArgument("the reference profile must be fully valid");

  EvalReport r;
  r.n_total = truth.size();
  std::vector<std::size_t> masked_idx;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (!masked.is_valid(i)) masked_idx.push_back(i);
  }
  r.n_masked = masked_idx.size();
  r.n_valid = r.n_total - r.n_masked;
  if (masked_idx.empty()) throw NothingToImputeError();

  double se = 0.0;
  double ae = 0.0;
  for (std::size_t i : masked_idx) {
    if (!imputed.is_valid(i)) throw InvalidArgument("imputed profile is missing point " + std::to_string(i));
    const double d = imputed.z()[i] - truth.z()[i];
    se += d * d;
    ae += std::abs(d);
  }
  const auto m = static_cast<double>(masked_idx.size());
  r.rmse = std::sqrt(se / m);
  r.mae = ae / m;

  if (posterior) {
    if (posterior->size() != masked_idx.size()) {
      throw GridMismatchError("posterior rows do not match the masked points");
    }
    std::size_t inside = 0;
    const double tol = 1e-6 * truth.grid().dx();
    for (std::size_t k = 0; k < masked_idx.size(); ++k) {
      const auto& row = (*posterior)[k];
      if (std::abs(row.x - truth.x(masked_idx[k])) > tol) {
        throw GridMismatchError("posterior row " + std::to_string(k) + " is not at a masked location");
      }
      const double z = truth.z()[masked_idx[k]];
      if (z >= row.lo95 && z <= row.hi95) ++inside;
    }
    r.coverage = static_cast<double>(inside) / m;
  }

  r.delta_rq = rq(imputed) - rq(truth);
  try {
    r.delta_rsm = rsm(imputed) - rsm(truth);
  } catch (const NoElementsError&) {
    r.delta_rsm = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void write_eval_csv(const EvalReport& r, std::ostream& os) {
  os << "rmse_um,mae_um,coverage,delta_rq_um,delta_rsm_mm,n_total,n_masked,n_valid\n";
  os << format_number(r.rmse) << ',' << format_number(r.mae) << ','
     << (r.coverage ? format_number(*r.coverage) : std::string("nan")) << ',' << format_number(r.delta_rq) << ','
     << format_number(r.delta_rsm) << ',' << r.n_total << ',' << r.n_masked << ',' << r.n_valid << '\n';
}

std::string format_eval(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "points    %zu total, %zu masked, %zu valid\n"
                "rmse      %.6g um\n"
                "mae       %.6g um\n"
                "coverage  %s\n"
                "delta Rq  %.6g um\n"
                "delta Rsm %.6g mm\n",
                r.n_total, r.n_masked, r.n_valid, r.rmse, r.mae,
                r.coverage ? std::to_string(*r.coverage).c_str() : "n/a", r.delta_rq, r.delta_rsm);
  return buf;
}

}  // namespace surfimp
