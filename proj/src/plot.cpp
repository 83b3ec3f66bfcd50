#include "surfimp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "surfimp/errors.hpp"

namespace surfimp {

std::vector<std::pair<std::size_t, std::size_t>> missing_runs(const Profile& p) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < p.size()) {
    if (p.is_valid(i)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < p.size() && !p.is_valid(end)) ++end;
    runs.emplace_back(i, end);
    i = end;
  }
  return runs;
}

namespace {

struct Frame {
  double x0, x1, z0, z1;
  double width, height, margin;

  double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
  double py(double z) const { return height - margin - (z - z0) / (z1 - z0) * (height - 2 * margin); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void extend(double v, double& lo, double& hi) {
  if (!std::isfinite(v)) return;
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

// Polylines break at missing points so gaps stay visible.
void polylines(std::ostream& os, const Frame& f, const Profile& p, bool only_valid, const char* cls) {
  std::string pts;
  auto flush = [&] {
    if (!pts.empty()) os << "  <polyline class=\"" << cls << "\" points=\"" << pts << "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool use = std::isfinite(p.z()[i]) && (!only_valid || p.is_valid(i));
    if (!use) {
      flush();
      continue;
    }
    if (!pts.empty()) pts += ' ';
    pts += fmt(f.px(p.x(i))) + "," + fmt(f.py(p.z()[i]));
  }
  flush();
}

}  // namespace

void write_svg(const PlotInput& in, std::ostream& os, double width, double height) {
  const Profile& m = in.measured;
  if (m.size() < 2) throw EmptyDatasetError("nothing to plot");
  for (const auto* other : {in.truth ? &*in.truth : nullptr, in.imputed ? &*in.imputed : nullptr}) {
    if (other && !grids_match(other->grid(), m.grid())) throw GridMismatchError("plot layers are on different grids");
  }

  double zlo = std::numeric_limits<double>::infinity();
  double zhi = -zlo;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.is_valid(i)) extend(m.z()[i], zlo, zhi);
    if (in.truth) extend(in.truth->z()[i], zlo, zhi);
    if (in.imputed) extend(in.imputed->z()[i], zlo, zhi);
  }
  for (const auto& r : in.posterior) {
    extend(r.lo95, zlo, zhi);
    extend(r.hi95, zlo, zhi);
  }
  if (!std::isfinite(zlo)) throw EmptyDatasetError("no finite heights to plot");
  if (zhi - zlo < 1e-12) {
    zlo -= 1.0;
    zhi += 1.0;
  }
  const Frame f{m.x(0), m.x(m.size() - 1), zlo, zhi, width, height, 40.0};

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
     << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  os << "  <style>\n"
        "    .masked { fill: #f2c4c4; stroke: none; }\n"
        "    .band { fill: #9ecae1; fill-opacity: 0.5; stroke: none; }\n"
        "    .truth { fill: none; stroke: #555; stroke-width: 1; stroke-dasharray: 4 2; }\n"
        "    .valid { fill: none; stroke: #08519c; stroke-width: 1.2; }\n"
        "    .imputed { fill: none; stroke: #d94801; stroke-width: 1.2; }\n"
        "    .axis { stroke: #000; stroke-width: 1; }\n"
        "    text { font: 12px sans-serif; }\n"
        "  </style>\n";
  if (!in.title.empty()) os << "  <text x=\"" << fmt(f.margin) << "\" y=\"20\">" << in.title << "</text>\n";

  const double half = 0.5 * m.grid().dx();
  for (const auto& [b, e] : missing_runs(m)) {
    const double xa = f.px(std::max(m.x(b) - half, f.x0));
    const double xb = f.px(std::min(m.x(e - 1) + half, f.x1));
    os << "  <rect class=\"masked\" data-begin=\"" << b << "\" data-end=\"" << e << "\" x=\"" << fmt(xa) << "\" y=\""
       << fmt(f.margin) << "\" width=\"" << fmt(xb - xa) << "\" height=\"" << fmt(height - 2 * f.margin) << "\"/>\n";
  }

  if (!in.posterior.empty()) {
    std::string pts;
    for (const auto& r : in.posterior) pts += fmt(f.px(r.x)) + "," + fmt(f.py(r.hi95)) + " ";
    for (auto it = in.posterior.rbegin(); it != in.posterior.rend(); ++it) {
      pts += fmt(f.px(it->x)) + "," + fmt(f.py(it->lo95)) + " ";
    }
    pts.pop_back();
    os << "  <polygon class=\"band\" points=\"" << pts << "\"/>\n";
  }

  if (in.truth) polylines(os, f, *in.truth, false, "truth");
  if (in.imputed) polylines(os, f, *in.imputed, false, "imputed");
  polylines(os, f, m, true, "valid");

  const double base = height - f.margin;
  os << "  <line class=\"axis\" x1=\"" << fmt(f.margin) << "\" y1=\"" << fmt(base) << "\" x2=\"" << fmt(width - f.margin)
     << "\" y2=\"" << fmt(base) << "\"/>\n";
  os << "  <line class=\"axis\" x1=\"" << fmt(f.margin) << "\" y1=\"" << fmt(f.margin) << "\" x2=\"" << fmt(f.margin)
     << "\" y2=\"" << fmt(base) << "\"/>\n";
  os << "  <text x=\"" << fmt(width - f.margin - 30) << "\" y=\"" << fmt(height - 10) << "\">x / mm</text>\n";
  os << "  <text x=\"4\" y=\"" << fmt(f.margin - 8) << "\">z / um</text>\n";
  char range[128];
  std::snprintf(range, sizeof range, "%.4g to %.4g mm, %.3g to %.3g um", f.x0, f.x1, f.z0, f.z1);
  os << "  <text x=\"" << fmt(f.margin) << "\" y=\"" << fmt(height - 10) << "\">" << range << "</text>\n";
  os << "</svg>\n";
}

void write_svg(const PlotInput& in, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_svg(in, out);
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace surfimp
