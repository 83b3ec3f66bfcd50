#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "surfimp/io.hpp"
#include "surfimp/profile.hpp"

namespace surfimp {

/// Layers of a profile figure. `measured` is required; the missing points of
/// `measured` are drawn as shaded spans.
struct PlotInput {
  Profile measured;
  std::optional<Profile> truth;
  std::optional<Profile> imputed;
  std::vector<PosteriorRow> posterior;
  std::string title;
};

/// Static SVG: one `<rect class="masked">` per missing run, a `<polygon
/// class="band">` for the 95% band, and `<polyline>`s classed truth, valid
/// and imputed.
void write_svg(const PlotInput& in, std::ostream& os, double width = 900.0, double height = 320.0);
void write_svg(const PlotInput& in, const std::string& path);

/// Contiguous runs [begin, end) of missing points.
std::vector<std::pair<std::size_t, std::size_t>> missing_runs(const Profile& p);

}  // namespace surfimp
