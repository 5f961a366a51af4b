#ifndef CLANSIM_PLOT_HPP
#define CLANSIM_PLOT_HPP

#include <string>

#include "clansim/contours.hpp"
#include "clansim/records.hpp"

namespace clansim {

/// SVG figure of record `index` of a sample file (the first record with that
/// index). Germs are drawn with their grain outlines, contours as closed
/// polylines on the lattice, calls as segments stacked by overlap, sites and
/// bond animals on their grids. A file without records gives an empty canvas
/// with the legend. Output depends only on the inputs.
std::string render_svg(const SampleFile& file, const RunSpec& spec, const Model& m,
                       std::uint64_t index);

/// Stack level of each call: the lowest level whose calls all end strictly
/// before it starts. Calls are taken in the given order.
std::vector<int> stack_levels(const std::vector<Call>& calls);

/// Closed walks covering every link of a contour once.
std::vector<std::vector<Eigen::Vector2i>> contour_walks(const std::vector<Link>& links);

}  // namespace clansim

#endif  // CLANSIM_PLOT_HPP
