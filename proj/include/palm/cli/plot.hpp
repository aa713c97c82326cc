#pragma once

#include <string>

namespace palm::cli {

// Renders static images from a run directory: an SVG of the loss history per
// trial and a PPM heatmap (2-D) or SVG profile (1-D) of the prediction grid.
// Returns the number of files written.
int plot_run(const std::string& run_dir);

}  // namespace palm::cli
