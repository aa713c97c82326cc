#include "palm/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace palm::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// log-scale polyline plot of selected columns over epochs
bool history_svg(const fs::path& csv, const fs::path& out) {
  const auto rows = read_csv(csv);
  if (rows.size() < 3) return false;
  const auto& header = rows.front();
  std::vector<std::size_t> cols;
  std::vector<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h == "J" || h == "L" || h.rfind("C_", 0) == 0) {
      cols.push_back(c);
      names.push_back(h);
    }
  }
  const double W = 900, H = 560, ml = 70, mb = 40, mt = 20, mr = 150;
  double ymin = 1e300, ymax = -1e300;
  const double xmax = rows.size() - 1.0;
  std::vector<std::vector<std::pair<double, double>>> series(cols.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= rows[r].size() || rows[r][cols[k]].empty()) continue;
      const double v = std::fabs(std::atof(rows[r][cols[k]].c_str()));
      if (v <= 0.0 || !std::isfinite(v)) continue;
      const double lv = std::log10(v);
      ymin = std::min(ymin, lv);
      ymax = std::max(ymax, lv);
      series[k].push_back({static_cast<double>(r), lv});
    }
  }
  if (ymax <= ymin) return false;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf"};
  std::ofstream f(out);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  f << "<rect width='100%' height='100%' fill='white'/>\n";
  auto X = [&](double e) { return ml + (W - ml - mr) * e / xmax; };
  auto Y = [&](double lv) { return H - mb - (H - mb - mt) * (lv - ymin) / (ymax - ymin); };
  for (int g = static_cast<int>(std::ceil(ymin)); g <= static_cast<int>(std::floor(ymax)); ++g) {
    f << "<line x1='" << ml << "' y1='" << Y(g) << "' x2='" << W - mr << "' y2='" << Y(g)
      << "' stroke='#dddddd'/>\n";
    f << "<text x='8' y='" << Y(g) + 4 << "' font-size='12'>1e" << g << "</text>\n";
  }
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (series[k].empty()) continue;
    f << "<polyline fill='none' stroke='" << palette[k % 7] << "' stroke-width='1.2' points='";
    for (const auto& [e, lv] : series[k]) f << X(e) << ',' << Y(lv) << ' ';
    f << "'/>\n";
    f << "<text x='" << W - mr + 10 << "' y='" << mt + 16 * (k + 1) << "' font-size='13' fill='"
      << palette[k % 7] << "'>" << names[k] << "</text>\n";
  }
  f << "<text x='" << W / 2 << "' y='" << H - 8 << "' font-size='13'>epoch</text>\n";
  f << "</svg>\n";
  return true;
}

// heatmap of the last prediction column over the first two coordinates
bool prediction_image(const fs::path& csv, const fs::path& out_ppm, const fs::path& out_svg) {
  const auto rows = read_csv(csv);
  if (rows.size() < 2) return false;
  const auto& header = rows.front();
  int dim = 0;
  while (dim < static_cast<int>(header.size()) && header[dim].rfind("x", 0) == 0) ++dim;
  int pred_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == "pred_0") pred_col = static_cast<int>(c);
  if (pred_col < 0) return false;

  if (dim == 1) {
    std::ofstream f(out_svg);
    const double W = 900, H = 400;
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>";
    f << "<rect width='100%' height='100%' fill='white'/><polyline fill='none' stroke='#1f77b4' points='";
    double vmin = 1e300, vmax = -1e300;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double v = std::atof(rows[r][pred_col].c_str());
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double x = std::atof(rows[r][0].c_str());
      const double v = std::atof(rows[r][pred_col].c_str());
      f << 40 + x * (W - 80) << ',' << H - 30 - (v - vmin) / (vmax - vmin + 1e-300) * (H - 60) << ' ';
    }
    f << "'/></svg>\n";
    return true;
  }

  // map distinct x0/x1 values to pixel coordinates
  std::map<double, int> xs, ys;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    xs.emplace(std::atof(rows[r][0].c_str()), 0);
    ys.emplace(std::atof(rows[r][1].c_str()), 0);
  }
  int i = 0;
  for (auto& [k, v] : xs) v = i++;
  i = 0;
  for (auto& [k, v] : ys) v = i++;
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
  std::vector<double> img(static_cast<std::size_t>(nx) * ny, 0.0);
  double vmin = 1e300, vmax = -1e300;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const int ix = xs[std::atof(rows[r][0].c_str())];
    const int iy = ys[std::atof(rows[r][1].c_str())];
    const double v = std::atof(rows[r][pred_col].c_str());
    img[static_cast<std::size_t>(iy) * nx + ix] = v;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  std::ofstream f(out_ppm, std::ios::binary);
  f << "P6\n" << nx << ' ' << ny << "\n255\n";
  for (int y = ny - 1; y >= 0; --y)
    for (int x = 0; x < nx; ++x) {
      const double t = (img[static_cast<std::size_t>(y) * nx + x] - vmin) / (vmax - vmin + 1e-300);
      // blue -> white -> red
      const double r = t < 0.5 ? 2 * t : 1.0, b = t > 0.5 ? 2 * (1 - t) : 1.0;
      const double g = t < 0.5 ? 2 * t : 2 * (1 - t);
      const unsigned char px[3] = {static_cast<unsigned char>(255 * r),
                                   static_cast<unsigned char>(255 * g),
                                   static_cast<unsigned char>(255 * b)};
      f.write(reinterpret_cast<const char*>(px), 3);
    }
  return true;
}

}  // namespace

int plot_run(const std::string& run_dir) {
  int written = 0;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    if (p.extension() != ".csv") continue;
    const fs::path plots = p.parent_path() / "plots";
    fs::create_directories(plots);
    if (p.filename().string().rfind("history", 0) == 0) {
      if (history_svg(p, plots / (p.stem().string() + ".svg"))) ++written;
    } else if (p.filename() == "predictions.csv") {
      if (prediction_image(p, plots / "prediction.ppm", plots / "prediction.svg")) ++written;
    }
  }
  return written;
}

}  // namespace palm::cli
