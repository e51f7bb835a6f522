#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "association.hpp"
#include "geometry.hpp"
#include "matrix.hpp"
#include "msa.hpp"

namespace dude {

// Fixed-precision numeric text so reruns give byte-identical files.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }
  void save(const std::filesystem::path& p) const { write_text(p, str()); }

 private:
  std::size_t cols_;
  std::ostringstream out_;
};

inline std::string matrix_csv(const Matrix& m) {
  std::vector<std::string> h{"user"};
  for (std::size_t b = 0; b < m.cols(); ++b) h.push_back("bs" + std::to_string(b + 1));
  CsvWriter w(h);
  for (std::size_t u = 0; u < m.rows(); ++u) {
    std::vector<std::string> r{std::to_string(u + 1)};
    for (std::size_t b = 0; b < m.cols(); ++b) r.push_back(num(m(u, b)));
    w.row(r);
  }
  return w.str();
}

// Long format: iteration, multiplier id, value. Ids: nu_dl_<b>, nu_ul_<b>, lambda_<u>, lambda_p_<u> (1-based).
inline std::string trace_csv(const MsaTrace& t, std::size_t stride) {
  CsvWriter w({"iteration", "multiplier", "value"});
  const std::size_t n = t.nu_dl.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((i + 1) % stride != 0 && i + 1 != n) continue;
    const std::string it = std::to_string(i + 1);
    for (std::size_t b = 0; b < t.nu_dl[i].size(); ++b) w.row({it, "nu_dl_" + std::to_string(b + 1), num(t.nu_dl[i][b])});
    for (std::size_t b = 0; b < t.nu_ul[i].size(); ++b) w.row({it, "nu_ul_" + std::to_string(b + 1), num(t.nu_ul[i][b])});
    for (std::size_t u = 0; u < t.lam[i].size(); ++u) w.row({it, "lambda_" + std::to_string(u + 1), num(t.lam[i][u])});
    for (std::size_t u = 0; u < t.lam_p[i].size(); ++u)
      w.row({it, "lambda_p_" + std::to_string(u + 1), num(t.lam_p[i][u])});
  }
  return w.str();
}

inline std::string coverage_csv(const CoverageGrid& g) {
  std::ostringstream o;
  for (std::size_t r = 0; r < g.resolution; ++r) {
    for (std::size_t c = 0; c < g.resolution; ++c) o << (c ? "," : "") << g.at(r, c);
    o << "\n";
  }
  return o.str();
}

inline std::string station_color(std::size_t i) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                  "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};
  return palette[i % (sizeof palette / sizeof *palette)];
}

// Raster cells as colored rects (merged along rows), stations as dots (macro larger), users as crosses
// joined to their serving station.
inline std::string coverage_svg(const CoverageGrid& g, const Deployment& d, const std::vector<std::size_t>& serving) {
  const double W = 800.0;
  const double sx = W / g.region.width, sy = W / g.region.height;
  const double cw = g.region.width / static_cast<double>(g.resolution);
  const double ch = g.region.height / static_cast<double>(g.resolution);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(W) << "\">\n";
  for (std::size_t r = 0; r < g.resolution; ++r) {
    std::size_t c = 0;
    while (c < g.resolution) {
      const std::size_t id = g.at(r, c);
      std::size_t e = c;
      while (e < g.resolution && g.at(r, e) == id) ++e;
      const double y = W - (static_cast<double>(r) + 1.0) * ch * sy;
      o << "<rect x=\"" << num(static_cast<double>(c) * cw * sx) << "\" y=\"" << num(y) << "\" width=\""
        << num(static_cast<double>(e - c) * cw * sx) << "\" height=\"" << num(ch * sy) << "\" fill=\""
        << station_color(id) << "\"/>\n";
      c = e;
    }
  }
  for (std::size_t u = 0; u < d.users.size(); ++u) {
    const double x = d.users[u].x * sx, y = W - d.users[u].y * sy;
    o << "<path d=\"M" << num(x - 3) << " " << num(y - 3) << " L" << num(x + 3) << " " << num(y + 3) << " M"
      << num(x - 3) << " " << num(y + 3) << " L" << num(x + 3) << " " << num(y - 3) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    if (u < serving.size()) {
      const auto& b = d.bs[serving[u]];
      o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(b.x * sx) << "\" y2=\""
        << num(W - b.y * sy) << "\" stroke=\"#555555\" stroke-width=\"0.4\" stroke-opacity=\"0.6\"/>\n";
    }
  }
  for (std::size_t b = 0; b < d.bs.size(); ++b) {
    const bool macro = d.tier[b] == Tier::macro;
    o << "<circle cx=\"" << num(d.bs[b].x * sx) << "\" cy=\"" << num(W - d.bs[b].y * sy) << "\" r=\""
      << (macro ? 7 : 4) << "\" fill=\"" << (macro ? "#b2182b" : "#2166ac") << "\" stroke=\"#000000\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace dude
