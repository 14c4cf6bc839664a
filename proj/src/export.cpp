#include "ghost/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ghost {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_pattern_csv(const std::string& path, const PatternResult& p) {
  std::ostringstream out;
  out << "z2,intensity,incoherent\n";
  for (std::size_t i = 0; i < p.z2.size(); ++i)
    out << format_double(p.z2[i]) << ',' << format_double(p.intensity[i]) << ','
        << format_double(p.incoherent[i]) << '\n';
  write_text(path, out.str());
}

json pattern_to_json(const PatternResult& p, const std::string& cfg_hash) {
  json j;
  j["schema"] = 1;
  j["config_hash"] = cfg_hash;
  j["probs"] = p.meta.probs;
  j["phases"] = p.meta.phases;
  j["z2"] = p.z2;
  j["intensity"] = p.intensity;
  j["incoherent"] = p.incoherent;
  return j;
}

json report_to_json(const DualityReport& rep, const std::string& cfg_hash) {
  json j;
  j["schema"] = 1;
  j["config_hash"] = cfg_hash;
  j["d_q1"] = rep.d_q1;
  if (rep.c2_matrix)
    j["c2_matrix"] = *rep.c2_matrix;
  else
    j["c2_matrix"] = nullptr;
  if (rep.c2_pattern)
    j["c2_pattern"] = *rep.c2_pattern;
  else
    j["c2_pattern"] = nullptr;
  j["sum"] = rep.sum;
  j["slack"] = rep.slack;
  j["saturated"] = rep.saturated;
  j["bound_violated"] = rep.bound_violated;
  j["matrix_route_applicable"] = rep.matrix_route_applicable;
  j["max_psi_overlap"] = rep.max_psi_overlap;
  return j;
}

json comparison_to_json(const oracle::PatternComparison& cmp,
                        const oracle::OracleDiagnostics& diag,
                        const std::string& cfg_hash) {
  json j;
  j["schema"] = 1;
  j["config_hash"] = cfg_hash;
  j["rel_l2"] = cmp.rel_l2;
  j["max_pointwise"] = cmp.max_pointwise;
  j["fringe_offset"] = cmp.fringe_offset;
  j["visibility_delta"] = cmp.visibility_delta;
  j["oracle"] = {{"norm_drift", diag.norm_drift},
                 {"transmitted", diag.transmitted},
                 {"branch_escape", diag.branch_escape}};
  return j;
}

namespace {

struct PlotBox {
  double x0 = 70, y0 = 30, w = 780, h = 420;
  double zmin, zmax, imax;
  double px(double z) const { return x0 + w * (z - zmin) / (zmax - zmin); }
  double py(double v) const { return y0 + h * (1.0 - v / imax); }
};

std::string polyline(const PlotBox& box, const std::vector<double>& z,
                     const std::vector<double>& y, const char* style) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" " << style << " points=\"";
  for (std::size_t i = 0; i < z.size(); ++i) {
    s << format_double(box.px(z[i])) << ',' << format_double(box.py(y[i]));
    if (i + 1 < z.size()) s << ' ';
  }
  s << "\"/>\n";
  return s.str();
}

}  // namespace

std::string pattern_svg(const PatternResult& p) {
  PlotBox box;
  box.zmin = p.z2.front();
  box.zmax = p.z2.back();
  box.imax = 1e-300;
  for (double v : p.intensity) box.imax = std::max(box.imax, v);
  for (double v : p.incoherent) box.imax = std::max(box.imax, v);
  box.imax *= 1.05;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"520\" "
       "viewBox=\"0 0 900 520\">\n"
    << "<rect width=\"900\" height=\"520\" fill=\"white\"/>\n"
    << "<rect x=\"70\" y=\"30\" width=\"780\" height=\"420\" fill=\"none\" "
       "stroke=\"#888\"/>\n";
  // axis labels
  s << "<text x=\"460\" y=\"505\" text-anchor=\"middle\" font-size=\"14\">z2</text>\n"
    << "<text x=\"20\" y=\"240\" font-size=\"14\" transform=\"rotate(-90 20 240)\">"
       "coincidence intensity</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double z = box.zmin + (box.zmax - box.zmin) * t / 4.0;
    s << "<text x=\"" << format_double(box.px(z))
      << "\" y=\"468\" text-anchor=\"middle\" font-size=\"12\">" << format_double(z)
      << "</text>\n";
  }
  s << polyline(box, p.z2, p.incoherent,
                "stroke=\"#999\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"");
  s << polyline(box, p.z2, p.intensity, "stroke=\"#1f4e9c\" stroke-width=\"1.6\"");

  // annotate interior local maxima of the intensity
  int count = 0;
  for (std::size_t i = 1; i + 1 < p.z2.size() && count < 24; ++i) {
    if (p.intensity[i] > p.intensity[i - 1] && p.intensity[i] >= p.intensity[i + 1] &&
        p.intensity[i] > 0.02 * box.imax) {
      s << "<circle cx=\"" << format_double(box.px(p.z2[i])) << "\" cy=\""
        << format_double(box.py(p.intensity[i]))
        << "\" r=\"3\" fill=\"none\" stroke=\"#c2401f\"/>\n";
      ++count;
    }
  }
  s << "<text x=\"740\" y=\"50\" font-size=\"12\" fill=\"#1f4e9c\">intensity</text>\n"
    << "<text x=\"740\" y=\"66\" font-size=\"12\" fill=\"#999\">incoherent</text>\n"
    << "</svg>\n";
  return s.str();
}

}  // namespace ghost
