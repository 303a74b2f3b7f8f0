#include "cutdg/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cutdg/error.hpp"

namespace cutdg {

std::string format_number(double v) {
  char buf[64];
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::trunc(v) && std::abs(v) < 1e9)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::nonwritable_output_path, "cannot open " + path);
  f << text;
  if (!f) throw Error(Errc::nonwritable_output_path, "cannot write " + path);
}

void write_csv(const std::string& path, const Table& t) { write_text(path, to_csv(t)); }

std::string to_svg(const std::string& title, const std::vector<Series>& series, bool log_y) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  auto ty = [&](double y) { return log_y ? std::log10(std::max(std::abs(y), 1e-300)) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << format_number(x0) << "</text>\n";
  o << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
    << format_number(x1) << "</text>\n";
  o << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">"
    << (log_y ? "1e" : "") << format_number(y0) << "</text>\n";
  o << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
    << (log_y ? "1e" : "") << format_number(y1) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = colors[k % 6];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 + 14 * k << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
      << c << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cutdg
