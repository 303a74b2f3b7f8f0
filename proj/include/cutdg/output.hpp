#pragma once

#include <string>
#include <vector>

namespace cutdg {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Decimal point, scientific notation with 6 significant digits; integral columns printed as integers.
std::string format_number(double v);
std::string to_csv(const Table& t);
// Throws nonwritable_output_path.
void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const Table& t);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained polyline plot; log_y plots log10 |y|.
std::string to_svg(const std::string& title, const std::vector<Series>& series, bool log_y = false);

}  // namespace cutdg
