#pragma once

#include <string>
#include <vector>

namespace vaxgame {

std::string fmt_num(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
  // column values parsed as numbers, NaN for empty cells
  std::vector<double> numeric(const std::string& column) const;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series, bool log_x = false);

void write_text_file(const std::string& path, const std::string& content);
void append_text_file(const std::string& path, const std::string& content);

}  // namespace vaxgame
