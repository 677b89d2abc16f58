#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace polarisim::runner {

std::string format_value(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_value(const std::optional<double>& x) {
  return x ? format_value(*x) : std::string();
}

std::string format_value(int x) { return std::to_string(x); }

CsvWriter::CsvWriter(const std::filesystem::path& file, std::vector<std::string> header)
    : path_(file), out_(file, std::ios::binary), width_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + file.string());
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw std::runtime_error(path_.string() + ": row has " + std::to_string(cells.size()) +
                             " fields, header has " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

}  // namespace polarisim::runner
