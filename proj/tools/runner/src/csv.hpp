#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace polarisim::runner {

std::string format_value(double x);
std::string format_value(const std::optional<double>& x);
std::string format_value(int x);
inline const std::string& format_value(const std::string& s) { return s; }

/// Comma-separated table with a fixed header. Throws std::runtime_error if the
/// file cannot be written or a row has the wrong width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, std::vector<std::string> header);

  template <class... Ts>
  void row(const Ts&... values) {
    write_row({format_value(values)...});
  }

 private:
  void write_row(const std::vector<std::string>& cells);

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace polarisim::runner
