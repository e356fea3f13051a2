#include "pbit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "pbit/errors.hpp"

namespace pbit {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void emit_csv(const std::string& path, std::span<const std::string> header,
              const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw DataError("cannot open output file: " + path);

  auto write_row = [&out](std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };

  write_row(header);
  for (const auto& row : rows) write_row(row);
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace pbit
