#pragma once

#include <span>
#include <string>
#include <vector>

namespace pbit {

// Shortest round-trip decimal representation ("inf"/"nan" for non-finite).
std::string format_double(double v);

// Header + rows, UTF-8, LF line endings, comma separated. Throws DataError
// with path context on I/O failure.
void emit_csv(const std::string& path, std::span<const std::string> header,
              const std::vector<std::vector<std::string>>& rows);

}  // namespace pbit
