#pragma once

#include <string>
#include <vector>

namespace sumrate {

/// Shortest representation with 9 significant digits (printf %.9g
/// semantics), locale-independent via std::to_chars.
std::string format_g9(double v);

/// One CSV line: cells joined by commas, terminated by '\n'.
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace sumrate
