#include "lsledger/util/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace lsl::csv {

std::string fixed4(double value) {
  // Avoid "-0.0000" for tiny negative rounding residue.
  std::string s = fmt::format("{:.4f}", value);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string fixed4(const std::optional<double>& value, std::string_view undefined) {
  if (!value || !std::isfinite(*value)) return std::string(undefined);
  return fixed4(*value);
}

std::string field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_header(std::ostream& out, const std::vector<std::string>& comments,
                  std::string_view columns) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << columns << '\n';
}

}  // namespace lsl::csv
