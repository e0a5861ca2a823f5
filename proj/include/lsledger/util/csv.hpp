#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lsl::csv {

// Fractions and ratios are exported with four decimals.
std::string fixed4(double value);
// Empty cell for undefined values.
std::string fixed4(const std::optional<double>& value, std::string_view undefined = "undefined");

// Quotes a field when it contains a separator, quote or newline.
std::string field(std::string_view value);

// `# key=value` header comments followed by the column header row.
void write_header(std::ostream& out, const std::vector<std::string>& comments,
                  std::string_view columns);

}  // namespace lsl::csv
