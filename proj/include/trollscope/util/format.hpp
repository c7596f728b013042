#pragma once

#include <string>
#include <vector>

namespace trollscope::fmt {

// Shortest round-trip decimal representation; -0 prints as 0.
std::string number(double v);

// Fixed-precision rendering for human-readable tables.
std::string fixed(double v, int precision);

// Renders rows as a whitespace-aligned text table; the first row is the header.
std::string aligned_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace trollscope::fmt
