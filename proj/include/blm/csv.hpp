#pragma once

#include <array>
#include <string>
#include <vector>

namespace blm {

// two-column sample serialization: header "u1,u2", 17 significant digits
std::string sample_to_csv(const std::vector<std::array<double, 2>>& pairs);
void write_sample_csv(const std::string& path, const std::vector<std::array<double, 2>>& pairs);

// reads two numeric columns; an optional non-numeric first line is skipped
std::vector<std::array<double, 2>> read_pairs_csv(const std::string& path);
std::vector<std::array<double, 2>> parse_pairs_csv(const std::string& text);

}  // namespace blm
