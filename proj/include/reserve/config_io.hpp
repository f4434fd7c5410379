#pragma once

#include <string>
#include <vector>

namespace reserve {

// "0.1,0.9,0.8" -> {0.1, 0.9, 0.8}. Throws InvalidArgumentError on malformed
// input or when `expected` is non-zero and the count differs.
std::vector<double> parse_number_list(const std::string& text, std::size_t expected = 0);

}  // namespace reserve
