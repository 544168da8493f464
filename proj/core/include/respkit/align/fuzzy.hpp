#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace respkit::align {

/// Longest common subsequence length over code points (bit-parallel).
std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

/// Normalized InDel similarity in [0, 100]: 100 * 2 * LCS / (|a| + |b|). Both empty gives 0.
double ratio(std::u32string_view a, std::u32string_view b);
double ratio(std::string_view a, std::string_view b);

/// Best ratio of the shorter string against every window of the longer one that has the
/// shorter string's length. 100 exactly when the shorter string is a substring.
/// An empty argument gives 0. Inputs are UTF-8 and compared by code point.
double partial_ratio(std::u32string_view a, std::u32string_view b);
double partial_ratio(std::string_view a, std::string_view b);

}  // namespace respkit::align
