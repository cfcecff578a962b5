#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mimoid::cli {

inline constexpr std::uint64_t kDefaultSeed = 20190507;
inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 precondition or configuration error, 2 internal error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "2..12" -> 2,3,...,12; "100,1000" -> 100,1000; "a..b,c" mixes both.
std::vector<int> parse_int_list(const std::string& text);

} // namespace mimoid::cli
