#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace mpcsm {

enum class TokenKind { literal, question, plus, star };

struct PatternToken {
    TokenKind kind = TokenKind::literal;
    unsigned char c = 0;  // meaningful for literals only
    bool operator==(const PatternToken&) const = default;
};

using Pattern = std::vector<PatternToken>;

// Matched text spans (start, end), 1-based and inclusive.
using SpanSet = std::set<std::pair<std::uint64_t, std::uint64_t>>;

// '?', '+', '*' are wildcards; a backslash makes the next byte literal (\? \+ \* \\).
Pattern parse_pattern(std::string_view s);
// Inverse of parse_pattern: wildcards bare, special bytes escaped.
std::string format_pattern(const Pattern& p);

bool contains(const Pattern& p, TokenKind k);
// Pattern made only of literals, as raw bytes.
std::string literal_bytes(const Pattern& p);

}  // namespace mpcsm
