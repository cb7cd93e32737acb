#include "mpcsm/pattern.hpp"

#include <algorithm>

#include "mpcsm/runtime.hpp"

namespace mpcsm {

Pattern parse_pattern(std::string_view s) {
    Pattern p;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c == '\\') {
            if (i + 1 == s.size()) throw PreconditionError("dangling backslash at end of pattern");
            p.push_back({TokenKind::literal, static_cast<unsigned char>(s[++i])});
        } else if (c == '?') {
            p.push_back({TokenKind::question, 0});
        } else if (c == '+') {
            p.push_back({TokenKind::plus, 0});
        } else if (c == '*') {
            p.push_back({TokenKind::star, 0});
        } else {
            p.push_back({TokenKind::literal, c});
        }
    }
    return p;
}

std::string format_pattern(const Pattern& p) {
    std::string s;
    for (const auto& t : p) {
        switch (t.kind) {
            case TokenKind::question: s += '?'; break;
            case TokenKind::plus: s += '+'; break;
            case TokenKind::star: s += '*'; break;
            case TokenKind::literal:
                if (t.c == '?' || t.c == '+' || t.c == '*' || t.c == '\\') s += '\\';
                s += static_cast<char>(t.c);
                break;
        }
    }
    return s;
}

bool contains(const Pattern& p, TokenKind k) {
    return std::any_of(p.begin(), p.end(), [k](const PatternToken& t) { return t.kind == k; });
}

std::string literal_bytes(const Pattern& p) {
    std::string s;
    for (const auto& t : p) {
        if (t.kind != TokenKind::literal) throw PreconditionError("pattern contains a wildcard");
        s += static_cast<char>(t.c);
    }
    return s;
}

}  // namespace mpcsm
