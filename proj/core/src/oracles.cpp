#include "mpcsm/oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpcsm::oracle {

namespace {

bool token_accepts(const PatternToken& t, char c) {
    return t.kind == TokenKind::question || (t.kind == TokenKind::literal && t.c == static_cast<unsigned char>(c));
}

}  // namespace

MatchSet naive_exact(std::string_view text, std::string_view pattern) {
    MatchSet r{text.size(), pattern.size(), {}};
    if (pattern.size() > text.size()) return r;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < pattern.size() && ok; ++j) ok = text[i + j] == pattern[j];
        if (ok) r.positions.push_back(i + 1);
    }
    return r;
}

MatchSet naive_question(std::string_view text, const Pattern& pattern) {
    MatchSet r{text.size(), pattern.size(), {}};
    for (const auto& t : pattern)
        if (t.kind != TokenKind::literal && t.kind != TokenKind::question)
            throw std::invalid_argument("naive_question: only literals and '?' allowed");
    if (pattern.size() > text.size()) return r;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < pattern.size() && ok; ++j) ok = token_accepts(pattern[j], text[i + j]);
        if (ok) r.positions.push_back(i + 1);
    }
    return r;
}

MatchSet naive_question(std::string_view text, std::string_view pattern) {
    return naive_question(text, parse_pattern(pattern));
}

SpanSet naive_plus_spans(std::string_view text, const Pattern& pattern) {
    // Items: a literal plus a "repeatable" flag taken from a following '+'.
    struct Item {
        unsigned char c;
        bool many;
    };
    std::vector<Item> items;
    for (const auto& t : pattern) {
        if (t.kind == TokenKind::literal) {
            items.push_back({t.c, false});
        } else if (t.kind == TokenKind::plus) {
            if (items.empty() || items.back().many) throw std::invalid_argument("naive_plus_spans: misplaced '+'");
            items.back().many = true;
        } else {
            throw std::invalid_argument("naive_plus_spans: only literals and '+' allowed");
        }
    }
    SpanSet out;
    const std::size_t k = items.size();
    if (k == 0) return out;
    // Simulate the backtracking search from every start, tracking the set of live item
    // positions. State q = number of items fully consumed, with a 'may repeat q-1' flag folded
    // in by letting a '+' item re-consume.
    for (std::size_t s = 0; s < text.size(); ++s) {
        std::vector<char> live(k + 1, 0), next(k + 1, 0);
        live[0] = 1;
        for (std::size_t e = s; e < text.size(); ++e) {
            std::fill(next.begin(), next.end(), 0);
            bool any = false;
            for (std::size_t q = 0; q <= k; ++q) {
                if (!live[q]) continue;
                if (q < k && items[q].c == static_cast<unsigned char>(text[e])) next[q + 1] = 1, any = true;
                if (q > 0 && items[q - 1].many && items[q - 1].c == static_cast<unsigned char>(text[e]))
                    next[q] = 1, any = true;
            }
            if (!any) break;
            live.swap(next);
            if (live[k]) out.insert({s + 1, e + 1});
        }
    }
    return out;
}

SpanSet naive_plus_spans(std::string_view text, std::string_view pattern) {
    return naive_plus_spans(text, parse_pattern(pattern));
}

bool naive_star(std::string_view text, const Pattern& pattern) {
    const std::size_t n = text.size(), m = pattern.size();
    for (const auto& t : pattern)
        if (t.kind == TokenKind::plus) throw std::invalid_argument("naive_star: '+' not allowed");
    // ok[i][k]: text[0, i) matches pattern[0, k).
    std::vector<std::vector<char>> ok(n + 1, std::vector<char>(m + 1, 0));
    ok[0][0] = 1;
    for (std::size_t k = 1; k <= m; ++k) ok[0][k] = ok[0][k - 1] && pattern[k - 1].kind == TokenKind::star;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 1; k <= m; ++k) {
            const auto& t = pattern[k - 1];
            if (t.kind == TokenKind::star)
                ok[i][k] = ok[i][k - 1] || ok[i - 1][k];
            else
                ok[i][k] = ok[i - 1][k - 1] && token_accepts(t, text[i - 1]);
        }
    }
    return ok[n][m];
}

bool naive_star(std::string_view text, std::string_view pattern) {
    return naive_star(text, parse_pattern(pattern));
}

long naive_star_reach(std::string_view text, const Pattern& pattern, std::size_t state) {
    const std::size_t m = pattern.size();
    if (state > m) throw std::invalid_argument("naive_star_reach: state out of range");
    // Set-of-states simulation started at `state`.
    std::vector<char> cur(m + 1, 0), nxt(m + 1, 0);
    cur[state] = 1;
    auto close = [&](std::vector<char>& v) {
        for (std::size_t k = 0; k < m; ++k)
            if (v[k] && pattern[k].kind == TokenKind::star) v[k + 1] = 1;
    };
    close(cur);
    for (char c : text) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (std::size_t k = state; k <= m; ++k) {
            if (!cur[k]) continue;
            if (k > 0 && pattern[k - 1].kind == TokenKind::star) nxt[k] = 1;
            if (k < m && pattern[k].kind != TokenKind::star && token_accepts(pattern[k], c)) nxt[k + 1] = 1;
        }
        close(nxt);
        cur.swap(nxt);
    }
    for (std::size_t k = m + 1; k-- > state;)
        if (cur[k]) return static_cast<long>(k);
    return -1;
}

std::vector<std::int64_t> naive_convolution(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::int64_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::vector<std::complex<double>> naive_convolution(const std::vector<std::complex<double>>& a,
                                                    const std::vector<std::complex<double>>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::complex<double>> c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

MatchSet naive_greater_than(const std::vector<std::uint64_t>& text, const std::vector<std::uint64_t>& pattern) {
    MatchSet r{text.size(), pattern.size(), {}};
    if (pattern.size() > text.size()) return r;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < pattern.size() && ok; ++j) ok = text[i + j] >= pattern[j];
        if (ok) r.positions.push_back(i + 1);
    }
    return r;
}

MatchSet naive_subset(const std::vector<std::vector<std::uint64_t>>& text,
                      const std::vector<std::vector<std::uint64_t>>& pattern) {
    MatchSet r{text.size(), pattern.size(), {}};
    if (pattern.size() > text.size()) return r;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < pattern.size() && ok; ++j)
            for (auto v : pattern[j])
                if (std::find(text[i + j].begin(), text[i + j].end(), v) == text[i + j].end()) ok = false;
        if (ok) r.positions.push_back(i + 1);
    }
    return r;
}

}  // namespace mpcsm::oracle
