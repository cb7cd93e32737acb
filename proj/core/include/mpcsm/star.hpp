#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpcsm/hashing.hpp"
#include "mpcsm/pattern.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm {

// Pattern over literals and '*'. Positions are 1-based (1..m); a "state" k in 0..m counts the
// pattern positions consumed so far.
struct StarPattern {
    Pattern raw;
    std::vector<std::string> subpatterns;
    std::vector<std::size_t> sub_begin;  // 1-based position of each subpattern's first symbol
    bool anchored_left = true;
    bool anchored_right = true;
    std::vector<std::size_t> g;  // g[k]: last '*' position <= k, 0 if none; g[0] = 0
    std::vector<std::size_t> h;  // h[k]: smallest period of p[g(k)+1..k]; 0 at stars and k = 0

    std::size_t m() const { return raw.size(); }
    std::size_t w() const { return subpatterns.size(); }
    bool is_star(std::size_t k) const { return k >= 1 && raw[k - 1].kind == TokenKind::star; }
    // Consecutive stars collapsed; the pattern with single '*' separators.
    std::string normalized() const;
    // KMP failure table of the '*'-free run containing position k (indexed by run offset).
    const std::vector<std::size_t>& run_failure(std::size_t k) const;

    std::vector<std::vector<std::size_t>> fail;  // per subpattern
    std::vector<std::size_t> run_of;             // position -> subpattern index, or npos at stars
};

StarPattern split_subpatterns(const Pattern& p);
StarPattern split_subpatterns(std::string_view p);

inline constexpr long kUnreachable = -1;

// F(k) for every start state k: the largest state reachable after reading a text piece, or
// kUnreachable. A consumed '*' keeps absorbing symbols.
struct StarDpTable {
    std::vector<long> f;
    bool operator==(const StarDpTable&) const = default;
};

// Largest state reachable from `state` after reading `piece`; O(|piece| + m).
long star_reach(const StarPattern& p, std::string_view piece, std::size_t state);
StarDpTable star_table(const StarPattern& p, std::string_view piece);

// Whole-text match, O(n + m): anchored prefix, earliest occurrences of the inner subpatterns,
// anchored suffix.
bool star_match_sequential(std::string_view s, const StarPattern& p);
bool star_match_sequential(std::string_view s, std::string_view pattern);

enum class MergeRule {
    // Restart candidates: the last star and every border of the current run (complete).
    border_chain,
    // Restart candidates: the last star and shifts by multiples of the smallest period.
    period_multiples,
    // Shifts by multiples of the period, with the shift count bounded by (beta - h) / g.
    divisor_as_printed,
};

StarDpTable star_merge_f(const StarDpTable& left, const StarDpTable& right, const StarPattern& p,
                         MergeRule rule = MergeRule::border_chain);

// Pattern replication (one exchange) and ceil(log2 t) merge exchanges over the t non-empty
// blocks. Requires m <= S.
bool star_match_dp(MpcContext& ctx, std::string_view s, const StarPattern& p,
                   MergeRule rule = MergeRule::border_chain);
bool star_match_dp(MpcContext& ctx, std::string_view s, std::string_view pattern);

// No subpattern may be a prefix of another.
bool is_prefix_free(const StarPattern& p);

// Hash-based subpattern detection, successor edges by a distributed sort, reachability by
// pointer doubling. At most 3 ceil(log2 n) + 8 exchanges.
bool star_match_nonprefix(MpcContext& ctx, std::string_view s, const StarPattern& p, const HashParams& hp);
bool star_match_nonprefix(MpcContext& ctx, std::string_view s, std::string_view pattern, std::uint64_t seed = 1);

// succ[v] > v or -1. True iff iterating succ from source hits target. One registration exchange
// plus ceil(log2(|succ|)) doubling exchanges.
bool pointer_doubling_reach(MpcContext& ctx, const std::vector<long>& succ, std::size_t source,
                            std::size_t target);

}  // namespace mpcsm
