#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpcsm/hashing.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm {

// Sorted 1-based start positions of every occurrence.
struct MatchSet {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::vector<std::uint64_t> positions;
    bool operator==(const MatchSet&) const = default;
};

// fail[i] = length of the longest proper border of p[0, i).  Size |p| + 1.
std::vector<std::size_t> failure_function(std::string_view p);
std::size_t smallest_period(std::string_view p);

class KmpMatcher {
public:
    explicit KmpMatcher(std::string pattern);

    const std::string& pattern() const { return p_; }
    const std::vector<std::size_t>& failure() const { return fail_; }
    MatchSet search(std::string_view text) const;
    // First occurrence whose 1-based start is >= pos, or 0 when there is none.
    std::uint64_t first_at_or_after(std::string_view text, std::uint64_t pos) const;
    // Advances a KMP state by one symbol.
    std::size_t step(std::size_t state, unsigned char c) const;

private:
    std::string p_;
    std::vector<std::size_t> fail_;
};

MatchSet kmp_search(std::string_view text, std::string_view pattern);

// Double covering: each machine receives the next m-1 symbols and a copy of P. One exchange.
MatchSet match_small_pattern(MpcContext& ctx, std::string_view text, std::string_view pattern);

// Hash aggregation for patterns spanning many blocks. Three exchanges.
MatchSet match_large_pattern(MpcContext& ctx, std::string_view text, std::string_view pattern,
                             const HashParams& params);

std::vector<Word> to_words(std::string_view s);
std::string from_words(const std::vector<Word>& w);

}  // namespace mpcsm
