#pragma once

// Brute-force references. Deliberately slow and self-contained: no hashing, no transforms,
// no automata shared with the distributed matchers.

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mpcsm/exact_match.hpp"
#include "mpcsm/pattern.hpp"

namespace mpcsm::oracle {

MatchSet naive_exact(std::string_view text, std::string_view pattern);

// Literal and '?' tokens only.
MatchSet naive_question(std::string_view text, const Pattern& pattern);
MatchSet naive_question(std::string_view text, std::string_view pattern);

// Every (s, e) with text[s..e] matching a pattern of literals and postfix '+'.
SpanSet naive_plus_spans(std::string_view text, const Pattern& pattern);
SpanSet naive_plus_spans(std::string_view text, std::string_view pattern);

// Whole-text match against literals, '?' and '*' (anchored at both ends).
bool naive_star(std::string_view text, const Pattern& pattern);
bool naive_star(std::string_view text, std::string_view pattern);

// Largest pattern state reachable after reading `text` from `state` (states count consumed
// tokens; a consumed '*' may keep absorbing). -1 when no state survives.
long naive_star_reach(std::string_view text, const Pattern& pattern, std::size_t state);

std::vector<std::int64_t> naive_convolution(const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b);
std::vector<std::complex<double>> naive_convolution(const std::vector<std::complex<double>>& a,
                                                    const std::vector<std::complex<double>>& b);

// Element-wise T[i+j] >= P[j] for all j; 1-based starts.
MatchSet naive_greater_than(const std::vector<std::uint64_t>& text, const std::vector<std::uint64_t>& pattern);
// P[j] subset of T[i+j] for all j; sets given as sorted vectors.
MatchSet naive_subset(const std::vector<std::vector<std::uint64_t>>& text,
                      const std::vector<std::vector<std::uint64_t>>& pattern);

}  // namespace mpcsm::oracle
