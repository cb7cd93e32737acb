#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpcsm/runtime.hpp"

namespace mpcsm {

inline constexpr Word kMersenne61 = (Word{1} << 61) - 1;

// Symbol -> positive integer; 0 marks a symbol outside the alphabet.
using CharMap = std::array<Word, 256>;

CharMap byte_plus_one_map();
CharMap letter_index_map();  // 'a'..'z' -> 1..26

Word mul_mod(Word a, Word b, Word r);
Word pow_mod(Word base, std::uint64_t e, Word r);
bool is_prime(Word n);

struct HashParams {
    Word r = kMersenne61;
    Word b = 2;
    CharMap char_map = byte_plus_one_map();

    static HashParams make(Word r, Word b, const CharMap& map);
    static HashParams seeded(std::uint64_t seed);
    Word map(unsigned char c) const;
};

Word hash_string(const HashParams& p, std::string_view s);
Word merge_hash(const HashParams& p, Word h1, Word h2, std::uint64_t len2);
Word roll(const HashParams& p, Word h, unsigned char out, unsigned char in, std::uint64_t m);

class PrefixHashTable {
public:
    PrefixHashTable(const HashParams& p, std::string_view s);

    std::uint64_t length() const { return prefix_.size() - 1; }
    Word prefix(std::uint64_t i) const { return prefix_.at(i); }
    Word power(std::uint64_t i) const { return pow_.at(i); }
    // Hash of s[l..r], positions 1-based and inclusive.
    Word substring_hash(std::uint64_t l, std::uint64_t r) const;
    const HashParams& params() const { return p_; }

private:
    HashParams p_;
    std::vector<Word> prefix_;
    std::vector<Word> pow_;
};

// Two independent fingerprints compared together.
struct DoubleHash {
    HashParams first;
    HashParams second;
    static DoubleHash seeded(std::uint64_t seed);
    std::pair<Word, Word> hash(std::string_view s) const;
};

// Where distributed_prefix_hashes leaves its results.
//  every machine:   "phash"   local prefix hashes of its block (size+1 words, phash[0] = 0)
//                   "gbefore" hash of the whole text before its block (1 word)
//  aggregator:      "block_prefix" running hash of blocks 0..i for every i
struct DistributedPrefix {
    BlockLayout layout;
    std::size_t aggregator = 0;
};

// Text symbols must already be scattered under `buffer` following `layout`.
// Round 1 sends block hashes to the aggregator, round 2 returns each machine its offset hash.
DistributedPrefix distributed_prefix_hashes(MpcContext& ctx, const HashParams& p,
                                            const BlockLayout& layout,
                                            const std::string& buffer = "text");

}  // namespace mpcsm
