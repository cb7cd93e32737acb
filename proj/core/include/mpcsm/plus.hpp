#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpcsm/exact_match.hpp"
#include "mpcsm/pattern.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm {

struct RleBlock {
    unsigned char c = 0;
    std::uint64_t count = 0;
    bool plus = false;
    std::uint64_t origin = 0;  // 0-based index of the block's first symbol in the source
    bool operator==(const RleBlock&) const = default;
};

struct RleString {
    std::vector<RleBlock> blocks;
    // "a[2] b[1+]"
    std::string to_string() const;
    bool operator==(const RleString&) const = default;
};

// Pattern of literals and postfix '+'. A '+' may not open the pattern, follow another '+',
// or follow '?' / '*'.
RleString rle_encode(const Pattern& p);
RleString rle_encode(std::string_view pattern);
// Raw bytes, no wildcard interpretation.
RleString rle_encode_text(std::string_view raw);
// One exchange: every machine broadcasts a summary of its boundary runs.
RleString rle_encode_distributed(MpcContext& ctx, std::string_view raw);

using SymbolSet = std::vector<Word>;
using SubsetVector = std::vector<SymbolSet>;

// Starts i with P[j] a subset of T[i+j-1] for every j. Four convolution exchanges, one compaction.
MatchSet subset_match(MpcContext& ctx, const SubsetVector& text, const SubsetVector& pattern);

// T_i -> {0..T_i}, P_j -> {P_j}.
std::pair<SubsetVector, SubsetVector> reduce_gtm_to_subset(const std::vector<std::uint64_t>& text,
                                                           const std::vector<std::uint64_t>& pattern);
MatchSet greater_than_match(MpcContext& ctx, const std::vector<std::uint64_t>& text,
                            const std::vector<std::uint64_t>& pattern);

// One text-block alignment and the rectangle of (start, end) spans it induces, 1-based.
struct PlusAlignment {
    std::uint64_t block_index = 0;
    std::uint64_t min_start = 0;
    std::uint64_t max_start = 0;
    std::uint64_t min_end = 0;
    std::uint64_t max_end = 0;
    bool operator==(const PlusAlignment&) const = default;
};

struct PlusMatchReport {
    std::vector<PlusAlignment> alignments;
    SpanSet spans() const;
    bool operator==(const PlusMatchReport&) const = default;
};

std::string to_json(const PlusMatchReport& r);
PlusMatchReport plus_report_from_json(const std::string& text);

enum class PlusPipeline {
    direct_subset,     // block symbols <c, j+> / <c, cnt> fed to one subset matching
    letters_counts_gtm // letters, masked count equality and greater-than, batched together
};

// Pipelines share the round script: one RLE exchange, four convolution exchanges, one exchange
// delivering alignments together with their end-block extents.
PlusMatchReport match_plus(MpcContext& ctx, std::string_view text, const Pattern& pattern,
                           PlusPipeline pipeline = PlusPipeline::direct_subset);
PlusMatchReport match_plus(MpcContext& ctx, std::string_view text, std::string_view pattern,
                           PlusPipeline pipeline = PlusPipeline::direct_subset);

}  // namespace mpcsm
