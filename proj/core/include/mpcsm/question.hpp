#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mpcsm/exact_match.hpp"
#include "mpcsm/hashing.hpp"
#include "mpcsm/pattern.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm {

enum class Side { text, pattern };

// Pairs (v, 1/v) per symbol, (0, 0) per '?'.
struct DaggerEncoding {
    std::size_t source_length = 0;
    std::vector<double> values;
    std::size_t nz = 0;  // non-wildcard positions
};

DaggerEncoding encode_dagger(const Pattern& s, Side side, const CharMap& map);
DaggerEncoding encode_dagger(std::string_view s, Side side, const CharMap& map);

enum class QuestionMode {
    exact,       // integer mismatch count via three NTT convolutions
    reciprocal,  // floating-point (v, 1/v) encoding
};

struct QuestionOptions {
    QuestionMode mode = QuestionMode::exact;
    // Symbol values. Default: byte+1 in exact mode, ranks of the symbols present in reciprocal mode.
    std::optional<CharMap> map;
};

// Reciprocal mode could not separate a match from a mismatch with the given values.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Text is raw bytes; the pattern holds literals and '?'. Four convolution exchanges plus one
// exchange delivering each hit to the owner of its text position.
MatchSet match_question(MpcContext& ctx, std::string_view text, const Pattern& pattern,
                        const QuestionOptions& opt = {});
MatchSet match_question(MpcContext& ctx, std::string_view text, std::string_view pattern,
                        const QuestionOptions& opt = {});

}  // namespace mpcsm
