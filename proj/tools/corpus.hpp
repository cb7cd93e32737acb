#pragma once

#include <cstdint>
#include <string>

namespace mpcsm::corpus {

// A text and a pattern that exercises one matcher. Every generator is a pure function of its
// arguments; the same seed gives byte-identical output.
struct Instance {
    std::string text;
    std::string pattern;
};

std::string random_text(std::uint64_t n, unsigned sigma, std::uint64_t seed);
std::string periodic_text(std::uint64_t n, unsigned period);

enum class Kind { random, periodic, adversarial_plus, prefix_free_star };

Kind parse_kind(const std::string& s);
Instance generate(Kind kind, std::uint64_t n, std::uint64_t seed);

// Pattern suited to a CLI mode ("exact", "q", "plus", ...), cut from `text` where that makes sense
// so that most instances have at least one match.
std::string pattern_for_mode(const std::string& mode, const std::string& text, std::uint64_t seed);

}  // namespace mpcsm::corpus
