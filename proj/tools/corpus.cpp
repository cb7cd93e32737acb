#include "corpus.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "mpcsm/plus.hpp"
#include "mpcsm/star.hpp"

namespace mpcsm::corpus {

namespace {

// Raw engine output only: distribution objects are not portable across standard libraries.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    std::uint64_t below(std::uint64_t k) { return k == 0 ? 0 : g() % k; }
    char letter(unsigned sigma) { return static_cast<char>('a' + below(sigma)); }
};

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '?' || c == '+' || c == '*' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string window(const std::string& text, std::uint64_t len, Rng& r) {
    len = std::min<std::uint64_t>(len, text.size());
    return text.substr(r.below(text.size() - len + 1), len);
}

// Subpatterns of one length drawn without repetition are pairwise prefix-free.
std::vector<std::string> distinct_words(std::size_t count, std::size_t len, unsigned sigma, Rng& r) {
    std::vector<std::string> out;
    while (out.size() < count) {
        std::string w;
        for (std::size_t k = 0; k < len; ++k) w += r.letter(sigma);
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
    return out;
}

std::string plus_pattern_from(const std::string& piece, Rng& r) {
    const auto rle = rle_encode_text(piece);
    std::string p;
    for (const auto& b : rle.blocks) {
        const bool plus = r.below(2) == 0;
        const std::uint64_t cnt = plus ? 1 + r.below(b.count) : b.count;
        p += std::string(cnt, static_cast<char>(b.c));
        if (plus) p += '+';
    }
    return p;
}

}  // namespace

std::string random_text(std::uint64_t n, unsigned sigma, std::uint64_t seed) {
    Rng r(seed);
    std::string s;
    s.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) s += r.letter(sigma);
    return s;
}

std::string periodic_text(std::uint64_t n, unsigned period) {
    std::string s;
    s.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) s += static_cast<char>('a' + i % period);
    return s;
}

Kind parse_kind(const std::string& s) {
    if (s == "random") return Kind::random;
    if (s == "periodic") return Kind::periodic;
    if (s == "adversarial-plus") return Kind::adversarial_plus;
    if (s == "prefix-free-star") return Kind::prefix_free_star;
    throw std::invalid_argument("unknown corpus kind: " + s);
}

Instance generate(Kind kind, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("corpus length must be positive");
    Rng r(seed);
    Instance in;
    switch (kind) {
        case Kind::random:
            in.text = random_text(n, 4, seed);
            in.pattern = window(in.text, 8, r);
            break;
        case Kind::periodic:
            in.text = periodic_text(n, 2);
            in.pattern = window(in.text, 4, r);
            break;
        case Kind::adversarial_plus: {
            // Long runs of two letters: many candidate alignments with different run lengths.
            while (in.text.size() < n) {
                const char c = in.text.empty() || in.text.back() == 'b' ? 'a' : 'b';
                in.text += std::string(1 + r.below(8), c);
            }
            in.text.resize(n);
            in.pattern = plus_pattern_from(window(in.text, 24, r), r);
            break;
        }
        case Kind::prefix_free_star: {
            in.text = random_text(n, 4, seed);
            const std::size_t len = std::max<std::size_t>(1, std::min<std::uint64_t>(5, n / 8));
            const std::size_t w = std::max<std::size_t>(1, std::min<std::uint64_t>(4, n / (2 * len)));
            const auto subs = distinct_words(w, len, 4, r);
            // Plant the subpatterns in order so the instance matches.
            const std::uint64_t slot = n / w;
            for (std::size_t k = 0; k < w; ++k) {
                const std::uint64_t room = slot >= len ? slot - len : 0;
                const std::uint64_t at = k * slot + r.below(room + 1);
                if (at + len <= n) in.text.replace(at, len, subs[k]);
            }
            in.pattern = "*";
            for (const auto& s : subs) in.pattern += s + "*";
            if (!is_prefix_free(split_subpatterns(in.pattern)))
                throw std::logic_error("generated subpatterns are not prefix-free");
            break;
        }
    }
    return in;
}

std::string pattern_for_mode(const std::string& mode, const std::string& text, std::uint64_t seed) {
    Rng r(seed ^ 0x5bd1e995ULL);
    if (mode == "exact" || mode == "oracle") return escape(window(text, 32, r));
    if (mode == "exact-small") return escape(window(text, 8, r));
    if (mode == "q") {
        std::string p;
        const auto w = window(text, 16, r);
        for (std::size_t k = 0; k < w.size(); ++k) p += k % 3 == 1 ? std::string("?") : escape(w.substr(k, 1));
        return p;
    }
    if (mode == "plus") return plus_pattern_from(window(text, 12, r), r);
    if (mode == "star-dp") {
        const auto a = window(text, 4, r), b = window(text, 4, r);
        return "*" + escape(a) + "*" + escape(b) + "*";
    }
    if (mode == "star-nonprefix") {
        const auto subs = distinct_words(2, 3, 4, r);
        return "*" + subs[0] + "*" + subs[1] + "*";
    }
    throw std::invalid_argument("unknown mode: " + mode);
}

}  // namespace mpcsm::corpus
