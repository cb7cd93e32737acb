#include "mpcsm/question.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "compaction.hpp"
#include "mpcsm/fft.hpp"

namespace mpcsm {

namespace {

Pattern literal_tokens(std::string_view raw) {
    Pattern p;
    p.reserve(raw.size());
    for (char c : raw) p.push_back({TokenKind::literal, static_cast<unsigned char>(c)});
    return p;
}

void check_question_pattern(const Pattern& p) {
    if (p.empty()) throw PreconditionError("empty pattern");
    for (const auto& t : p)
        if (t.kind == TokenKind::plus || t.kind == TokenKind::star)
            throw PreconditionError("'?' matching accepts only literals and '?'");
}

// Values of the symbols actually present, replaced by their rank (1, 2, ...).
CharMap rank_map(std::string_view text, const Pattern& p) {
    std::array<bool, 256> seen{};
    for (char c : text) seen[static_cast<unsigned char>(c)] = true;
    for (const auto& t : p)
        if (t.kind == TokenKind::literal) seen[t.c] = true;
    CharMap m{};
    Word r = 0;
    for (std::size_t c = 0; c < 256; ++c)
        if (seen[c]) m[c] = ++r;
    return m;
}

Word value_of(const CharMap& map, unsigned char c) {
    Word v = map[c];
    if (v == 0) throw PreconditionError("symbol outside the value map");
    return v;
}

MatchSet question_exact(MpcContext& ctx, std::string_view text, const Pattern& p, const CharMap& map) {
    const std::uint64_t n = text.size(), m = p.size();
    Word vmax = 0;
    std::vector<Word> t1(n), t2(n), t3(n), r1(m), r2(m), r3(m);
    for (std::uint64_t i = 0; i < n; ++i) {
        Word v = value_of(map, static_cast<unsigned char>(text[i]));
        vmax = std::max(vmax, v);
        t1[i] = v;
        t2[i] = v * v;
        t3[i] = v * v * v;
    }
    for (std::uint64_t j = 0; j < m; ++j) {
        Word v = p[j].kind == TokenKind::question ? 0 : value_of(map, p[j].c);
        vmax = std::max(vmax, v);
        const std::uint64_t r = m - 1 - j;
        r1[r] = v;
        r2[r] = static_cast<Word>(static_cast<unsigned __int128>(v * v) * (kNttPrime - 2) % kNttPrime);
        r3[r] = v * v * v;
    }
    // Each window sum is at most m * vmax^4 and must stay below the modulus.
    const long double bound = static_cast<long double>(m) * std::pow(static_cast<long double>(vmax), 4);
    if (vmax > (Word{1} << 15) || bound >= static_cast<long double>(kNttPrime))
        throw PreconditionError("symbol values too large for exact '?' matching");

    // sum_j p t (p - t)^2 = sum p^3 t - 2 p^2 t^2 + p t^3, zero iff every non-wildcard position agrees.
    auto d = mpc_convolve_ntt_in_place(ctx, {{t1, r3}, {t2, r2}, {t3, r1}}, true);
    return detail::compact_hits(ctx, d, n, m, m - 1, 1, [](const Word* v) { return v[0] == 0; });
}

MatchSet question_reciprocal(MpcContext& ctx, std::string_view text, const Pattern& p, const CharMap& map) {
    const std::uint64_t n = text.size(), m = p.size();
    auto td = encode_dagger(literal_tokens(text), Side::text, map);
    auto pd = encode_dagger(p, Side::pattern, map);
    // Pairs are reversed as units so (v, 1/v) keeps its order.
    ComplexVector a(td.values.begin(), td.values.end()), b(2 * m);
    for (std::uint64_t j = 0; j < m; ++j) {
        b[2 * (m - 1 - j)] = pd.values[2 * j];
        b[2 * (m - 1 - j) + 1] = pd.values[2 * j + 1];
    }
    // Mismatched symbols x != y add x/y + y/x - 2 >= delta; matches add exactly 2.
    std::vector<double> vals;
    for (std::size_t c = 0; c < 256; ++c)
        if (map[c] != 0) vals.push_back(static_cast<double>(map[c]));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    double delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        double r = vals[i + 1] / vals[i];
        delta = std::min(delta, r + 1.0 / r - 2.0);
    }
    if (!std::isfinite(delta)) delta = 1.0;
    const double target = 2.0 * static_cast<double>(pd.nz);
    const double tol = std::max(1e-9 * std::max(target, 1.0), 1e-12);
    if (delta / 4 <= 64 * tol) throw PrecisionError("symbol values too close for floating-point '?' matching");

    auto d = mpc_convolve_complex_in_place(ctx, {{a, b}}, false);
    bool ambiguous = false;
    auto r = detail::compact_hits(ctx, d, n, m, 2 * m - 1, 2, [&](const Word* w) {
        const double gap = std::abs(std::bit_cast<double>(w[0]) - target);
        if (gap > delta / 4 && gap < 3 * delta / 4) ambiguous = true;
        return gap < delta / 2;
    });
    if (ambiguous) throw PrecisionError("floating-point '?' matching produced an ambiguous value; use exact mode");
    return r;
}

}  // namespace

DaggerEncoding encode_dagger(const Pattern& s, Side side, const CharMap& map) {
    DaggerEncoding e;
    e.source_length = s.size();
    e.values.reserve(2 * s.size());
    for (const auto& t : s) {
        if (t.kind == TokenKind::question) {
            if (side == Side::text) throw PreconditionError("'?' is not allowed in the text");
            e.values.push_back(0.0);
            e.values.push_back(0.0);
        } else if (t.kind == TokenKind::literal) {
            const double v = static_cast<double>(value_of(map, t.c));
            e.values.push_back(v);
            e.values.push_back(1.0 / v);
            ++e.nz;
        } else {
            throw PreconditionError("only literals and '?' can be encoded");
        }
    }
    return e;
}

DaggerEncoding encode_dagger(std::string_view s, Side side, const CharMap& map) {
    return encode_dagger(parse_pattern(s), side, map);
}

MatchSet match_question(MpcContext& ctx, std::string_view text, const Pattern& pattern, const QuestionOptions& opt) {
    check_question_pattern(pattern);
    if (pattern.size() > text.size()) return MatchSet{text.size(), pattern.size(), {}};
    if (opt.mode == QuestionMode::exact)
        return question_exact(ctx, text, pattern, opt.map ? *opt.map : byte_plus_one_map());
    return question_reciprocal(ctx, text, pattern, opt.map ? *opt.map : rank_map(text, pattern));
}

MatchSet match_question(MpcContext& ctx, std::string_view text, std::string_view pattern, const QuestionOptions& opt) {
    return match_question(ctx, text, parse_pattern(pattern), opt);
}

}  // namespace mpcsm
