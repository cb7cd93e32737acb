#include "mpcsm/plus.hpp"

#include <algorithm>
#include <unordered_map>

#include "compaction.hpp"
#include "mpcsm/fft.hpp"

namespace mpcsm {

namespace {

constexpr Word kSummary = 1;
constexpr Word kAlign = 2;
constexpr Word kEndBlock = 3;

struct SubsetPlan {
    VectorPairs<Word> pairs;
    Word required = 0;
};

// One indicator pair per distinct pattern symbol: text side marks where the symbol is present,
// pattern side (reversed) marks where it is required. Summed convolutions count satisfied
// requirements per alignment.
SubsetPlan plan_subset(const SubsetVector& text, const SubsetVector& pattern) {
    const std::size_t n = text.size(), m = pattern.size();
    std::vector<Word> symbols;
    SubsetPlan plan;
    for (const auto& s : pattern) {
        SymbolSet u = s;
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        plan.required += u.size();
        symbols.insert(symbols.end(), u.begin(), u.end());
    }
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    std::unordered_map<Word, std::size_t> index;
    for (std::size_t k = 0; k < symbols.size(); ++k) index.emplace(symbols[k], k);

    plan.pairs.assign(std::max<std::size_t>(symbols.size(), 1),
                      {std::vector<Word>(n, 0), std::vector<Word>(m, 0)});
    for (std::size_t i = 0; i < n; ++i)
        for (Word v : text[i])
            if (auto it = index.find(v); it != index.end()) plan.pairs[it->second].first[i] = 1;
    for (std::size_t j = 0; j < m; ++j)
        for (Word v : pattern[j]) plan.pairs[index.at(v)].second[m - 1 - j] = 1;
    return plan;
}

Word block_symbol(unsigned char c, std::uint64_t count, bool at_least) {
    return (Word{c} << 48) | (count << 1) | (at_least ? 1 : 0);
}

constexpr Word kLetterTag = Word{1} << 60;
constexpr Word kCountTag = Word{2} << 60;
constexpr Word kGtmTag = Word{3} << 60;

// Pattern block j must meet a text block with count >= cnt_j (rather than ==) when it carries
// '+', or sits at either end (the span may take only part of that text block).
bool needs_at_least(const RleString& p, std::size_t j) {
    const std::size_t k = p.blocks.size();
    return p.blocks[j].plus || j == 0 || j + 1 == k;
}

std::pair<SubsetVector, SubsetVector> direct_sets(const RleString& t, const RleString& p) {
    SubsetVector ts(t.blocks.size()), ps(p.blocks.size());
    for (std::size_t i = 0; i < t.blocks.size(); ++i) {
        const auto& b = t.blocks[i];
        for (std::uint64_t j = 1; j <= b.count; ++j) ts[i].push_back(block_symbol(b.c, j, true));
        ts[i].push_back(block_symbol(b.c, b.count, false));
    }
    for (std::size_t j = 0; j < p.blocks.size(); ++j)
        ps[j] = {block_symbol(p.blocks[j].c, p.blocks[j].count, needs_at_least(p, j))};
    return {ts, ps};
}

// Letters must agree; interior blocks without '+' must agree on count (the others are masked
// out, like '?'); every count must be at least the pattern's (greater-than matching).
std::pair<SubsetVector, SubsetVector> split_sets(const RleString& t, const RleString& p) {
    std::vector<std::uint64_t> tc, pc;
    for (const auto& b : t.blocks) tc.push_back(b.count);
    for (const auto& b : p.blocks) pc.push_back(b.count);
    auto [tg, pg] = reduce_gtm_to_subset(tc, pc);
    SubsetVector ts(t.blocks.size()), ps(p.blocks.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        ts[i] = {kLetterTag | t.blocks[i].c, kCountTag | t.blocks[i].count};
        for (Word v : tg[i]) ts[i].push_back(kGtmTag | v);
    }
    for (std::size_t j = 0; j < ps.size(); ++j) {
        ps[j] = {kLetterTag | p.blocks[j].c};
        if (!needs_at_least(p, j)) ps[j].push_back(kCountTag | p.blocks[j].count);
        for (Word v : pg[j]) ps[j].push_back(kGtmTag | v);
    }
    return {ts, ps};
}

// 1-based span rectangles for text block i0 (0-based) starting an alignment, ending at block
// `last` whose origin/count are given.
void emit_spans(std::vector<Word>& out, const RleString& p, std::uint64_t i0, std::uint64_t origin,
                std::uint64_t count, std::uint64_t last_origin, std::uint64_t last_count) {
    const auto& first = p.blocks.front();
    const auto& tail = p.blocks.back();
    const std::uint64_t block_end = origin + count;  // 1-based inclusive end
    if (p.blocks.size() == 1) {
        // Both ends fall in one text block, so the spans are not a rectangle: one per start.
        for (std::uint64_t s = origin + 1; s + first.count - 1 <= block_end; ++s) {
            const std::uint64_t e0 = s + first.count - 1;
            out.insert(out.end(), {i0 + 1, s, s, e0, first.plus ? block_end : e0});
        }
        return;
    }
    const std::uint64_t max_start = block_end - first.count + 1;
    const std::uint64_t min_start = first.plus ? origin + 1 : max_start;
    const std::uint64_t min_end = last_origin + tail.count;
    const std::uint64_t max_end = tail.plus ? last_origin + last_count : min_end;
    out.insert(out.end(), {i0 + 1, min_start, max_start, min_end, max_end});
}

}  // namespace

std::string RleString::to_string() const {
    std::string s;
    for (const auto& b : blocks) {
        if (!s.empty()) s += ' ';
        s += static_cast<char>(b.c);
        s += '[' + std::to_string(b.count) + (b.plus ? "+]" : "]");
    }
    return s;
}

RleString rle_encode(const Pattern& p) {
    RleString r;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& t = p[i];
        if (t.kind == TokenKind::literal) {
            if (!r.blocks.empty() && r.blocks.back().c == t.c)
                ++r.blocks.back().count;
            else
                r.blocks.push_back({t.c, 1, false, i});
        } else if (t.kind == TokenKind::plus) {
            if (i == 0) throw PreconditionError("'+' cannot open a pattern");
            if (p[i - 1].kind != TokenKind::literal) throw PreconditionError("'+' must follow a literal symbol");
            r.blocks.back().plus = true;
        } else {
            throw PreconditionError("'+' matching accepts only literals and '+'");
        }
    }
    return r;
}

RleString rle_encode(std::string_view pattern) { return rle_encode(parse_pattern(pattern)); }

RleString rle_encode_text(std::string_view raw) {
    RleString r;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto c = static_cast<unsigned char>(raw[i]);
        if (!r.blocks.empty() && r.blocks.back().c == c)
            ++r.blocks.back().count;
        else
            r.blocks.push_back({c, 1, false, i});
    }
    return r;
}

RleString rle_encode_distributed(MpcContext& ctx, std::string_view raw) {
    const auto layout = scatter_balanced(ctx, to_words(raw), "text");
    const std::size_t M = ctx.machines();

    // Summary: size, first symbol, first run length, uniform flag, last symbol.
    ctx.run_round([&](Machine& me) {
        const auto& sym = me.state().at("text");
        auto& runs = me.state().buf("rle");
        runs.clear();
        const std::uint64_t base = layout.begin(me.id());
        for (std::size_t k = 0; k < sym.size(); ++k) {
            if (k > 0 && sym[k] == sym[k - 1])
                ++runs[runs.size() - 2];
            else
                runs.insert(runs.end(), {sym[k], 1, base + k});
        }
        me.add_work(sym.size());
        if (sym.empty()) return;
        const std::vector<Word> summary{sym.size(), sym.front(), runs[1], runs.size() == 3 ? Word{1} : Word{0},
                                        sym.back()};
        me.state().erase("text");
        for (std::size_t dst = 0; dst < M; ++dst)
            if (dst != me.id()) me.send(dst, kSummary, summary);
    });
    ctx.exchange();

    // Drop a leading run continued from an earlier machine; extend the trailing run forward.
    ctx.run_round([&](Machine& me) {
        auto& runs = me.state().buf("rle");
        if (runs.empty()) return;
        std::vector<const std::vector<Word>*> summary(M, nullptr);
        for (const auto& msg : me.inbox()) summary[msg.src] = &msg.payload;
        const std::size_t i = me.id();
        const Word first = runs[0], last = runs[runs.size() - 3];
        std::size_t prev = i;
        while (prev > 0 && summary[prev - 1] == nullptr) --prev;
        const bool continued = prev > 0 && (*summary[prev - 1])[4] == first;
        std::uint64_t extra = 0;
        for (std::size_t j = i + 1; j < M; ++j) {
            if (summary[j] == nullptr) continue;
            const auto& s = *summary[j];
            if (s[1] != last) break;
            extra += s[2];
            if (s[3] == 0) break;
        }
        runs[runs.size() - 2] += extra;
        if (continued) runs.erase(runs.begin(), runs.begin() + 3);
        me.add_work(M);
    });

    RleString r;
    auto words = gather(ctx, "rle");
    for (std::size_t k = 0; k + 2 < words.size(); k += 3)
        r.blocks.push_back({static_cast<unsigned char>(words[k]), words[k + 1], false, words[k + 2]});
    for (std::size_t i = 0; i < M; ++i) ctx.state(i).erase("rle");
    return r;
}

MatchSet subset_match(MpcContext& ctx, const SubsetVector& text, const SubsetVector& pattern) {
    const std::uint64_t n = text.size(), m = pattern.size();
    if (m == 0) throw PreconditionError("empty pattern");
    if (m > n) return MatchSet{n, m, {}};
    auto plan = plan_subset(text, pattern);
    auto d = mpc_convolve_ntt_in_place(ctx, plan.pairs, true);
    const Word need = plan.required;
    return detail::compact_hits(ctx, d, n, m, m - 1, 1, [need](const Word* v) { return v[0] == need; });
}

std::pair<SubsetVector, SubsetVector> reduce_gtm_to_subset(const std::vector<std::uint64_t>& text,
                                                           const std::vector<std::uint64_t>& pattern) {
    SubsetVector ts(text.size()), ps(pattern.size());
    for (std::size_t i = 0; i < text.size(); ++i)
        for (std::uint64_t v = 0; v <= text[i]; ++v) ts[i].push_back(v);
    for (std::size_t j = 0; j < pattern.size(); ++j) ps[j] = {pattern[j]};
    return {ts, ps};
}

MatchSet greater_than_match(MpcContext& ctx, const std::vector<std::uint64_t>& text,
                            const std::vector<std::uint64_t>& pattern) {
    auto [ts, ps] = reduce_gtm_to_subset(text, pattern);
    return subset_match(ctx, ts, ps);
}

SpanSet PlusMatchReport::spans() const {
    SpanSet s;
    for (const auto& a : alignments)
        for (std::uint64_t st = a.min_start; st <= a.max_start; ++st)
            for (std::uint64_t e = a.min_end; e <= a.max_end; ++e) s.insert({st, e});
    return s;
}

PlusMatchReport match_plus(MpcContext& ctx, std::string_view text, const Pattern& pattern, PlusPipeline pipeline) {
    if (pattern.empty()) throw PreconditionError("empty pattern");
    const RleString pr = rle_encode(pattern);
    const RleString tr = rle_encode_distributed(ctx, text);
    const std::uint64_t B = tr.blocks.size(), k = pr.blocks.size();
    PlusMatchReport report;
    if (k > B) return report;

    const std::size_t M = ctx.machines();
    const auto bl = BlockLayout::balanced(B, M);
    {
        std::vector<Word> words;
        words.reserve(3 * B);
        for (const auto& b : tr.blocks) words.insert(words.end(), {b.c, b.count, b.origin});
        ctx.scatter_input(words, "tblocks", 3 * bl.block);
    }

    auto [ts, ps] = pipeline == PlusPipeline::direct_subset ? direct_sets(tr, pr) : split_sets(tr, pr);
    auto plan = plan_subset(ts, ps);
    ts.clear();
    ps.clear();
    auto d = mpc_convolve_ntt_in_place(ctx, plan.pairs, true);
    plan.pairs.clear();
    const Word need = plan.required;

    // Alignments go to the owner of their first block; every block also travels to the owner
    // of the block k-1 positions earlier, so span ends can be resolved locally.
    ctx.run_round([&](Machine& me) {
        const std::size_t q = me.id();
        std::vector<std::vector<Word>> align(M), ends(M);
        if (q < d.shape.machines) {
            const auto& blk = me.state().at("conv0");
            for (std::size_t u = 0; u < d.shape.per_machine; ++u) {
                const std::uint64_t pos = q * d.shape.per_machine + u;
                if (pos < k - 1 || pos >= B) continue;
                if (blk[u] == need) align[bl.owner(pos - (k - 1))].push_back(pos - (k - 1));
            }
            me.add_work(d.shape.per_machine);
            me.state().erase("conv0");
        }
        if (k > 1 && q < M) {
            const auto& own = me.state().at("tblocks");
            const std::uint64_t base = bl.begin(q);
            for (std::size_t t = 0; 3 * t + 2 < own.size(); ++t) {
                const std::uint64_t b = base + t;
                if (b < k - 1) continue;
                auto& dst = ends[bl.owner(b - (k - 1))];
                dst.insert(dst.end(), {b, own[3 * t + 1], own[3 * t + 2]});
            }
        }
        for (std::size_t dst = 0; dst < M; ++dst) {
            if (!align[dst].empty()) me.send(dst, kAlign, std::move(align[dst]));
            if (!ends[dst].empty()) me.send(dst, kEndBlock, std::move(ends[dst]));
        }
    });
    ctx.exchange();

    ctx.run_round([&](Machine& me) {
        std::vector<Word> starts;
        std::unordered_map<Word, std::pair<Word, Word>> end_info;
        for (const auto& msg : me.inbox()) {
            if (msg.tag == kAlign) {
                starts.insert(starts.end(), msg.payload.begin(), msg.payload.end());
            } else {
                for (std::size_t t = 0; t + 2 < msg.payload.size(); t += 3)
                    end_info[msg.payload[t]] = {msg.payload[t + 2], msg.payload[t + 1]};  // origin, count
            }
        }
        std::sort(starts.begin(), starts.end());
        const auto& own = me.state().at("tblocks");
        const std::uint64_t base = bl.begin(me.id());
        auto& out = me.state().buf("alignments");
        for (Word i0 : starts) {
            const std::size_t t = i0 - base;
            const Word count = own[3 * t + 1], origin = own[3 * t + 2];
            auto [lo, lc] = k > 1 ? end_info.at(i0 + k - 1) : std::pair<Word, Word>{origin, count};
            emit_spans(out, pr, i0, origin, count, lo, lc);
        }
        me.add_work(starts.size() + end_info.size());
        me.state().erase("tblocks");
    });

    auto words = gather(ctx, "alignments");
    for (std::size_t i = 0; i < M; ++i) ctx.state(i).erase("alignments");
    for (std::size_t t = 0; t + 4 < words.size(); t += 5)
        report.alignments.push_back({words[t], words[t + 1], words[t + 2], words[t + 3], words[t + 4]});
    return report;
}

PlusMatchReport match_plus(MpcContext& ctx, std::string_view text, std::string_view pattern, PlusPipeline pipeline) {
    return match_plus(ctx, text, parse_pattern(pattern), pipeline);
}

}  // namespace mpcsm
