#include "mpcsm/star.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <functional>
#include <array>
#include <map>

#include "mpcsm/exact_match.hpp"

namespace mpcsm {

namespace {

constexpr Word kStarWord = 256;
constexpr Word kNone = std::numeric_limits<Word>::max();

std::size_t kmp_step(std::string_view p, const std::vector<std::size_t>& fail, std::size_t q, char c) {
    if (q == p.size()) q = fail[q];
    while (q > 0 && p[q] != c) q = fail[q];
    if (p[q] == c) ++q;
    return q;
}

std::size_t ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

Word encode_state(long v) { return v < 0 ? kNone : static_cast<Word>(v); }
long decode_state(Word w) { return w == kNone ? kUnreachable : static_cast<long>(w); }

std::vector<Word> table_words(const StarDpTable& t) {
    std::vector<Word> w(t.f.size());
    for (std::size_t k = 0; k < t.f.size(); ++k) w[k] = encode_state(t.f[k]);
    return w;
}

StarDpTable table_from(const std::vector<Word>& w) {
    StarDpTable t;
    t.f.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) t.f[k] = decode_state(w[k]);
    return t;
}

std::vector<Word> pattern_words(const Pattern& p) {
    std::vector<Word> w;
    w.reserve(p.size());
    for (const auto& t : p) w.push_back(t.kind == TokenKind::star ? kStarWord : Word{t.c});
    return w;
}

Pattern pattern_from(const std::vector<Word>& w) {
    Pattern p;
    p.reserve(w.size());
    for (Word x : w)
        p.push_back(x == kStarWord ? PatternToken{TokenKind::star, 0}
                                   : PatternToken{TokenKind::literal, static_cast<unsigned char>(x)});
    return p;
}

}  // namespace

StarPattern split_subpatterns(const Pattern& p) {
    if (p.empty()) throw PreconditionError("empty pattern");
    StarPattern sp;
    sp.raw = p;
    const std::size_t m = p.size();
    sp.g.assign(m + 1, 0);
    sp.h.assign(m + 1, 0);
    sp.run_of.assign(m, std::string::npos);
    for (std::size_t k = 1; k <= m; ++k) {
        const auto& t = p[k - 1];
        if (t.kind != TokenKind::literal && t.kind != TokenKind::star)
            throw PreconditionError("'*' matching accepts only literals and '*'");
        if (t.kind == TokenKind::star) {
            sp.g[k] = k;
            continue;
        }
        sp.g[k] = sp.g[k - 1];
        if (k == 1 || p[k - 2].kind == TokenKind::star) {
            sp.subpatterns.emplace_back();
            sp.sub_begin.push_back(k);
        }
        sp.subpatterns.back() += static_cast<char>(t.c);
        sp.run_of[k - 1] = sp.subpatterns.size() - 1;
    }
    sp.anchored_left = p.front().kind != TokenKind::star;
    sp.anchored_right = p.back().kind != TokenKind::star;
    for (const auto& s : sp.subpatterns) sp.fail.push_back(failure_function(s));
    for (std::size_t k = 1; k <= m; ++k) {
        if (sp.is_star(k)) continue;
        const std::size_t len = k - sp.g[k];
        sp.h[k] = len - sp.fail[sp.run_of[k - 1]][len];
    }
    return sp;
}

StarPattern split_subpatterns(std::string_view p) { return split_subpatterns(parse_pattern(p)); }

std::string StarPattern::normalized() const {
    std::string s;
    for (std::size_t k = 1; k <= m(); ++k) {
        if (is_star(k)) {
            if (s.empty() || s.back() != '*') s += '*';
        } else {
            const char c = static_cast<char>(raw[k - 1].c);
            if (c == '*' || c == '\\' || c == '?' || c == '+') s += '\\';
            s += c;
        }
    }
    return s;
}

const std::vector<std::size_t>& StarPattern::run_failure(std::size_t k) const { return fail.at(run_of.at(k - 1)); }

long star_reach(const StarPattern& p, std::string_view piece, std::size_t state) {
    const std::size_t m = p.m();
    if (state > m) throw std::out_of_range("star_reach: state out of range");
    auto close = [&](std::size_t st) {
        while (st < m && p.is_star(st + 1)) ++st;
        return st;
    };
    std::size_t st = close(state), pos = 0;
    if (!p.is_star(st)) {
        // Before the first star every symbol is forced.
        while (pos < piece.size()) {
            if (st == m || p.raw[st].c != static_cast<unsigned char>(piece[pos])) return kUnreachable;
            st = close(st + 1);
            ++pos;
            if (p.is_star(st)) break;
        }
        if (pos == piece.size()) return static_cast<long>(st);
    }
    for (;;) {
        if (st == m) return static_cast<long>(m);
        const std::size_t u = p.run_of[st];
        const std::string& seg = p.subpatterns[u];
        const std::size_t end = st + seg.size();
        const bool followed = end < m;
        std::size_t q = 0;
        bool locked = false;
        while (pos < piece.size()) {
            q = kmp_step(seg, p.fail[u], q, piece[pos++]);
            // Earliest occurrence of a run followed by a star is always the best choice.
            if (q == seg.size() && followed) {
                locked = true;
                break;
            }
        }
        if (!locked) return static_cast<long>(st + q);
        st = close(end);
    }
}

StarDpTable star_table(const StarPattern& p, std::string_view piece) {
    StarDpTable t;
    t.f.resize(p.m() + 1);
    for (std::size_t k = 0; k <= p.m(); ++k) t.f[k] = star_reach(p, piece, k);
    return t;
}

bool star_match_sequential(std::string_view s, const StarPattern& p) {
    return star_reach(p, s, 0) == static_cast<long>(p.m());
}

bool star_match_sequential(std::string_view s, std::string_view pattern) {
    return star_match_sequential(s, split_subpatterns(pattern));
}

StarDpTable star_merge_f(const StarDpTable& left, const StarDpTable& right, const StarPattern& p, MergeRule rule) {
    const std::size_t m = p.m();
    if (left.f.size() != m + 1 || right.f.size() != m + 1) throw std::invalid_argument("table size mismatch");
    StarDpTable out;
    out.f.assign(m + 1, kUnreachable);
    for (std::size_t k = 0; k <= m; ++k) {
        const long b = left.f[k];
        if (b < 0) continue;
        const auto beta = static_cast<std::size_t>(b);
        if (p.is_star(beta)) {
            out.f[k] = right.f[beta];
            continue;
        }
        long best = right.f[beta];
        const std::size_t g = p.g[beta];
        // States below beta are only reachable once a star inside [k, beta] has been passed.
        if (g >= 1 && g >= k) {
            best = std::max(best, right.f[g]);
            const std::size_t hh = p.h[beta];
            switch (rule) {
                case MergeRule::border_chain: {
                    const auto& fail = p.run_failure(beta);
                    for (std::size_t bd = fail[beta - g]; bd > 0; bd = fail[bd]) best = std::max(best, right.f[g + bd]);
                    break;
                }
                case MergeRule::period_multiples:
                    for (std::size_t l = 1; l <= (beta - g) / hh; ++l) best = std::max(best, right.f[beta - l * hh]);
                    break;
                case MergeRule::divisor_as_printed:
                    for (std::size_t l = 1; l <= (beta - hh) / g && l * hh <= beta - k; ++l)
                        best = std::max(best, right.f[beta - l * hh]);
                    break;
            }
        }
        out.f[k] = best;
    }
    return out;
}

bool star_match_dp(MpcContext& ctx, std::string_view s, const StarPattern& p, MergeRule rule) {
    const std::size_t m = p.m();
    if (m > ctx.capacity()) throw PreconditionError("star-dp needs m <= S");
    const std::size_t M = ctx.machines();
    const auto tl = scatter_balanced(ctx, to_words(s), "text");
    scatter_balanced(ctx, pattern_words(p.raw), "pat");
    std::size_t t = 1;
    while (t < M && tl.size(t) > 0) ++t;
    const std::size_t levels = ceil_log2(t);

    // Replicate the pattern: every machine sends its piece everywhere.
    ctx.run_round([&](Machine& me) {
        auto piece = me.state().at("pat");
        me.state().erase("pat");
        if (piece.empty()) return;
        for (std::size_t dst = 0; dst < M; ++dst) me.send(dst, 0, piece);
    });
    ctx.exchange();

    auto merge_level = [&](std::size_t r) -> Program {
        return [&, r](Machine& me) {
            const std::size_t i = me.id();
            if (i >= t) return;
            auto& tbl = me.state().buf("table");
            if (!me.inbox().empty()) {
                const StarPattern local = split_subpatterns(pattern_from(me.state().at("patw")));
                for (const auto& msg : me.inbox()) {
                    tbl = table_words(star_merge_f(table_from(tbl), table_from(msg.payload), local, rule));
                    me.add_work(m * (m + 1));
                }
            }
            if (r < levels) {
                const std::size_t half = std::size_t{1} << r;
                if (i % (2 * half) == half) {
                    me.send(i - half, 0, tbl);
                    me.state().erase("table");
                    me.state().erase("patw");
                }
            }
        };
    };

    // Base tables, then the first merge level's sends.
    ctx.run_round([&](Machine& me) {
        std::vector<Word> pw;
        for (const auto& msg : me.inbox()) pw.insert(pw.end(), msg.payload.begin(), msg.payload.end());
        if (me.id() >= t) return;
        const StarPattern local = split_subpatterns(pattern_from(pw));
        const auto& blk = me.state().at("text");
        me.state().buf("table") = table_words(star_table(local, from_words(blk)));
        me.add_work((m + 1) * (blk.size() + m));
        me.state().erase("text");
        me.state().buf("patw") = std::move(pw);
        if (levels > 0 && me.id() % 2 == 1) {
            me.send(me.id() - 1, 0, me.state().at("table"));
            me.state().erase("table");
            me.state().erase("patw");
        }
    });
    for (std::size_t r = 1; r <= levels; ++r) {
        ctx.exchange();
        ctx.run_round(merge_level(r));
    }
    const bool ok = decode_state(ctx.state(0).at("table")[0]) == static_cast<long>(m);
    for (std::size_t i = 0; i < M; ++i) {
        ctx.state(i).erase("table");
        ctx.state(i).erase("patw");
        ctx.state(i).erase("text");
    }
    return ok;
}

bool star_match_dp(MpcContext& ctx, std::string_view s, std::string_view pattern) {
    return star_match_dp(ctx, s, split_subpatterns(pattern));
}

bool is_prefix_free(const StarPattern& p) {
    auto subs = p.subpatterns;
    std::sort(subs.begin(), subs.end());
    // After sorting, a prefix relation always shows up between neighbours.
    for (std::size_t i = 0; i + 1 < subs.size(); ++i)
        if (subs[i + 1].compare(0, subs[i].size(), subs[i]) == 0) return false;
    return true;
}

}  // namespace mpcsm

namespace mpcsm {

namespace {

constexpr Word kJump = 11;
constexpr Word kRegister = 12;

using OwnerFn = std::function<std::size_t(Word)>;

// Doubling state: "pd_node" holds [id, jump, dist, final] sorted by id; "pd_in" holds [w, v]
// meaning node v currently jumps to local node w. Applies the updates in the inbox, then (when
// `send`) pushes every registered v one jump further.
Program doubling_step(OwnerFn owner, bool send) {
    return [owner, send](Machine& me) {
        auto& nodes = me.state().buf("pd_node");
        auto find = [&nodes](Word id) -> Word* {
            std::size_t lo = 0, hi = nodes.size() / 4;
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (nodes[4 * mid] < id) lo = mid + 1; else hi = mid;
            }
            if (lo * 4 >= nodes.size() || nodes[4 * lo] != id) throw std::logic_error("unknown doubling node");
            return &nodes[4 * lo];
        };
        std::vector<Word> reg;
        for (const auto& msg : me.inbox()) {
            const auto& pl = msg.payload;
            if (msg.tag == kJump) {
                for (std::size_t t = 0; t + 3 < pl.size(); t += 4) {
                    Word* v = find(pl[t]);
                    v[1] = pl[t + 1];
                    v[2] += pl[t + 2];
                    v[3] = pl[t + 3];
                }
            } else if (msg.tag == kRegister) {
                reg.insert(reg.end(), pl.begin(), pl.end());
            }
        }
        me.state().buf("pd_in") = std::move(reg);
        me.add_work(me.inbox().size());
        if (!send) return;
        const auto& in = me.state().at("pd_in");
        std::map<std::size_t, std::vector<Word>> jumps, regs;
        for (std::size_t t = 0; t + 1 < in.size(); t += 2) {
            const Word* w = find(in[t]);
            const Word v = in[t + 1];
            auto& j = jumps[owner(v)];
            const bool root = w[1] == w[0];
            j.insert(j.end(), {v, w[1], w[2], root ? Word{1} : w[3]});
            if (!root && w[3] == 0) {
                auto& r = regs[owner(w[1])];
                r.insert(r.end(), {w[1], v});
            }
        }
        me.add_work(in.size());
        for (auto& [dst, pl] : jumps) me.send(dst, kJump, std::move(pl));
        for (auto& [dst, pl] : regs) me.send(dst, kRegister, std::move(pl));
    };
}

}  // namespace

bool pointer_doubling_reach(MpcContext& ctx, const std::vector<long>& succ, std::size_t source, std::size_t target) {
    const std::size_t N = succ.size();
    if (source >= N || target >= N) throw PreconditionError("pointer_doubling_reach: node out of range");
    for (std::size_t v = 0; v < N; ++v)
        if (succ[v] >= 0 && (static_cast<std::size_t>(succ[v]) <= v || static_cast<std::size_t>(succ[v]) >= N))
            throw PreconditionError("successor function must move strictly forward");
    const std::size_t M = ctx.machines();
    const auto layout = BlockLayout::balanced(N, M);
    // [id, jump]; the target loses its out-edge so chains through it stop there.
    std::vector<Word> init;
    for (std::size_t v = 0; v < N; ++v)
        init.insert(init.end(), {v, (succ[v] < 0 || v == target) ? v : static_cast<Word>(succ[v])});
    ctx.scatter_input(init, "pd_init", 2 * layout.block);
    OwnerFn owner = [layout](Word id) { return layout.owner(id); };

    ctx.run_round([&](Machine& me) {
        const auto& init_blk = me.state().at("pd_init");
        auto& nodes = me.state().buf("pd_node");
        std::map<std::size_t, std::vector<Word>> regs;
        for (std::size_t t = 0; t + 1 < init_blk.size(); t += 2) {
            const Word v = init_blk[t], j = init_blk[t + 1];
            nodes.insert(nodes.end(), {v, j, j == v ? Word{0} : Word{1}, j == v ? Word{1} : Word{0}});
            if (j != v) regs[owner(j)].insert(regs[owner(j)].end(), {j, v});
        }
        me.state().erase("pd_init");
        for (auto& [dst, pl] : regs) me.send(dst, kRegister, std::move(pl));
    });
    ctx.exchange();
    const std::size_t levels = ceil_log2(N > 1 ? N - 1 : 1);
    for (std::size_t l = 0; l < levels; ++l) {
        ctx.run_round(doubling_step(owner, true));
        ctx.exchange();
    }
    ctx.run_round(doubling_step(owner, false));

    const auto& nodes = ctx.state(owner(source)).at("pd_node");
    bool reached = false;
    for (std::size_t t = 0; t + 3 < nodes.size(); t += 4)
        if (nodes[t] == source) reached = nodes[t + 1] == target;
    for (std::size_t i = 0; i < M; ++i) {
        ctx.state(i).erase("pd_node");
        ctx.state(i).erase("pd_in");
    }
    return reached;
}

}  // namespace mpcsm

namespace mpcsm {

namespace {

constexpr Word kSummary = 21;
constexpr Word kMeta = 22;
constexpr Word kSetEntry = 23;
constexpr Word kCover = 24;
constexpr Word kAnswer = 29;
constexpr Word kQuery = 25;
constexpr Word kFirstPoint = 26;
constexpr Word kNode = 27;
constexpr Word kSource = 28;
constexpr Word kStarValue = 257;  // hash value of '*' in pattern prefix hashes; never compared

Word push_hash(const HashParams& hp, Word h, Word v) { return (mul_mod(h, hp.b, hp.r) + v) % hp.r; }

Word sub_hash(const HashParams& hp, Word whole, Word before, std::uint64_t len) {
    const Word t = mul_mod(before, pow_mod(hp.b, len, hp.r), hp.r);
    return whole >= t ? whole - t : whole + hp.r - t;
}

std::size_t set_owner(Word h, Word len, std::size_t M) {
    return static_cast<std::size_t>((h ^ (len * 0x9e3779b97f4a7c15ULL)) % M);
}

// Per-machine summary of a pattern piece, sent to the aggregator.
enum SummaryField {
    kTextLen, kTextHash, kPatLen, kPatHash, kHasStar, kFirstIsStar, kLastIsStar, kLastStarLocal,
    kHashAtLastStar, kLeadRun, kTrailRun, kInnerMax, kRunStarts, kSummaryWords
};

// What the aggregator returns to every machine.
enum MetaField {
    kTextBefore, kPatBefore, kRunsBefore, kLastStarBefore, kHashAtStarBefore, kPrevIsStar,
    kNextIsStarOrEnd, kLmax, kW, kAnchoredLeft, kAnchoredRight, kIterations, kLevels, kMetaWords
};

}  // namespace

bool star_match_nonprefix(MpcContext& ctx, std::string_view s, const StarPattern& p, const HashParams& hp) {
    if (p.w() == 0) throw PreconditionError("star-nonprefix needs at least one subpattern");
    if (!is_prefix_free(p)) throw PreconditionError("subpatterns must be prefix-free");
    for (const auto& sub : p.subpatterns)
        if (sub.size() > ctx.capacity()) throw PreconditionError("star-nonprefix needs every subpattern length <= S");
    const std::uint64_t n = s.size();
    const std::size_t M = ctx.machines();
    const auto tl = scatter_balanced(ctx, to_words(s), "text");
    const auto pl = scatter_balanced(ctx, pattern_words(p.raw), "pat");
    OwnerFn text_owner = [tl](Word pos1) { return tl.owner(pos1 - 1); };

    // Step 1a: local prefix hashes; block summaries to the aggregator.
    ctx.run_round([&](Machine& me) {
        const auto& txt = me.state().at("text");
        auto& tph = me.state().buf("tph");
        tph.assign(txt.size() + 1, 0);
        for (std::size_t k = 0; k < txt.size(); ++k)
            tph[k + 1] = push_hash(hp, tph[k], hp.map(static_cast<unsigned char>(txt[k])));
        const auto& pat = me.state().at("pat");
        std::vector<Word> sm(kSummaryWords, 0);
        sm[kTextLen] = txt.size();
        sm[kTextHash] = tph.back();
        sm[kPatLen] = pat.size();
        Word h = 0;
        std::uint64_t run = 0, runs = 0;
        bool seen_star = false;
        for (std::size_t k = 0; k < pat.size(); ++k) {
            const bool star = pat[k] == kStarWord;
            h = push_hash(hp, h, star ? kStarValue : hp.map(static_cast<unsigned char>(pat[k])));
            if (star) {
                if (!seen_star) sm[kLeadRun] = run;
                else sm[kInnerMax] = std::max<Word>(sm[kInnerMax], run);
                seen_star = true;
                run = 0;
                sm[kLastStarLocal] = k + 1;
                sm[kHashAtLastStar] = h;
            } else {
                if (k > 0 && pat[k - 1] != kStarWord) {
                } else if (k > 0) {
                    ++runs;  // a run starting inside the piece (after a local star)
                }
                ++run;
            }
        }
        sm[kPatHash] = h;
        sm[kHasStar] = seen_star;
        if (!seen_star) sm[kLeadRun] = run;
        sm[kTrailRun] = run;
        sm[kFirstIsStar] = !pat.empty() && pat.front() == kStarWord;
        sm[kLastIsStar] = !pat.empty() && pat.back() == kStarWord;
        sm[kRunStarts] = runs;
        me.add_work(txt.size() + pat.size());
        me.send(0, kSummary, std::move(sm));
    });
    ctx.exchange();

    // Step 1b: the aggregator scans the summaries in machine order and answers every machine.
    ctx.run_round([&](Machine& me) {
        if (me.id() != 0) return;
        std::vector<const std::vector<Word>*> sm(M, nullptr);
        for (const auto& msg : me.inbox()) sm[msg.src] = &msg.payload;
        std::vector<std::vector<Word>> meta(M, std::vector<Word>(kMetaWords, 0));
        Word text_h = 0, pat_h = 0, star_h = 0;
        std::uint64_t runs = 0, last_star = 0, open = 0, lmax = 0, pos = 0;
        bool prev_star = true;  // position 0 behaves like a star for run counting
        for (std::size_t i = 0; i < M; ++i) {
            const auto& b = *sm[i];
            auto& mt = meta[i];
            mt[kTextBefore] = text_h;
            mt[kPatBefore] = pat_h;
            mt[kRunsBefore] = runs;
            mt[kLastStarBefore] = last_star;
            mt[kHashAtStarBefore] = star_h;
            mt[kPrevIsStar] = prev_star;
            text_h = (mul_mod(text_h, pow_mod(hp.b, b[kTextLen], hp.r), hp.r) + b[kTextHash]) % hp.r;
            if (b[kPatLen] == 0) continue;
            if (prev_star && !b[kFirstIsStar]) ++runs;
            runs += b[kRunStarts];
            if (b[kHasStar]) {
                lmax = std::max<std::uint64_t>({lmax, open + b[kLeadRun], b[kInnerMax]});
                open = b[kTrailRun];
                last_star = pos + b[kLastStarLocal];
                star_h = (mul_mod(pat_h, pow_mod(hp.b, b[kLastStarLocal], hp.r), hp.r) + b[kHashAtLastStar]) % hp.r;
            } else {
                open += b[kPatLen];
            }
            pat_h = (mul_mod(pat_h, pow_mod(hp.b, b[kPatLen], hp.r), hp.r) + b[kPatHash]) % hp.r;
            pos += b[kPatLen];
            prev_star = b[kLastIsStar];
        }
        lmax = std::max(lmax, open);
        const std::uint64_t w = runs;
        // A subpattern used in a match leaves at least one symbol for each of the others.
        const std::int64_t room = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(w) + 1;
        const std::uint64_t bound = room <= 0 ? 0 : std::min<std::uint64_t>(lmax, static_cast<std::uint64_t>(room));
        const std::uint64_t iters = ceil_log2(bound + 1);
        const std::uint64_t levels = w >= 2 ? ceil_log2(std::min<std::uint64_t>(w - 1, n)) : 0;
        bool next_star = true;  // past the end
        for (std::size_t i = M; i-- > 0;) {
            const auto& b = *sm[i];
            meta[i][kNextIsStarOrEnd] = next_star;
            if (b[kPatLen] > 0) next_star = b[kFirstIsStar];
        }
        const bool anchored_left = !(*sm[0])[kFirstIsStar];
        for (std::size_t i = 0; i < M; ++i) {
            auto& mt = meta[i];
            mt[kLmax] = lmax;
            mt[kW] = w;
            mt[kAnchoredLeft] = anchored_left;
            mt[kAnchoredRight] = !prev_star;
            mt[kIterations] = iters;
            mt[kLevels] = levels;
            me.send(i, kMeta, std::move(mt));
        }
        me.add_work(2 * M);
    });
    ctx.exchange();

    auto reach = [n](const std::vector<Word>& mt) -> std::uint64_t {
        // A subpattern used in a match leaves at least one symbol for each of the others.
        const std::int64_t room = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(mt[kW]) + 1;
        return room <= 0 ? 0 : std::min<std::uint64_t>(mt[kLmax], static_cast<std::uint64_t>(room));
    };
    auto hash_upto = [&](Machine& me, std::uint64_t pos1) {
        // Global prefix hash H(pos1) for a position in this block or its covered tail.
        const auto& tph = me.state().at("tph");
        const auto& mt = me.state().at("meta");
        const std::uint64_t off = pos1 - tl.begin(me.id());
        return (mul_mod(mt[kTextBefore], pow_mod(hp.b, off, hp.r), hp.r) + tph[off]) % hp.r;
    };

    // Step 2 start: pattern prefix entries go to the hash-partitioned set; every machine receives
    // the symbols following its block, enough to hash any candidate occurrence starting in it.
    ctx.run_round([&](Machine& me) {
        auto& mt = me.state().buf("meta");
        mt = me.inbox().at(0).payload;
        const auto& pat = me.state().at("pat");
        const std::uint64_t pbase = pl.begin(me.id());
        std::map<std::size_t, std::vector<Word>> entries;
        Word local_h = 0;
        std::uint64_t g = mt[kLastStarBefore];
        Word hg = mt[kHashAtStarBefore];
        std::uint64_t runs = mt[kRunsBefore];
        bool prev_star = mt[kPrevIsStar];
        for (std::size_t k = 0; k < pat.size(); ++k) {
            const bool star = pat[k] == kStarWord;
            local_h = push_hash(hp, local_h, star ? kStarValue : hp.map(static_cast<unsigned char>(pat[k])));
            const std::uint64_t pos = pbase + k + 1;
            const Word hk = (mul_mod(mt[kPatBefore], pow_mod(hp.b, k + 1, hp.r), hp.r) + local_h) % hp.r;
            if (star) {
                g = pos;
                hg = hk;
                prev_star = true;
                continue;
            }
            if (prev_star) ++runs;
            prev_star = false;
            const bool last_of_run = k + 1 < pat.size() ? pat[k + 1] == kStarWord : mt[kNextIsStarOrEnd] != 0;
            const Word len = pos - g;
            const Word sh = sub_hash(hp, hk, hg, len);
            auto& e = entries[set_owner(sh, len, me.machines())];
            e.insert(e.end(), {sh, len, last_of_run ? runs : Word{0}});
        }
        me.state().erase("pat");
        const std::uint64_t cap = reach(mt);
        const auto& txt = me.state().at("text");
        const std::uint64_t b = tl.begin(me.id()), e = tl.end(me.id());
        for (std::size_t i = me.id(); cap > 1 && i-- > 0;) {
            if (tl.size(i) == 0) continue;
            const std::uint64_t want_end = tl.end(i) + cap - 1;
            if (want_end <= b) break;  // earlier blocks need even less
            const std::uint64_t lo = std::max(b, tl.end(i)), hi = std::min(e, want_end);
            if (lo >= hi) continue;
            std::vector<Word> c{lo};
            c.insert(c.end(), txt.begin() + static_cast<std::ptrdiff_t>(lo - b),
                     txt.begin() + static_cast<std::ptrdiff_t>(hi - b));
            me.send(i, kCover, std::move(c));
        }
        me.add_work(pat.size() + txt.size());
        for (auto& [dst, pl2] : entries) me.send(dst, kSetEntry, std::move(pl2));
    });
    const std::uint64_t iters = ctx.state(0).at("meta")[kIterations];
    const std::uint64_t levels = ctx.state(0).at("meta")[kLevels];
    const std::uint64_t w = ctx.state(0).at("meta")[kW];
    ctx.exchange();

    // Token per text position: [i, lo, hi, u, hash, mid]. The longest pattern prefix equal to
    // s[i..] has length in [lo, hi]; u is the subpattern completed at length lo, if any.
    constexpr std::size_t kTok = 6;
    auto issue = [&](Machine& me) {
        auto& tok = me.state().buf("tok");
        std::vector<std::pair<Word, Word>> keys;
        for (std::size_t t = 0; t < tok.size(); t += kTok) {
            if (tok[t + 1] >= tok[t + 2]) continue;
            const Word i = tok[t], mid = (tok[t + 1] + tok[t + 2] + 1) / 2;
            tok[t + 4] = sub_hash(hp, hash_upto(me, i + mid - 1), hash_upto(me, i - 1), mid);
            tok[t + 5] = mid;
            keys.emplace_back(tok[t + 4], mid);
        }
        // One question per distinct substring: popular substrings must not pile up on their owner.
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::map<std::size_t, std::vector<Word>> queries;
        for (const auto& [h, len] : keys) {
            auto& q = queries[set_owner(h, len, me.machines())];
            q.insert(q.end(), {h, len});
        }
        me.add_work(tok.size() + keys.size());
        for (auto& [dst, pl2] : queries) me.send(dst, kQuery, std::move(pl2));
    };

    ctx.run_round([&](Machine& me) {
        auto& set = me.state().buf("qset");
        std::vector<std::pair<Word, std::vector<Word>>> covers;
        for (const auto& msg : me.inbox()) {
            const auto& a = msg.payload;
            if (msg.tag == kSetEntry) set.insert(set.end(), a.begin(), a.end());
            else covers.emplace_back(a.front(), std::vector<Word>(a.begin() + 1, a.end()));
        }
        // Sort [hash, len, u] triples; shared prefixes of different subpatterns collapse.
        std::vector<std::array<Word, 3>> rec;
        for (std::size_t t = 0; t + 2 < set.size(); t += 3) rec.push_back({set[t], set[t + 1], set[t + 2]});
        std::sort(rec.begin(), rec.end());
        std::vector<Word> flat;
        for (std::size_t r = 0; r < rec.size(); ++r) {
            if (r > 0 && rec[r][0] == rec[r - 1][0] && rec[r][1] == rec[r - 1][1]) {
                flat.back() = std::max(flat.back(), rec[r][2]);
                continue;
            }
            flat.insert(flat.end(), rec[r].begin(), rec[r].end());
        }
        set = std::move(flat);

        std::sort(covers.begin(), covers.end());
        const auto& txt = me.state().at("text");
        auto& tph = me.state().buf("tph");
        tph.assign(1, 0);
        auto extend = [&](Word c) { tph.push_back(push_hash(hp, tph.back(), hp.map(static_cast<unsigned char>(c)))); };
        for (Word c : txt) extend(c);
        for (const auto& [_, sym] : covers)
            for (Word c : sym) extend(c);

        const std::uint64_t cap = reach(me.state().at("meta"));
        auto& tok = me.state().buf("tok");
        const std::uint64_t base = tl.begin(me.id());
        for (std::size_t k = 0; k < txt.size(); ++k) {
            const Word i = base + k + 1;
            tok.insert(tok.end(), {i, 0, std::min<std::uint64_t>(cap, n - i + 1), 0, 0, 0});
        }
        me.add_work(set.size() + tph.size());
        if (iters > 0) issue(me);
    });

    for (std::uint64_t it = 0; it < iters; ++it) {
        ctx.exchange();
        ctx.run_round([&](Machine& me) {
            const auto& set = me.state().at("qset");
            for (const auto& msg : me.inbox()) {
                const auto& a = msg.payload;
                std::vector<Word> ans;
                ans.reserve(2 * a.size());
                for (std::size_t t = 0; t + 1 < a.size(); t += 2) {
                    const Word h = a[t], len = a[t + 1];
                    std::size_t l = 0, r = set.size() / 3;
                    while (l < r) {
                        const std::size_t c = (l + r) / 2;
                        if (set[3 * c] < h || (set[3 * c] == h && set[3 * c + 1] < len)) l = c + 1;
                        else r = c;
                    }
                    const bool found = l < set.size() / 3 && set[3 * l] == h && set[3 * l + 1] == len;
                    ans.insert(ans.end(), {h, len, found ? Word{1} : Word{0}, found ? set[3 * l + 2] : Word{0}});
                }
                me.add_work(a.size());
                me.send(msg.src, kAnswer, std::move(ans));
            }
        });
        ctx.exchange();
        const bool last = it + 1 == iters;
        ctx.run_round([&, last](Machine& me) {
            std::vector<std::array<Word, 4>> ans;
            for (const auto& msg : me.inbox())
                for (std::size_t t = 0; t + 3 < msg.payload.size(); t += 4)
                    ans.push_back({msg.payload[t], msg.payload[t + 1], msg.payload[t + 2], msg.payload[t + 3]});
            std::sort(ans.begin(), ans.end());
            auto& tok = me.state().buf("tok");
            for (std::size_t t = 0; t < tok.size(); t += kTok) {
                if (tok[t + 1] >= tok[t + 2]) continue;
                const std::array<Word, 4> key{tok[t + 4], tok[t + 5], 0, 0};
                const auto hit = std::lower_bound(ans.begin(), ans.end(), key);
                if (hit == ans.end() || (*hit)[0] != key[0] || (*hit)[1] != key[1])
                    throw std::logic_error("unanswered prefix query");
                if ((*hit)[2]) {
                    tok[t + 1] = tok[t + 5];
                    tok[t + 3] = (*hit)[3];
                } else {
                    tok[t + 2] = tok[t + 5] - 1;
                }
            }
            me.add_work(tok.size() + ans.size());
            if (!last) issue(me);
        });
    }

    ctx.run_round([&](Machine& me) {
        const auto& tok = me.state().at("tok");
        auto& done = me.state().buf("done");
        for (std::size_t t = 0; t < tok.size(); t += kTok) {
            if (tok[t + 1] != tok[t + 2]) throw std::logic_error("binary search did not converge");
            done.insert(done.end(), {tok[t], tok[t + 1], tok[t + 3]});
        }
        me.state().erase("tok");
    });

    const bool anchored_left = ctx.state(0).at("meta")[kAnchoredLeft] != 0;
    const bool anchored_right = ctx.state(0).at("meta")[kAnchoredRight] != 0;
    auto cleanup = [&] {
        for (std::size_t i = 0; i < M; ++i)
            for (const char* b : {"source", "pd_node", "pd_in", "meta", "text", "pat", "tph", "done", "qset", "srt", "tok"})
                ctx.state(i).erase(b);
    };
    if (w == 1) {
        // One subpattern: any admissible occurrence decides, no chaining needed.
        bool found = false;
        for (std::size_t i = 0; i < M && !found; ++i) {
            const auto& done = ctx.state(i).at("done");
            for (std::size_t t = 0; t + 2 < done.size(); t += 3) {
                const Word pos = done[t], len = done[t + 1];
                if (done[t + 2] != 1) continue;
                if (anchored_left && pos != 1) continue;
                if (anchored_right && pos + len != n + 1) continue;
                found = true;
            }
        }
        cleanup();
        return found;
    }

    // Step 3: points (subpattern occurrences) and successor queries, sorted by (level, position).
    ctx.run_round([&](Machine& me) {
        const auto& done = me.state().at("done");
        auto& srt = me.state().buf("srt");
        for (std::size_t t = 0; t + 2 < done.size(); t += 3) {
            const Word i = done[t], len = done[t + 1], u = done[t + 2];
            if (u == 0) continue;
            if (u == w && anchored_right && i + len != n + 1) continue;
            srt.insert(srt.end(), {u, i, 1, i});
            if (u < w) srt.insert(srt.end(), {u + 1, i + len, 0, i});
        }
        me.state().erase("done");
        me.state().erase("qset");
        me.state().erase("tph");
        me.state().erase("text");
        me.add_work(done.size());
    });
    sample_sort(ctx, "srt", 4);

    ctx.run_round([&](Machine& me) {
        const auto& srt = me.state().at("srt");
        std::vector<Word> first{0, 0, 0};
        for (std::size_t t = 0; t + 3 < srt.size(); t += 4)
            if (srt[t + 2] == 1) {
                first = {1, srt[t], srt[t + 1]};
                break;
            }
        for (std::size_t dst = 0; dst < me.machines(); ++dst) me.send(dst, kFirstPoint, first);
    });
    ctx.exchange();

    ctx.run_round([&](Machine& me) {
        const std::size_t id = me.id(), Mm = me.machines();
        std::vector<std::vector<Word>> firsts(Mm);
        for (const auto& msg : me.inbox()) firsts[msg.src] = msg.payload;
        const auto& srt = me.state().at("srt");
        std::map<std::size_t, std::vector<Word>> nodes, regs;
        auto answer = [&](Word origin, Word succ) {
            auto& nd = nodes[text_owner(origin)];
            nd.insert(nd.end(), {origin, succ});
            if (succ != kNone) {
                auto& r = regs[text_owner(succ)];
                r.insert(r.end(), {succ, origin});
            }
        };
        // Nearest point on a later machine, as (level, position).
        std::pair<Word, Word> later{kNone, kNone};
        for (std::size_t j = id + 1; j < Mm; ++j)
            if (!firsts[j].empty() && firsts[j][0] == 1) {
                later = {firsts[j][1], firsts[j][2]};
                break;
            }
        const std::size_t R = srt.size() / 4;
        std::pair<Word, Word> next = later;
        std::vector<Word> succ_of(R, kNone);
        for (std::size_t r = R; r-- > 0;) {
            const Word* rec = &srt[4 * r];
            if (rec[2] == 1) {
                next = {rec[0], rec[1]};
                if (rec[0] == w) answer(rec[3], kNone);
            } else {
                answer(rec[3], next.first == rec[0] ? next.second : kNone);
            }
        }
        // The globally first point starts the chain when it belongs to the first subpattern.
        bool earlier = false;
        for (std::size_t j = 0; j < id; ++j) earlier = earlier || (!firsts[j].empty() && firsts[j][0] == 1);
        if (!earlier) {
            for (std::size_t r = 0; r < R; ++r) {
                const Word* rec = &srt[4 * r];
                if (rec[2] != 1) continue;
                if (rec[0] == 1 && (!anchored_left || rec[1] == 1)) me.send(text_owner(rec[1]), kSource, {rec[1]});
                break;
            }
        }
        me.add_work(R + Mm);
        me.state().erase("srt");
        for (auto& [dst, pl2] : nodes) me.send(dst, kNode, std::move(pl2));
        for (auto& [dst, pl2] : regs) me.send(dst, kRegister, std::move(pl2));
    });
    ctx.exchange();

    // Step 4: pointer doubling from the answers; registrations arrived with them.
    auto absorb_nodes = [&](Machine& me) {
        std::vector<std::array<Word, 4>> recs;
        for (const auto& msg : me.inbox()) {
            if (msg.tag == kNode) {
                for (std::size_t t = 0; t + 1 < msg.payload.size(); t += 2) {
                    const Word v = msg.payload[t], sc = msg.payload[t + 1];
                    recs.push_back(sc == kNone ? std::array<Word, 4>{v, v, 0, 1} : std::array<Word, 4>{v, sc, 1, 0});
                }
            } else if (msg.tag == kSource) {
                me.state().buf("source") = msg.payload;
            }
        }
        std::sort(recs.begin(), recs.end());
        auto& nodes = me.state().buf("pd_node");
        for (const auto& r : recs) nodes.insert(nodes.end(), r.begin(), r.end());
    };
    for (std::uint64_t l = 0; l <= levels; ++l) {
        const bool send = l < levels;
        ctx.run_round([&, send, l](Machine& me) {
            if (l == 0) absorb_nodes(me);
            doubling_step(text_owner, send)(me);
        });
        if (send) ctx.exchange();
    }

    bool match = false;
    for (std::size_t i = 0; i < M; ++i) {
        auto& st = ctx.state(i);
        if (st.has("source") && !st.at("source").empty()) {
            const Word src = st.at("source")[0];
            const auto& nodes = st.at("pd_node");
            for (std::size_t t = 0; t + 3 < nodes.size(); t += 4)
                if (nodes[t] == src) match = nodes[t + 2] == w - 1;
        }
    }
    cleanup();
    return match;
}

bool star_match_nonprefix(MpcContext& ctx, std::string_view s, std::string_view pattern, std::uint64_t seed) {
    return star_match_nonprefix(ctx, s, split_subpatterns(pattern), HashParams::seeded(seed));
}

}  // namespace mpcsm
