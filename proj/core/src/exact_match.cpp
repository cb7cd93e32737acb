#include "mpcsm/exact_match.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace mpcsm {

std::vector<Word> to_words(std::string_view s) {
    std::vector<Word> w(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) w[i] = static_cast<unsigned char>(s[i]);
    return w;
}

std::string from_words(const std::vector<Word>& w) {
    std::string s(w.size(), '\0');
    for (std::size_t i = 0; i < w.size(); ++i) s[i] = static_cast<char>(w[i]);
    return s;
}

std::vector<std::size_t> failure_function(std::string_view p) {
    std::vector<std::size_t> f(p.size() + 1, 0);
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        while (k > 0 && p[i] != p[k]) k = f[k];
        if (p[i] == p[k]) ++k;
        f[i + 1] = k;
    }
    return f;
}

std::size_t smallest_period(std::string_view p) {
    if (p.empty()) return 0;
    return p.size() - failure_function(p).back();
}

KmpMatcher::KmpMatcher(std::string pattern) : p_(std::move(pattern)) {
    if (p_.empty()) throw PreconditionError("empty pattern");
    fail_ = failure_function(p_);
}

std::size_t KmpMatcher::step(std::size_t state, unsigned char c) const {
    if (state == p_.size()) state = fail_[state];
    while (state > 0 && static_cast<unsigned char>(p_[state]) != c) state = fail_[state];
    if (static_cast<unsigned char>(p_[state]) == c) ++state;
    return state;
}

MatchSet KmpMatcher::search(std::string_view text) const {
    MatchSet out{text.size(), p_.size(), {}};
    std::size_t st = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        st = step(st, static_cast<unsigned char>(text[i]));
        if (st == p_.size()) out.positions.push_back(i + 2 - p_.size());
    }
    return out;
}

std::uint64_t KmpMatcher::first_at_or_after(std::string_view text, std::uint64_t pos) const {
    if (pos == 0) pos = 1;
    std::size_t st = 0;
    for (std::size_t i = pos - 1; i < text.size(); ++i) {
        st = step(st, static_cast<unsigned char>(text[i]));
        if (st == p_.size()) return i + 2 - p_.size();
    }
    return 0;
}

MatchSet kmp_search(std::string_view text, std::string_view pattern) {
    return KmpMatcher(std::string(pattern)).search(text);
}

namespace {

enum Tag : Word { kPatternPiece = 1, kOverlap = 2 };

std::string assemble(const std::vector<std::pair<Word, std::string>>& pieces, std::size_t len) {
    std::string s(len, '\0');
    for (const auto& [off, str] : pieces) std::copy(str.begin(), str.end(), s.begin() + off);
    return s;
}

}  // namespace

MatchSet match_small_pattern(MpcContext& ctx, std::string_view text, std::string_view pattern) {
    const std::uint64_t n = text.size(), m = pattern.size();
    if (m == 0) throw PreconditionError("empty pattern");
    if (m > ctx.capacity())
        throw PreconditionError("pattern longer than the per-machine memory S; use the large-pattern matcher");
    auto tw = to_words(text), pw = to_words(pattern);
    auto tl = scatter_balanced(ctx, tw, "text");
    auto pl = scatter_balanced(ctx, pw, "pat");

    ctx.run_round([&](Machine& me) {
        const auto i = me.id();
        const auto& pat = me.state().at("pat");
        if (!pat.empty()) {
            std::vector<Word> msg{pl.begin(i)};
            msg.insert(msg.end(), pat.begin(), pat.end());
            for (std::size_t d = 0; d < me.machines(); ++d) me.send(d, kPatternPiece, msg);
        }
        // Machine j < i needs T[end(j), end(j)+m-1) intersected with this block.
        const auto& blk = me.state().at("text");
        const std::uint64_t lo = tl.begin(i), hi = tl.end(i);
        for (std::size_t j = 0; j < i; ++j) {
            if (tl.size(j) == 0) continue;
            std::uint64_t a = std::max(lo, tl.end(j));
            std::uint64_t b = std::min(hi, tl.end(j) + m - 1);
            if (a >= b) continue;
            std::vector<Word> msg{a};
            msg.insert(msg.end(), blk.begin() + (a - lo), blk.begin() + (b - lo));
            me.send(j, kOverlap, std::move(msg));
        }
    });
    ctx.exchange();

    ctx.run_round([&](Machine& me) {
        const auto i = me.id();
        std::vector<std::pair<Word, std::string>> pp;
        std::string window = from_words(me.state().at("text"));
        std::vector<std::pair<Word, std::string>> over;
        for (const auto& msg : me.inbox()) {
            std::string piece;
            for (std::size_t k = 1; k < msg.payload.size(); ++k) piece.push_back(static_cast<char>(msg.payload[k]));
            if (msg.tag == kPatternPiece) pp.emplace_back(msg.payload[0], std::move(piece));
            else over.emplace_back(msg.payload[0], std::move(piece));
        }
        std::sort(over.begin(), over.end());
        for (auto& [_, s] : over) window += s;
        std::string p = assemble(pp, m);
        auto& out = me.state().buf("matches");
        out.clear();
        if (tl.size(i) == 0) return;
        KmpMatcher local(p);
        auto found = local.search(window);
        for (auto pos : found.positions) out.push_back(tl.begin(i) + pos);
        me.add_work(window.size() + m);
    });

    return MatchSet{n, m, gather(ctx, "matches")};
}

namespace {

enum LargeTag : Word { kTextBlockHash = 1, kPatBlockHash = 2, kInterval = 3, kPatternHash = 4, kEndPrefix = 5 };

Word sub_mod(Word a, Word b, Word r) { return a >= b ? a - b : a + r - b; }

}  // namespace

MatchSet match_large_pattern(MpcContext& ctx, std::string_view text, std::string_view pattern,
                             const HashParams& hp) {
    const std::uint64_t n = text.size(), m = pattern.size();
    if (m == 0) throw PreconditionError("empty pattern");
    if (ctx.machines() > ctx.capacity())
        throw PreconditionError("aggregation needs M <= S");
    const std::size_t M = ctx.machines();
    const std::size_t c = 0, d = M - 1;

    auto tw = to_words(text), pw = to_words(pattern);
    auto tl = scatter_balanced(ctx, tw, "text");
    scatter_balanced(ctx, pw, "pat");
    const bool any_start = m <= n;
    const std::uint64_t last_start = any_start ? n - m : 0;  // 0-based

    // Stage 1: local prefix hashes; block hashes to c (text) and d (pattern).
    ctx.run_round([&](Machine& me) {
        const auto& sym = me.state().at("text");
        auto& ph = me.state().buf("phash");
        ph.assign(sym.size() + 1, 0);
        for (std::size_t k = 0; k < sym.size(); ++k)
            ph[k + 1] = merge_hash(hp, ph[k], hp.map(static_cast<unsigned char>(sym[k])), 1);
        me.send(c, kTextBlockHash, {ph.back(), sym.size()});
        const auto& pat = me.state().at("pat");
        Word h = 0;
        for (Word s : pat) h = merge_hash(hp, h, hp.map(static_cast<unsigned char>(s)), 1);
        me.send(d, kPatBlockHash, {h, pat.size()});
        me.state().erase("pat");
        me.add_work(sym.size() + pat.size());
    });
    ctx.exchange();

    // Stage 2: d broadcasts h(P); c builds running block hashes and routes interval hashes.
    ctx.run_round([&](Machine& me) {
        if (me.id() == d) {
            Word h = 0;
            for (const auto& msg : me.inbox())
                if (msg.tag == kPatBlockHash) h = merge_hash(hp, h, msg.payload[0], msg.payload[1]);
            for (std::size_t t = 0; t < M; ++t) me.send(t, kPatternHash, {h});
        }
        if (me.id() == c) {
            std::vector<Word> run(M, 0);
            Word acc = 0;
            for (const auto& msg : me.inbox())
                if (msg.tag == kTextBlockHash) {
                    acc = merge_hash(hp, acc, msg.payload[0], msg.payload[1]);
                    run[msg.src] = acc;
                }
            if (!any_start) return;
            for (std::size_t a = 0; a < M; ++a) {
                if (tl.size(a) == 0 || tl.begin(a) > last_start) continue;
                std::uint64_t s_hi = std::min(tl.end(a) - 1, last_start);
                std::size_t b_lo = tl.owner(tl.begin(a) + m - 1), b_hi = tl.owner(s_hi + m - 1);
                if (b_hi - b_lo > 1) throw std::logic_error("window ends span more than two blocks");
                for (std::size_t b = std::max(b_lo, a + 2); b <= b_hi; ++b) {
                    std::uint64_t len = tl.begin(b) - tl.end(a);
                    Word h = sub_mod(run[b - 1], mul_mod(run[a], pow_mod(hp.b, len, hp.r), hp.r), hp.r);
                    me.send(a, kInterval, {b, h, len});
                }
                me.add_work(2);
            }
        }
    });
    ctx.exchange();

    // Stage 3: end owners route their prefix hashes to the owner of each start.
    ctx.run_round([&](Machine& me) {
        auto& keep = me.state().buf("stage2");
        keep.clear();
        std::size_t intervals = 0;
        for (const auto& msg : me.inbox()) {
            if (msg.tag == kPatternHash) keep.insert(keep.begin(), msg.payload[0]);
            if (msg.tag == kInterval) {
                keep.insert(keep.end(), msg.payload.begin(), msg.payload.end());
                ++intervals;
            }
        }
        if (intervals > 2) throw std::logic_error("a machine received more than two interval hashes");
        const auto b = me.id();
        if (!any_start || tl.size(b) == 0) return;
        const auto& ph = me.state().at("phash");
        // Ends e in this block with start s = e - m + 1 >= 0, s <= last_start.
        std::uint64_t e_lo = std::max(tl.begin(b), m - 1);
        std::uint64_t e_hi = std::min(tl.end(b), last_start + m);  // exclusive
        std::uint64_t e = e_lo;
        while (e < e_hi) {
            std::size_t a = tl.owner(e - m + 1);
            std::uint64_t run_end = std::min(e_hi, tl.end(a) + m - 1);
            if (a != b) {
                std::vector<Word> msg{e};
                for (std::uint64_t x = e; x < run_end; ++x) msg.push_back(ph[x - tl.begin(b) + 1]);
                me.send(a, kEndPrefix, std::move(msg));
            }
            e = run_end;
        }
    });
    ctx.exchange();

    // Local assembly: suffix of own block, interval of middle blocks, prefix of the end block.
    ctx.run_round([&](Machine& me) {
        const auto a = me.id();
        auto& out = me.state().buf("matches");
        out.clear();
        if (!any_start || tl.size(a) == 0 || tl.begin(a) > last_start) return;
        const auto& ph = me.state().at("phash");
        const auto& st2 = me.state().at("stage2");
        const Word hP = st2.at(0);
        std::vector<std::array<Word, 3>> iv;
        for (std::size_t k = 1; k + 3 <= st2.size(); k += 3)
            iv.push_back({st2[k], st2[k + 1], st2[k + 2]});
        std::vector<Word> endpre;  // indexed by e - first_remote_end
        std::uint64_t remote_lo = ~Word{0};
        std::vector<std::pair<Word, std::vector<Word>>> runs;
        for (const auto& msg : me.inbox())
            if (msg.tag == kEndPrefix)
                runs.emplace_back(msg.payload[0], std::vector<Word>(msg.payload.begin() + 1, msg.payload.end()));
        std::sort(runs.begin(), runs.end());
        for (auto& [lo, hs] : runs) {
            if (remote_lo == ~Word{0}) remote_lo = lo;
            endpre.insert(endpre.end(), hs.begin(), hs.end());
        }
        const std::uint64_t base = tl.begin(a), blen = tl.size(a);
        std::uint64_t s_hi = std::min(tl.end(a) - 1, last_start);
        for (std::uint64_t s = base; s <= s_hi; ++s) {
            std::uint64_t e = s + m - 1;
            std::size_t b = tl.owner(e);
            Word h;
            if (b == a) {
                h = sub_mod(ph[e - base + 1], mul_mod(ph[s - base], pow_mod(hp.b, m, hp.r), hp.r), hp.r);
            } else {
                std::uint64_t suf_len = blen - (s - base);
                h = sub_mod(ph[blen], mul_mod(ph[s - base], pow_mod(hp.b, suf_len, hp.r), hp.r), hp.r);
                if (b >= a + 2) {
                    auto it = std::find_if(iv.begin(), iv.end(), [&](const auto& v) { return v[0] == b; });
                    if (it == iv.end()) throw std::logic_error("missing interval hash");
                    h = merge_hash(hp, h, (*it)[1], (*it)[2]);
                }
                h = merge_hash(hp, h, endpre.at(e - remote_lo), e - tl.begin(b) + 1);
            }
            if (h == hP) out.push_back(s + 1);
        }
        me.add_work(blen);
    });
    for (std::size_t i = 0; i < M; ++i) ctx.state(i).erase("stage2");
    return MatchSet{n, m, gather(ctx, "matches")};
}

}  // namespace mpcsm
